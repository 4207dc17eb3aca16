//! End-to-end acceptance checks, one line per criterion.
//!
//! Runs without the libtest harness so the PASS/FAIL lines always show.

use std::time::Instant;

use rand::{rngs::StdRng, Rng, SeedableRng};

use microlub::fem1d::{
    assemble_advected_laplacian, dofs, solve_tridiagonal, FemFunction, TridiagonalMatrix, TridiagonalSystem,
};
use microlub::scheme::{solve_potential, stability_constant_from, w_operator};
use microlub::{
    BearingGeometry, BearingReport, Grids, Initializer, ModelParams, RoughnessProfile, Scheme, SolveOutcome,
    VerticalGrid,
};
use microlub_oracles::{dense_solve, m0_reference, psi_ode_oracle, DenseSystem};

type Verdict = Result<String, String>;

fn slider_scheme(n: f64, m: f64, n1: usize, nz: usize) -> Scheme {
    let params = ModelParams::from_derived(n, 0.01, 0.1, 0.01, 1.0, m).unwrap();
    let geometry = BearingGeometry::inclined(-0.5, RoughnessProfile::Flat).unwrap();
    Scheme::new(params, geometry, Grids::new(n1, nz).unwrap()).unwrap()
}

struct Run {
    n: f64,
    m: f64,
    outcome: SolveOutcome,
    report: BearingReport,
    seconds: f64,
}

/// Slider-bearing runs on the 200 x 400 grid for every (N, M).
fn slider_runs() -> Vec<Run> {
    let mut runs = Vec::new();
    for n in [0.1, 0.2, 0.3] {
        for m in [0.0, 0.5, 1.0] {
            let start = Instant::now();
            let scheme = slider_scheme(n, m, 199, 400);
            let outcome = scheme.solve(Initializer::Couette, 1e-9, 500).unwrap();
            let report = BearingReport::from_outcome(&scheme, &outcome);
            runs.push(Run {
                n,
                m,
                outcome,
                report,
                seconds: start.elapsed().as_secs_f64(),
            });
        }
    }
    runs
}

fn max_abs_diff(a: impl IntoIterator<Item = f64>, b: impl IntoIterator<Item = f64>) -> f64 {
    a.into_iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn random_trial(grid: &VerticalGrid, rng: &mut StdRng) -> FemFunction {
    let mut v: Vec<f64> = (0..grid.node_count()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    *v.last_mut().unwrap() = 0.0;
    FemFunction::trial(v).unwrap()
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let mut notes = Vec::new();
    for nz in [50, 100, 400] {
        let grid = VerticalGrid::new(nz).unwrap();
        let h = grid.step();
        let pot = solve_potential(0.0, &grid).unwrap();
        let err = max_abs_diff(
            pot.psi.values().iter().copied(),
            grid.nodes().iter().map(|z| 0.5 * (1.0 - z * z)),
        );
        let bar = (pot.psi_bar - 1.0 / 3.0).abs();
        if err > 5.0 * h * h || bar > 5.0 * h * h {
            return Err(format!("nZ = {nz}: nodal {err:.2e}, mean {bar:.2e}, bound {:.2e}", 5.0 * h * h));
        }
    }
    let grid = VerticalGrid::new(400).unwrap();
    for m in [0.5, 1.0] {
        let fem = solve_potential(m, &grid).unwrap();
        let ode = psi_ode_oracle(m, 40_000).unwrap();
        let err = max_abs_diff(fem.psi.values().iter().copied(), grid.nodes().iter().map(|&z| ode.eval(z)));
        notes.push(format!("M = {m}: {err:.2e}"));
        if err > 1e-6 {
            return Err(format!("M = {m}: FEM vs ODE {err:.2e} > 1e-6"));
        }
    }
    let t = start.elapsed().as_secs_f64();
    if t >= 1.0 {
        return Err(format!("took {t:.2} s"));
    }
    Ok(format!("parabola within 5 h^2; ODE oracle {}; {t:.2} s", notes.join(", ")))
}

fn check_against_dense(sys: &TridiagonalSystem) -> f64 {
    let x = solve_tridiagonal(sys).unwrap();
    let y = dense_solve(&DenseSystem::from_tridiagonal(sys)).unwrap();
    let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    max_abs_diff(x, y) / scale
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(42);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(1..120);
        let mut a = TridiagonalMatrix::zeros(n);
        for i in 0..n {
            if i + 1 < n {
                a.lower[i] = rng.gen_range(-1.0..1.0);
                a.upper[i] = rng.gen_range(-1.0..1.0);
            }
            a.diag[i] = 2.0 + rng.gen_range(0.0..2.0);
        }
        let rhs = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        worst = worst.max(check_against_dense(&TridiagonalSystem::new(a, rhs).unwrap()));
    }
    // the operators the solver actually factors
    let grid = VerticalGrid::new(400).unwrap();
    for m in [0.0, 0.5, 1.0, 1.9] {
        let params = ModelParams::slider_defaults(m).unwrap();
        for a in [
            assemble_advected_laplacian(m, &grid, 0.0).unwrap(),
            w_operator(0.75, &params, &grid).unwrap(),
        ] {
            let rhs = (0..a.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            worst = worst.max(check_against_dense(&TridiagonalSystem::new(a, rhs).unwrap()));
        }
    }
    let t = start.elapsed().as_secs_f64();
    if worst > 1e-10 || t >= 5.0 {
        return Err(format!("worst relative difference {worst:.2e}, {t:.2} s"));
    }
    Ok(format!("200 random + 8 column systems, worst {worst:.2e}; {t:.2} s"))
}

fn criterion_3() -> Verdict {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(3);
    let grid = VerticalGrid::new(64).unwrap();
    let mut worst_ratio = f64::INFINITY;
    for m in [0.0, 0.5, 1.0, 1.9] {
        let a = assemble_advected_laplacian(m, &grid, 0.0).unwrap();
        for _ in 0..500 {
            let f = random_trial(&grid, &mut rng);
            let d = dofs(&f);
            let semi = f.seminorm_sq(&grid);
            let form = a.quadratic_form(d, d);
            if form < (1.0 - m / 2.0) * semi * (1.0 - 1e-12) {
                return Err(format!("coercivity fails at M = {m}"));
            }
            if f.l2_norm_sq(&grid) > semi {
                return Err(format!("Poincare fails at M = {m}"));
            }
            if f.trace().powi(2) > semi * (1.0 + 1e-14) {
                return Err(format!("trace fails at M = {m}"));
            }
            worst_ratio = worst_ratio.min(form / ((1.0 - m / 2.0) * semi));
        }
    }
    let t = start.elapsed().as_secs_f64();
    if t >= 5.0 {
        return Err(format!("took {t:.2} s"));
    }
    Ok(format!("2000 functions, min a(u,u)/((1-M/2)|u|^2) = {worst_ratio:.3}; {t:.2} s"))
}

fn criterion_4(runs: &[Run]) -> Verdict {
    let worst = runs
        .iter()
        .flat_map(|r| r.outcome.trace.iter().map(|t| t.max_flux_divergence))
        .fold(0.0, f64::max);
    if worst > 1e-9 {
        return Err(format!("max flux divergence {worst:.2e}"));
    }
    let iterations: usize = runs.iter().map(|r| r.outcome.trace.len()).sum();
    Ok(format!("{iterations} iterations, max divergence {worst:.2e}"))
}

fn criterion_5(runs: &[Run]) -> Verdict {
    let mut notes = Vec::new();
    for r in runs.iter().filter(|r| r.n == 0.1) {
        let last = r.outcome.trace.last().unwrap().update_norm;
        let its = r.outcome.trace.len();
        if !r.outcome.converged || last > 1e-8 || its > 500 || r.seconds >= 60.0 {
            return Err(format!("M = {}: update {last:.2e} after {its} iterations, {:.1} s", r.m, r.seconds));
        }
        notes.push(format!("M = {}: {its} it, {:.2} s", r.m, r.seconds));
    }
    Ok(notes.join("; "))
}

fn criterion_6(runs: &[Run]) -> Verdict {
    let r = runs.iter().find(|r| r.n == 0.1 && r.m == 0.0).unwrap();
    let params = ModelParams::slider_defaults(0.0).unwrap();
    let xs: Vec<f64> = r.report.pressure_profile.iter().map(|p| p.0).collect();
    let start = Instant::now();
    let reference = m0_reference(&params, &microlub::LeadingGap::Linear { slope: -0.5 }, &xs, 1, 4000).unwrap();
    let err = max_abs_diff(r.report.pressure_profile.iter().map(|p| p.1), reference.pressure.iter().copied());
    let t = start.elapsed().as_secs_f64();
    if err > 1e-4 || t >= 120.0 {
        return Err(format!("max pressure difference {err:.2e}, {t:.1} s"));
    }
    Ok(format!(
        "max pressure difference {err:.2e}; W = {:.6} vs {:.6}; {t:.2} s",
        r.report.load, reference.load
    ))
}

fn by_n(runs: &[Run], n: f64) -> Vec<&Run> {
    runs.iter().filter(|r| r.n == n).collect()
}

fn relative(runs: &[Run], n: f64) -> Vec<(f64, f64, f64)> {
    let cells = by_n(runs, n);
    let base = &cells[0].report;
    cells
        .iter()
        .map(|r| {
            let mut rep = r.report.clone();
            rep.attach_baseline(base).unwrap();
            (r.m, rep.load_rel.unwrap(), rep.friction_coefficient_rel.unwrap())
        })
        .collect()
}

fn strictly(v: &[f64], increasing: bool) -> bool {
    v.windows(2).all(|w| if increasing { w[1] > w[0] } else { w[1] < w[0] })
}

fn criterion_7(runs: &[Run]) -> Verdict {
    let mut notes = Vec::new();
    for n in [0.1, 0.2, 0.3] {
        let p: Vec<f64> = by_n(runs, n).iter().map(|r| r.report.max_pressure()).collect();
        if !strictly(&p, true) {
            return Err(format!("N = {n}: p_max {p:?}"));
        }
        notes.push(format!("N = {n}: {:.4}/{:.4}/{:.4}", p[0], p[1], p[2]));
    }
    Ok(notes.join("; "))
}

fn criterion_8(runs: &[Run]) -> Verdict {
    let mut notes = Vec::new();
    let mut gain = Vec::new();
    for n in [0.1, 0.2, 0.3] {
        let w: Vec<f64> = relative(runs, n).iter().map(|c| c.1).collect();
        if !strictly(&w, true) || w.iter().any(|v| !(*v > 0.95 && *v < 1.35)) {
            return Err(format!("N = {n}: W/W0 {w:?}"));
        }
        gain.push(w[2] - w[0]);
        notes.push(format!("N = {n}: {:.4}/{:.4}", w[1], w[2]));
    }
    if gain[0] <= gain[2] {
        return Err(format!("gain at N = 0.1 ({:.4}) not above N = 0.3 ({:.4})", gain[0], gain[2]));
    }
    Ok(notes.join("; "))
}

fn criterion_9(runs: &[Run]) -> Verdict {
    let mut notes = Vec::new();
    for n in [0.1, 0.2, 0.3] {
        let c: Vec<f64> = relative(runs, n).iter().map(|c| c.2).collect();
        if !strictly(&c, false) || c.iter().any(|v| !(*v > 0.7 && *v < 1.1)) {
            return Err(format!("N = {n}: cf/cf0 {c:?}"));
        }
        notes.push(format!("N = {n}: {:.4}/{:.4}", c[1], c[2]));
    }
    Ok(notes.join("; "))
}

fn criterion_10(runs: &[Run]) -> Verdict {
    let params = ModelParams::slider_defaults(0.0).unwrap();
    let got = stability_constant_from(&params, 1.0, 1.0, 1.0 / 3.0f64.sqrt(), 1.0 / 3.0).constant;
    // sqrt2 * 2N^2 (2N^2 + 2/alpha) * (1 + sqrt2 * (1/sqrt3) * 3)
    let n2 = 0.01;
    let want = 2.0f64.sqrt() * 2.0 * n2 * (2.0 * n2 + 2.0 / 90.1) * (1.0 + 6.0f64.sqrt());
    if (got - want).abs() > 1e-12 {
        return Err(format!("C = {got:.15e}, closed form {want:.15e}"));
    }
    let checked: usize = runs.iter().map(|r| r.outcome.trace.len()).sum();
    if let Some(r) = runs.iter().find(|r| !r.outcome.trace.iter().all(|t| t.within_apriori_bound())) {
        return Err(format!("a-priori bound violated at N = {}, M = {}", r.n, r.m));
    }
    Ok(format!("C = {got:.12e}; bound held over {checked} iterations"))
}

fn criterion_11() -> Verdict {
    let pressures: Vec<Vec<f64>> = [(49, 100), (99, 200), (199, 400)]
        .iter()
        .map(|&(n1, nz)| {
            let s = slider_scheme(0.1, 0.5, n1, nz);
            let out = s.solve(Initializer::Couette, 1e-12, 500).unwrap();
            assert!(out.converged);
            out.state.p
        })
        .collect();
    // coarse node i sits at fine node 2i
    let change = |coarse: &[f64], fine: &[f64]| {
        coarse
            .iter()
            .enumerate()
            .map(|(i, p)| (p - fine[2 * i]).abs())
            .fold(0.0, f64::max)
    };
    let d1 = change(&pressures[0], &pressures[1]);
    let d2 = change(&pressures[1], &pressures[2]);
    let ratio = d1 / d2;
    if !(3.0..=5.0).contains(&ratio) {
        return Err(format!("changes {d1:.3e}, {d2:.3e}, ratio {ratio:.3}"));
    }
    Ok(format!("changes {d1:.3e}, {d2:.3e}, ratio {ratio:.3}"))
}

fn main() {
    let runs = slider_runs();
    let results: Vec<(&str, Verdict)> = vec![
        ("potential correctness", criterion_1()),
        ("oracle equivalence", criterion_2()),
        ("coercivity/Poincare/trace", criterion_3()),
        ("flux constraint", criterion_4(&runs)),
        ("fixed-point convergence", criterion_5(&runs)),
        ("smooth-bearing cross-validation", criterion_6(&runs)),
        ("peak pressure grows with M", criterion_7(&runs)),
        ("relative load", criterion_8(&runs)),
        ("relative friction coefficient", criterion_9(&runs)),
        ("stability diagnostic", criterion_10(&runs)),
        ("grid convergence", criterion_11()),
    ];
    let mut failed = 0;
    for (k, (name, verdict)) in results.iter().enumerate() {
        match verdict {
            Ok(detail) => println!("criterion {:2} PASS {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:2} FAIL {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
