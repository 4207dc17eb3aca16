//! `solve`, `sweep`, `potential` and `verify`.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{Context, Result};
use rand::{rngs::StdRng, Rng, SeedableRng};
use rayon::prelude::*;

use microlub::fem1d::{solve_tridiagonal, TridiagonalMatrix, TridiagonalSystem};
use microlub::scheme::{solve_potential, stability_constant_from};
use microlub::{BearingReport, Grids, ModelParams, Scheme, SolveOutcome, VerticalGrid};
use microlub_oracles::{dense_solve, m0_reference, psi_ode_oracle, DenseSystem};

use crate::config::RunConfig;
use crate::format::{append_csv, fmt_g, fmt_tag, write_csv, write_text};

/// Runs `f` on a pool sized by `MICROLUB_WORKERS` or the config.
pub fn with_workers<T: Send>(cfg: &RunConfig, f: impl FnOnce() -> T + Send) -> Result<T> {
    match cfg.worker_count()? {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

fn ensure_output_dir(cfg: &RunConfig) -> Result<PathBuf> {
    std::fs::create_dir_all(&cfg.output_dir)
        .with_context(|| format!("creating {}", cfg.output_dir.display()))?;
    Ok(cfg.output_dir.clone())
}

/// One converged (or not) solve with its run log.
#[derive(Debug, Clone)]
pub struct Cell {
    pub n: f64,
    pub m: f64,
    pub report: BearingReport,
    pub log: String,
}

fn header(cfg: &RunConfig, params: &ModelParams) -> String {
    let d = params.derived();
    let mut s = String::new();
    let _ = writeln!(
        s,
        "N = {}, R_c = {}, alpha = {}, beta = {}, nu_b = {}, delta = {}, s1 = {}, M = {}",
        fmt_g(params.coupling),
        fmt_g(params.r_c),
        fmt_g(params.alpha),
        fmt_g(params.beta),
        fmt_g(d.nu_b_bar),
        fmt_g(d.delta),
        fmt_g(params.wall_speed),
        fmt_g(params.roughness)
    );
    let _ = writeln!(
        s,
        "slope = {}, n1 = {}, nZ = {}, tol = {}, max_iter = {}, init = {:?}",
        fmt_g(cfg.slope),
        cfg.n1,
        cfg.nz,
        fmt_g(cfg.tol),
        cfg.max_iter,
        cfg.init
    );
    s
}

fn run_log(cfg: &RunConfig, params: &ModelParams, outcome: &SolveOutcome) -> String {
    let mut s = header(cfg, params);
    let st = outcome.stability;
    let _ = writeln!(
        s,
        "stability: C = {}, C(1+beta) = {}, satisfied = {}",
        fmt_g(st.constant),
        fmt_g(st.condition_value),
        st.satisfied
    );
    let _ = writeln!(s, "iteration,update_norm,velocity_norm,max_flux_divergence,apriori_bound");
    for r in &outcome.trace {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            r.iteration,
            fmt_g(r.update_norm),
            fmt_g(r.velocity_norm),
            fmt_g(r.max_flux_divergence),
            fmt_g(r.apriori_bound)
        );
    }
    let _ = writeln!(
        s,
        "{} after {} iterations",
        if outcome.converged { "converged" } else { "NOT converged" },
        outcome.state.iteration
    );
    s
}

pub fn solve_cell(cfg: &RunConfig, n: f64, m: f64) -> Result<Cell> {
    let params = cfg.params_at(n, m)?;
    let scheme = Scheme::new(params, cfg.geometry()?, Grids::new(cfg.n1, cfg.nz)?)?;
    let outcome = scheme.solve(cfg.init, cfg.tol, cfg.max_iter)?;
    let report = BearingReport::from_outcome(&scheme, &outcome);
    let log = run_log(cfg, &params, &outcome);
    Ok(Cell { n, m, report, log })
}

const RESULTS_HEADER: [&str; 12] = [
    "N", "M", "alpha", "beta", "nu_b", "delta", "p_max", "W", "F", "c_f", "converged", "iterations",
];

/// Single solve: `pressure_<tag>.csv`, `log_<tag>.txt`, one row in `results.csv`.
pub fn run_single(cfg: &RunConfig) -> Result<Cell> {
    cfg.validate()?;
    let dir = ensure_output_dir(cfg)?;
    let m = cfg.roughness()?;
    let cell = with_workers(cfg, || solve_cell(cfg, cfg.n, m))??;
    let tag = format!("N{}_M{}", fmt_tag(cfg.n), fmt_tag(m));
    let rows: Vec<Vec<f64>> = cell.report.pressure_profile.iter().map(|&(x, p)| vec![x, p]).collect();
    write_csv(&dir.join(format!("pressure_{tag}.csv")), &["x1".into(), "p".into()], &rows)?;
    write_text(&dir.join(format!("log_{tag}.txt")), &cell.log)?;
    let params = cfg.params_at(cfg.n, m)?;
    let d = params.derived();
    let r = &cell.report;
    let row = vec![
        fmt_g(cfg.n),
        fmt_g(m),
        fmt_g(params.alpha),
        fmt_g(params.beta),
        fmt_g(d.nu_b_bar),
        fmt_g(d.delta),
        fmt_g(r.max_pressure()),
        fmt_g(r.load),
        fmt_g(r.friction),
        fmt_g(r.friction_coefficient),
        r.converged.to_string(),
        r.iterations.to_string(),
    ];
    append_csv(&dir.join("results.csv"), &RESULTS_HEADER, &row)?;
    Ok(cell)
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub n: f64,
    pub m: f64,
    pub load_rel: f64,
    pub friction: f64,
    pub friction_coefficient_rel: f64,
    pub max_pressure: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Default)]
pub struct SweepOutcome {
    /// Ordered by `(N, M)`.
    pub rows: Vec<SweepRow>,
    pub failures: Vec<String>,
}

fn sorted_unique(v: &[f64]) -> Vec<f64> {
    let mut v = v.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Sweep over `N x M`, with the `M = 0` baseline added when missing.
pub fn run_sweep(cfg: &RunConfig) -> Result<SweepOutcome> {
    cfg.validate()?;
    let dir = ensure_output_dir(cfg)?;
    let ns = sorted_unique(&cfg.sweep_n);
    let mut ms = cfg.sweep_m.clone();
    ms.push(0.0);
    let ms = sorted_unique(&ms);

    let jobs: Vec<(f64, f64)> = ns.iter().flat_map(|&n| ms.iter().map(move |&m| (n, m))).collect();
    let results: Vec<Result<Cell, String>> = with_workers(cfg, || {
        jobs.par_iter()
            .map(|&(n, m)| solve_cell(cfg, n, m).map_err(|e| format!("{e:#}")))
            .collect()
    })?;

    let mut out = SweepOutcome::default();
    for (k, &n) in ns.iter().enumerate() {
        let cells = &results[k * ms.len()..(k + 1) * ms.len()];
        let baseline = match &cells[0] {
            Ok(c) => Some(c.report.clone()),
            Err(_) => None,
        };
        let mut log = String::new();
        let mut summary = Vec::new();
        for (&m, res) in ms.iter().zip(cells) {
            match res {
                Ok(cell) => {
                    let mut report = cell.report.clone();
                    if let Some(b) = &baseline {
                        if let Err(e) = report.attach_baseline(b) {
                            out.failures.push(format!("N = {n}, M = {m}: {e}"));
                        }
                    }
                    if !report.converged {
                        out.failures.push(format!("N = {n}, M = {m}: not converged"));
                    }
                    let row = SweepRow {
                        n,
                        m,
                        load_rel: report.load_rel.unwrap_or(f64::NAN),
                        friction: report.friction,
                        friction_coefficient_rel: report.friction_coefficient_rel.unwrap_or(f64::NAN),
                        max_pressure: report.max_pressure(),
                        converged: report.converged,
                    };
                    summary.push(vec![m, row.load_rel, row.friction, row.friction_coefficient_rel]);
                    out.rows.push(row);
                    log.push_str(&cell.log);
                    log.push('\n');
                }
                Err(e) => {
                    out.failures.push(format!("N = {n}, M = {m}: {e}"));
                    summary.push(vec![m, f64::NAN, f64::NAN, f64::NAN]);
                    let _ = writeln!(log, "N = {}, M = {}: FAILED: {e}\n", fmt_g(n), fmt_g(m));
                }
            }
        }

        let nodes = cfg.n1 + 2;
        let mut pressure: Vec<Vec<f64>> = (0..nodes).map(|_| Vec::with_capacity(ms.len() + 1)).collect();
        let xs = Grids::new(cfg.n1, cfg.nz)?.horizontal.nodes();
        for (row, x) in pressure.iter_mut().zip(&xs) {
            row.push(*x);
        }
        for res in cells {
            for (i, row) in pressure.iter_mut().enumerate() {
                row.push(match res {
                    Ok(c) => c.report.pressure_profile[i].1,
                    Err(_) => f64::NAN,
                });
            }
        }
        let tag = fmt_tag(n);
        let mut header = vec!["x1".to_string()];
        header.extend(ms.iter().map(|m| format!("p_M{}", fmt_tag(*m))));
        write_csv(&dir.join(format!("pressure_N{tag}.csv")), &header, &pressure)?;
        let header: Vec<String> = ["M", "W/W0", "F", "cf/cf0"].iter().map(|s| s.to_string()).collect();
        write_csv(&dir.join(format!("results_N{tag}.csv")), &header, &summary)?;
        write_text(&dir.join(format!("log_N{tag}.txt")), &log)?;
    }
    Ok(out)
}

/// Writes `psi_M<val>.csv` and returns `psi_bar`.
pub fn run_potential(cfg: &RunConfig, m: f64) -> Result<f64> {
    let dir = ensure_output_dir(cfg)?;
    let grid = VerticalGrid::new(cfg.nz)?;
    let pot = solve_potential(m, &grid)?;
    let rows: Vec<Vec<f64>> = grid
        .nodes()
        .into_iter()
        .zip(pot.psi.values())
        .map(|(z, &v)| vec![z, v])
        .collect();
    write_csv(&dir.join(format!("psi_M{}.csv", fmt_tag(m))), &["Z".into(), "psi".into()], &rows)?;
    Ok(pot.psi_bar)
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }
}

fn max_abs_diff(a: impl IntoIterator<Item = f64>, b: impl IntoIterator<Item = f64>) -> f64 {
    a.into_iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Oracle cross-checks on the configured parameters.
pub fn run_verify(cfg: &RunConfig) -> Result<Vec<Check>> {
    cfg.validate()?;
    let mut checks = Vec::new();

    let grid = VerticalGrid::new(cfg.nz)?;
    let h = grid.step();
    let pot = solve_potential(0.0, &grid)?;
    let err = max_abs_diff(
        pot.psi.values().iter().copied(),
        grid.nodes().iter().map(|z| 0.5 * (1.0 - z * z)),
    );
    checks.push(Check::new(
        "potential_parabola",
        err <= 5.0 * h * h && (pot.psi_bar - 1.0 / 3.0).abs() <= 5.0 * h * h,
        format!("max error {err:.3e}, bound {:.3e}", 5.0 * h * h),
    ));

    let fine = VerticalGrid::new(400)?;
    for m in [0.5, 1.0] {
        let fem = solve_potential(m, &fine)?;
        let ode = psi_ode_oracle(m, 40_000)?;
        let err = max_abs_diff(
            fem.psi.values().iter().copied(),
            fine.nodes().iter().map(|&z| ode.eval(z)),
        );
        checks.push(Check::new(
            "potential_vs_ode_oracle",
            err <= 1e-6,
            format!("M = {m}: max error {err:.3e}"),
        ));
    }

    let mut rng = StdRng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(1..80);
        let mut a = TridiagonalMatrix::zeros(n);
        for i in 0..n {
            if i + 1 < n {
                a.lower[i] = rng.gen_range(-1.0..1.0);
                a.upper[i] = rng.gen_range(-1.0..1.0);
            }
            a.diag[i] = 2.0 + rng.gen_range(0.0..2.0);
        }
        let rhs = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let sys = TridiagonalSystem::new(a, rhs)?;
        let x = solve_tridiagonal(&sys)?;
        let y = dense_solve(&DenseSystem::from_tridiagonal(&sys))?;
        let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
        worst = worst.max(max_abs_diff(x, y) / scale);
    }
    checks.push(Check::new(
        "tridiagonal_vs_dense",
        worst <= 1e-10,
        format!("200 systems, worst relative difference {worst:.3e}"),
    ));

    let params = cfg.params_at(cfg.n, 0.0)?;
    let geometry = cfg.geometry()?;
    let scheme = Scheme::new(params, geometry.clone(), Grids::new(cfg.n1, cfg.nz)?)?;
    let outcome = with_workers(cfg, || scheme.solve(cfg.init, 1e-10, cfg.max_iter.max(500)))??;
    let report = BearingReport::from_outcome(&scheme, &outcome);
    let xs: Vec<f64> = report.pressure_profile.iter().map(|p| p.0).collect();
    let reference = m0_reference(&params, &geometry.h1, &xs, 1, 4000)?;
    let err = max_abs_diff(report.pressure_profile.iter().map(|p| p.1), reference.pressure.iter().copied());
    checks.push(Check::new(
        "smooth_bearing_vs_reference",
        outcome.converged && err <= 1e-4,
        format!("max pressure difference {err:.3e}"),
    ));

    let rough = cfg.params_at(cfg.n, cfg.roughness()?.max(0.5))?;
    let scheme = Scheme::new(rough, geometry, Grids::new(cfg.n1, cfg.nz)?)?;
    let rough_out = with_workers(cfg, || scheme.solve(cfg.init, cfg.tol, cfg.max_iter))??;
    for (m, out) in [(params.roughness, &outcome), (rough.roughness, &rough_out)] {
        let div = out.trace.iter().map(|r| r.max_flux_divergence).fold(0.0, f64::max);
        checks.push(Check::new(
            "flux_constraint",
            div <= 1e-9,
            format!("M = {m}: max divergence {div:.3e}"),
        ));
        let ok = out.trace.iter().all(|r| r.within_apriori_bound());
        checks.push(Check::new(
            "apriori_bound",
            ok,
            format!("M = {m}: {} iterations checked", out.trace.len()),
        ));
    }

    let unit = cfg.params_at(cfg.n, 0.0)?;
    let psi_norm = 1.0 / 3.0f64.sqrt();
    let got = stability_constant_from(&unit, 1.0, 1.0, psi_norm, 1.0 / 3.0).constant;
    let n2 = unit.n2();
    let want = std::f64::consts::SQRT_2 * 2.0 * n2 * (2.0 * n2 + 2.0 / unit.alpha)
        * (1.0 + std::f64::consts::SQRT_2 * 3.0f64.sqrt());
    checks.push(Check::new(
        "stability_closed_form",
        (got - want).abs() <= 1e-12 * want,
        format!("C = {got:.12e}"),
    ));
    Ok(checks)
}
