//! Monolithic reference for the coupled bearing problem.
//!
//! Each vertical column is a linear two-point boundary-value problem in the
//! unknowns `(u1, w2)` with the pressure gradient `g = dp/dx1` as a
//! parameter:
//!
//! ```text
//! u''  = M Z u' + h^2 g + 2 N^2 h w'
//! w''  = M Z w' + (4 N^2 h^2 / R_c) w - (2 N^2 h / R_c) u'
//! u'(0) = (2/alpha) h w(0),  R_c w'(0) = -2 N^2 h beta (u(0) - s1),
//! u(1) = w(1) = 0.
//! ```
//!
//! It is solved by linear shooting: four RK4 trajectories (unit `u(0)`, unit
//! `w(0)`, wall forcing, unit pressure gradient) are superposed to meet the
//! conditions at `Z = 1`. The column flux is then affine in the gradient,
//! `q(x) = A(x) + g(x) B(x)`. Conservation forces `q = Q` constant and the
//! end conditions `p(0) = p(1) = 0` fix `Q = int(A/B) / int(1/B)`. All
//! `x1`-integrals use composite Gauss-Legendre quadrature.
//!
//! No iteration and no finite elements are involved, which is what makes
//! this an independent check of the fixed-point scheme.

use microlub::model::{LeadingGap, ModelParams};

use crate::rk4::rk4_end;
use crate::OracleError;

const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

/// Affine response of one column to the pressure gradient `g`.
#[derive(Debug, Clone, Copy)]
pub struct ColumnResponse {
    /// Flux `int_0^1 h u dZ` at `g = 0`.
    pub flux_wall: f64,
    /// Flux per unit `g`.
    pub flux_gradient: f64,
    /// `w(0)` at `g = 0`.
    pub wall_w: f64,
    /// `w(0)` per unit `g`.
    pub wall_w_gradient: f64,
}

pub fn column_response(params: &ModelParams, h: f64, steps: usize) -> Result<ColumnResponse, OracleError> {
    let n2 = params.coupling * params.coupling;
    let m = params.roughness;
    let rc = params.r_c;
    let react = 4.0 * n2 * h * h / rc;
    let couple_w = 2.0 * n2 * h / rc;
    let couple_u = 2.0 * n2 * h;
    let c_beta = 2.0 * n2 * h * params.beta / rc;

    // y = (u, u', w, w', int_0^Z u)
    let run = |y0: [f64; 5], g: f64| {
        rk4_end(y0, steps, |z, y: &[f64; 5]| {
            [
                y[1],
                m * z * y[1] + h * h * g + couple_u * y[3],
                y[3],
                m * z * y[3] + react * y[2] - couple_w * y[1],
                y[0],
            ]
        })
    };
    let ta = run([1.0, 0.0, 0.0, -c_beta, 0.0], 0.0);
    let tb = run([0.0, 2.0 * h / params.alpha, 1.0, 0.0, 0.0], 0.0);
    let ts = run([0.0, 0.0, 0.0, c_beta * params.wall_speed, 0.0], 0.0);
    let tp = run([0.0; 5], 1.0);

    let det = ta[0] * tb[2] - tb[0] * ta[2];
    if !(det.abs() > 1e-300) || !det.is_finite() {
        return Err(OracleError::Singular(0));
    }
    // a u_a(1) + b u_b(1) = -u_f(1), a w_a(1) + b w_b(1) = -w_f(1)
    let superpose = |tf: &[f64; 5]| {
        let a = (-tf[0] * tb[2] + tb[0] * tf[2]) / det;
        let b = (-ta[0] * tf[2] + tf[0] * ta[2]) / det;
        (h * (tf[4] + a * ta[4] + b * tb[4]), b)
    };
    let (flux_wall, wall_w) = superpose(&ts);
    let (flux_gradient, wall_w_gradient) = superpose(&tp);
    Ok(ColumnResponse {
        flux_wall,
        flux_gradient,
        wall_w,
        wall_w_gradient,
    })
}

#[derive(Debug, Clone)]
pub struct ReferenceSolution {
    pub x: Vec<f64>,
    pub pressure: Vec<f64>,
    /// Conserved flux `Q`.
    pub flux: f64,
    pub load: f64,
    pub friction: f64,
    pub friction_coefficient: f64,
}

impl ReferenceSolution {
    pub fn max_pressure(&self) -> f64 {
        self.pressure.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

struct Sample {
    x: f64,
    weight: f64,
    col: ColumnResponse,
}

/// Reference pressure at `x_nodes` (sorted, from 0 to 1) for any admissible `M`.
///
/// `panels` Gauss-Legendre panels are used between consecutive nodes;
/// `steps` is the RK4 step count per column.
pub fn coupled_reference(
    params: &ModelParams,
    h1: &LeadingGap,
    x_nodes: &[f64],
    panels: usize,
    steps: usize,
) -> Result<ReferenceSolution, OracleError> {
    if x_nodes.len() < 2 || x_nodes[0] != 0.0 || *x_nodes.last().unwrap() != 1.0 {
        return Err(OracleError::Input("nodes must run from 0 to 1".into()));
    }
    if x_nodes.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(OracleError::Input("nodes must be increasing".into()));
    }
    if panels == 0 || steps < 100 {
        return Err(OracleError::Input("need panels >= 1 and steps >= 100".into()));
    }

    // quadrature samples grouped by node interval
    let mut intervals: Vec<Vec<Sample>> = Vec::with_capacity(x_nodes.len() - 1);
    for w in x_nodes.windows(2) {
        let width = (w[1] - w[0]) / panels as f64;
        let mut samples = Vec::with_capacity(panels * GL_NODES.len());
        for k in 0..panels {
            let mid = w[0] + (k as f64 + 0.5) * width;
            for (t, wt) in GL_NODES.iter().zip(GL_WEIGHTS) {
                let x = mid + 0.5 * width * t;
                let col = column_response(params, h1.eval(x), steps)?;
                if !(col.flux_gradient < 0.0) {
                    return Err(OracleError::Input(format!(
                        "flux does not decrease with the pressure gradient at x1 = {x}"
                    )));
                }
                samples.push(Sample {
                    x,
                    weight: 0.5 * width * wt,
                    col,
                });
            }
        }
        intervals.push(samples);
    }

    let all = || intervals.iter().flatten();
    let int_a_over_b: f64 = all().map(|s| s.weight * s.col.flux_wall / s.col.flux_gradient).sum();
    let int_inv_b: f64 = all().map(|s| s.weight / s.col.flux_gradient).sum();
    let flux = int_a_over_b / int_inv_b;
    let gradient = |s: &Sample| (flux - s.col.flux_wall) / s.col.flux_gradient;

    let mut pressure = Vec::with_capacity(x_nodes.len());
    pressure.push(0.0);
    let mut acc = 0.0;
    for samples in &intervals {
        acc += samples.iter().map(|s| s.weight * gradient(s)).sum::<f64>();
        pressure.push(acc);
    }
    // p(1) vanishes by the choice of Q; clear the rounding residue
    let last = pressure.len() - 1;
    debug_assert!(pressure[last].abs() < 1e-10);
    pressure[last] = 0.0;

    // W = int p = -int x p'(x) dx since p(0) = p(1) = 0
    let load = -all().map(|s| s.weight * s.x * gradient(s)).sum::<f64>();
    // du/dY(0) = (1/h) u'(0) = (2/alpha) w(0)
    let n2 = params.coupling * params.coupling;
    let wall_factor = 2.0 / params.alpha - 2.0 * n2;
    let friction = all()
        .map(|s| s.weight * wall_factor * (s.col.wall_w + gradient(s) * s.col.wall_w_gradient))
        .sum::<f64>();

    Ok(ReferenceSolution {
        x: x_nodes.to_vec(),
        pressure,
        flux,
        load,
        friction,
        friction_coefficient: friction / load,
    })
}

/// Smooth-bearing (`M = 0`) reference, the baseline for the scheme.
pub fn m0_reference(
    params: &ModelParams,
    h1: &LeadingGap,
    x_nodes: &[f64],
    panels: usize,
    steps: usize,
) -> Result<ReferenceSolution, OracleError> {
    if params.roughness != 0.0 {
        return Err(OracleError::Input(format!(
            "smooth-bearing reference needs M = 0, got {}",
            params.roughness
        )));
    }
    coupled_reference(params, h1, x_nodes, panels, steps)
}
