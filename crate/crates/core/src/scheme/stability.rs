//! Sufficient stability condition of the fixed-point iteration.
//!
//! The velocity iterates obey
//! `||u^{n+1}|| <= C [(1 + beta) ||u^n|| + beta |s1|]` in `L^2(0,1; V_Z)`, with
//!
//! ```text
//! C = sqrt(2) * 2N^2 (2N^2 + 2/alpha) / (1 - M/2)^2 * (sup h1)^2
//!     * [1 + sqrt(2) ||psi||_{V_Z} / psi_bar * (sup h1 / inf h1)^3]
//! ```
//!
//! so `C (1 + beta) <= 1` keeps the sequence bounded. The condition is
//! sufficient only; runs that violate it are still attempted.

use std::f64::consts::SQRT_2;

use crate::fem1d::VerticalGrid;
use crate::model::{LeadingGap, ModelParams};
use crate::scheme::{HorizontalGrid, Potential};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub constant: f64,
    /// `C (1 + beta)`.
    pub condition_value: f64,
    pub satisfied: bool,
}

impl StabilityReport {
    /// Right-hand side of the a-priori velocity bound.
    pub fn velocity_bound(&self, params: &ModelParams, u_norm: f64) -> f64 {
        self.constant * ((1.0 + params.beta) * u_norm + params.beta * params.wall_speed.abs())
    }
}

pub fn stability_constant_from(
    params: &ModelParams,
    sup_h1: f64,
    inf_h1: f64,
    psi_norm: f64,
    psi_bar: f64,
) -> StabilityReport {
    let n2 = params.n2();
    let coercivity = 1.0 - params.roughness / 2.0;
    let constant = SQRT_2 * 2.0 * n2 * (2.0 * n2 + 2.0 / params.alpha) / coercivity.powi(2)
        * sup_h1.powi(2)
        * (1.0 + SQRT_2 * psi_norm / psi_bar * (sup_h1 / inf_h1).powi(3));
    let condition_value = constant * (1.0 + params.beta);
    StabilityReport {
        constant,
        condition_value,
        satisfied: condition_value <= 1.0,
    }
}

/// Evaluates the constant with `sup h1`, `inf h1` taken over the pressure
/// nodes and the discrete `V_Z` norm of `psi`.
pub fn stability_constant(
    params: &ModelParams,
    h1: &LeadingGap,
    psi: &Potential,
    hgrid: &HorizontalGrid,
    vgrid: &VerticalGrid,
) -> StabilityReport {
    let (sup, inf) = hgrid
        .nodes()
        .iter()
        .map(|&x| h1.eval(x))
        .fold((f64::NEG_INFINITY, f64::INFINITY), |(s, i), v| (s.max(v), i.min(v)));
    stability_constant_from(params, sup, inf, psi.psi.seminorm(vgrid), psi.psi_bar)
}
