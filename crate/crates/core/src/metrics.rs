//! Bearing performance: load, friction force and friction coefficient.

use crate::error::{Error, Result};
use crate::fem1d::VerticalGrid;
use crate::scheme::{HorizontalGrid, Scheme, SchemeState, SolveOutcome, StabilityReport};

#[derive(Debug, Clone, PartialEq)]
pub struct BearingReport {
    /// `(x1, p)` on the pressure nodes.
    pub pressure_profile: Vec<(f64, f64)>,
    /// Load `W = int p dx1`.
    pub load: f64,
    /// Friction force `F` on the moving wall.
    pub friction: f64,
    /// `c_f = F / W`.
    pub friction_coefficient: f64,
    /// `W / W_0` against the smooth bearing, once a baseline is attached.
    pub load_rel: Option<f64>,
    /// `c_f / c_f0` against the smooth bearing.
    pub friction_coefficient_rel: Option<f64>,
    pub stability: StabilityReport,
    pub converged: bool,
    pub iterations: usize,
}

impl BearingReport {
    pub fn from_outcome(scheme: &Scheme, outcome: &SolveOutcome) -> Self {
        let state = &outcome.state;
        let grids = scheme.grids();
        let load = compute_load(&state.p, &grids.horizontal);
        let friction = compute_friction(
            state,
            scheme.h1_mid(),
            scheme.params().n2(),
            &grids.horizontal,
            &grids.vertical,
        );
        let pressure_profile = grids.horizontal.nodes().into_iter().zip(state.p.iter().copied()).collect();
        Self {
            pressure_profile,
            load,
            friction,
            friction_coefficient: friction / load,
            load_rel: None,
            friction_coefficient_rel: None,
            stability: outcome.stability,
            converged: outcome.converged,
            iterations: state.iteration,
        }
    }

    pub fn max_pressure(&self) -> f64 {
        self.pressure_profile
            .iter()
            .map(|&(_, p)| p)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Fills the relative fields from a smooth-bearing baseline.
    pub fn attach_baseline(&mut self, baseline: &BearingReport) -> Result<()> {
        let (w, c) = compute_relative(self, baseline)?;
        self.load_rel = Some(w);
        self.friction_coefficient_rel = Some(c);
        Ok(())
    }
}

/// Trapezoid rule over the pressure nodes.
pub fn compute_load(p: &[f64], hgrid: &HorizontalGrid) -> f64 {
    let h = hgrid.step();
    h * p.windows(2).map(|w| 0.5 * (w[0] + w[1])).sum::<f64>()
}

/// `F = int (du1/dY - 2 N^2 w2) dx1` at the wall `Y = 0`.
///
/// `du1/dY = (1 / h1) du1/dZ`, with the `Z` derivative taken by a three-point
/// one-sided stencil; midpoint rule in `x1`.
pub fn compute_friction(
    state: &SchemeState,
    h1_mid: &[f64],
    n2: f64,
    hgrid: &HorizontalGrid,
    vgrid: &VerticalGrid,
) -> f64 {
    let h = hgrid.step();
    h * state
        .u1
        .iter()
        .zip(&state.w2)
        .zip(h1_mid)
        .map(|((u, w), &h1)| u.wall_derivative(vgrid) / h1 - 2.0 * n2 * w.trace())
        .sum::<f64>()
}

/// `(W / W_0, c_f / c_f0)`.
pub fn compute_relative(report: &BearingReport, baseline: &BearingReport) -> Result<(f64, f64)> {
    if baseline.load == 0.0 || !baseline.load.is_finite() {
        return Err(Error::DegenerateBaseline("baseline load is zero"));
    }
    if baseline.friction_coefficient == 0.0 || !baseline.friction_coefficient.is_finite() {
        return Err(Error::DegenerateBaseline("baseline friction coefficient is zero"));
    }
    Ok((
        report.load / baseline.load,
        report.friction_coefficient / baseline.friction_coefficient,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem1d::FemFunction;
    use approx::assert_relative_eq;

    fn state_with(u: FemFunction, w: FemFunction, hg: &HorizontalGrid) -> SchemeState {
        SchemeState {
            u1: vec![u; hg.column_count()],
            w2: vec![w; hg.column_count()],
            p: vec![0.0; hg.node_count()],
            iteration: 1,
            last_update_norm: 0.0,
        }
    }

    fn report(load: f64, friction: f64) -> BearingReport {
        BearingReport {
            pressure_profile: vec![(0.0, 0.0), (1.0, 0.0)],
            load,
            friction,
            friction_coefficient: friction / load,
            load_rel: None,
            friction_coefficient_rel: None,
            stability: StabilityReport {
                constant: 0.0,
                condition_value: 0.0,
                satisfied: true,
            },
            converged: true,
            iterations: 1,
        }
    }

    #[test]
    fn load_of_zero_and_parabola() {
        let hg = HorizontalGrid::new(99).unwrap();
        assert_eq!(compute_load(&vec![0.0; hg.node_count()], &hg), 0.0);
        let p: Vec<f64> = hg.nodes().iter().map(|x| x * (1.0 - x)).collect();
        let h = hg.step();
        assert!((compute_load(&p, &hg) - 1.0 / 6.0).abs() <= h * h);
        let doubled: Vec<f64> = p.iter().map(|v| 2.0 * v).collect();
        assert_eq!(compute_load(&doubled, &hg), 2.0 * compute_load(&p, &hg));
    }

    #[test]
    fn friction_of_rest_state_is_zero() {
        let hg = HorizontalGrid::new(10).unwrap();
        let vg = VerticalGrid::new(20).unwrap();
        let s = state_with(FemFunction::zeros(&vg), FemFunction::zeros(&vg), &hg);
        assert_eq!(compute_friction(&s, &vec![1.0; hg.column_count()], 0.01, &hg, &vg), 0.0);
    }

    #[test]
    fn friction_of_linear_profile() {
        let hg = HorizontalGrid::new(10).unwrap();
        let vg = VerticalGrid::new(20).unwrap();
        let s = state_with(
            FemFunction::interpolate_trial(&vg, |z| 1.0 - z),
            FemFunction::zeros(&vg),
            &hg,
        );
        let f = compute_friction(&s, &vec![1.0; hg.column_count()], 0.01, &hg, &vg);
        assert_relative_eq!(f, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn relative_to_itself_is_unity() {
        let r = report(0.06, -0.07);
        assert_eq!(compute_relative(&r, &r).unwrap(), (1.0, 1.0));
    }

    #[test]
    fn degenerate_baseline_is_reported() {
        let r = report(0.06, -0.07);
        let zero = BearingReport {
            load: 0.0,
            ..report(1.0, 1.0)
        };
        assert!(compute_relative(&r, &zero).is_err());
        let flat = report(1.0, 0.0);
        assert!(compute_relative(&r, &flat).is_err());
    }

    #[test]
    fn friction_coefficient_times_load_is_force() {
        let r = report(0.0574, -0.0738);
        assert_relative_eq!(r.friction_coefficient * r.load, r.friction, max_relative = 1e-15);
    }
}
