//! Fixed-point solver for the coupled velocity / microrotation / pressure
//! system of the rough slider bearing.
//!
//! One sweep, given the velocity columns `u1^n`:
//!
//! 1. solve the microrotation `w2^n` on every column,
//! 2. solve the unconstrained velocity `u1_tilde^{n+1}` on every column,
//! 3. solve the Reynolds equation for `p^{n+1}` from the column fluxes,
//! 4. correct each column with `-h1^2 dp/dx psi` so the flux is divergence free.
//!
//! Columns sit at the midpoints `x_{i+1/2}` of the pressure grid. Steps 1, 2
//! and 4 are independent across columns and run in parallel.

mod columns;
mod reynolds;
mod stability;

pub use columns::{
    correct_velocity, solve_neumann_column, solve_potential, solve_u_tilde_column,
    solve_w_column, w_operator, w_reaction, Potential,
};
pub use reynolds::{
    column_fluxes, flux_divergence, pressure_gradient, solve_reynolds, solve_reynolds_flux,
    HorizontalGrid,
};
pub use stability::{stability_constant, stability_constant_from, StabilityReport};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fem1d::{assemble_advected_laplacian, FemFunction, TridiagonalLu, VerticalGrid};
use crate::model::{BearingGeometry, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grids {
    pub horizontal: HorizontalGrid,
    pub vertical: VerticalGrid,
}

impl Grids {
    pub fn new(n1: usize, nz: usize) -> Result<Self> {
        Ok(Self {
            horizontal: HorizontalGrid::new(n1)?,
            vertical: VerticalGrid::new(nz)?,
        })
    }
}

/// Starting velocity `u1^0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Initializer {
    /// `s1 (1 - Z)` on every column.
    #[default]
    Couette,
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeState {
    /// Velocity columns `u1^n`, one per midpoint.
    pub u1: Vec<FemFunction>,
    /// Microrotation columns computed from the previous velocity.
    pub w2: Vec<FemFunction>,
    /// Pressure on the nodes, zero at both ends.
    pub p: Vec<f64>,
    pub iteration: usize,
    /// `L^2(0,1; V_Z)` norm of the last velocity update.
    pub last_update_norm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub update_norm: f64,
    /// `||u1^n||` before the sweep.
    pub previous_norm: f64,
    /// `||u1^{n+1}||` after the sweep.
    pub velocity_norm: f64,
    /// Largest `|d/dx int h1 u1 dZ|` over the interior pressure nodes.
    pub max_flux_divergence: f64,
    /// `C [(1 + beta) ||u1^n|| + beta |s1|]`.
    pub apriori_bound: f64,
}

impl IterationRecord {
    pub fn within_apriori_bound(&self) -> bool {
        self.velocity_norm <= self.apriori_bound
    }
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub state: SchemeState,
    pub trace: Vec<IterationRecord>,
    pub converged: bool,
    pub stability: StabilityReport,
}

/// Everything that stays fixed across iterations: the potential, gap values
/// at the columns, and the factored column operators.
#[derive(Debug, Clone)]
pub struct Scheme {
    params: ModelParams,
    geometry: BearingGeometry,
    grids: Grids,
    potential: Potential,
    h1_mid: Vec<f64>,
    velocity_lu: TridiagonalLu,
    w_lu: Vec<TridiagonalLu>,
    stability: StabilityReport,
}

impl Scheme {
    pub fn new(params: ModelParams, geometry: BearingGeometry, grids: Grids) -> Result<Self> {
        let vg = grids.vertical;
        let velocity_lu = TridiagonalLu::factor(&assemble_advected_laplacian(
            params.roughness,
            &vg,
            0.0,
        )?)?;
        // psi shares the velocity operator and depends on M only
        let potential = columns::potential_from_factors(&velocity_lu, &vg)?;
        let h1_mid: Vec<f64> = grids
            .horizontal
            .midpoints()
            .iter()
            .map(|&x| geometry.h1.eval(x))
            .collect();
        let w_lu = h1_mid
            .iter()
            .map(|&h| TridiagonalLu::factor(&w_operator(h, &params, &vg)?))
            .collect::<Result<Vec<_>>>()?;
        let stability = stability_constant(&params, &geometry.h1, &potential, &grids.horizontal, &vg);
        Ok(Self {
            params,
            geometry,
            grids,
            potential,
            h1_mid,
            velocity_lu,
            w_lu,
            stability,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn geometry(&self) -> &BearingGeometry {
        &self.geometry
    }

    pub fn grids(&self) -> &Grids {
        &self.grids
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn stability(&self) -> StabilityReport {
        self.stability
    }

    /// `h1` at the column midpoints.
    pub fn h1_mid(&self) -> &[f64] {
        &self.h1_mid
    }

    pub fn initial_state(&self, init: Initializer) -> SchemeState {
        let vg = &self.grids.vertical;
        let s1 = self.params.wall_speed;
        let column = match init {
            Initializer::Couette => FemFunction::interpolate_trial(vg, |z| s1 * (1.0 - z)),
            Initializer::Zero => FemFunction::zeros(vg),
        };
        let cols = self.grids.horizontal.column_count();
        SchemeState {
            u1: vec![column; cols],
            w2: vec![FemFunction::zeros(vg); cols],
            p: vec![0.0; self.grids.horizontal.node_count()],
            iteration: 0,
            last_update_norm: f64::INFINITY,
        }
    }

    /// `||u||` in `L^2(0,1; V_Z)` with midpoint quadrature in `x1`.
    pub fn velocity_norm(&self, columns: &[FemFunction]) -> f64 {
        let vg = &self.grids.vertical;
        let sum: f64 = columns.iter().map(|c| c.seminorm_sq(vg)).sum();
        (self.grids.horizontal.step() * sum).sqrt()
    }

    /// Largest flux divergence over the interior pressure nodes.
    pub fn max_flux_divergence(&self, columns: &[FemFunction]) -> Result<f64> {
        let flux = column_fluxes(columns, &self.h1_mid, &self.grids.vertical)?;
        Ok(flux_divergence(&flux, &self.grids.horizontal)
            .into_iter()
            .fold(0.0, |m, d| m.max(d.abs())))
    }

    /// One full sweep of the fixed-point map.
    pub fn iterate(&self, state: &SchemeState) -> Result<(SchemeState, IterationRecord)> {
        let vg = &self.grids.vertical;
        let hg = &self.grids.horizontal;
        let params = &self.params;

        let solved: Vec<(FemFunction, FemFunction)> = state
            .u1
            .par_iter()
            .zip(self.h1_mid.par_iter())
            .zip(self.w_lu.par_iter())
            .map(|((u, &h1), w_lu)| {
                let (load, wall) = columns::w_column_data(u, h1, params, vg)?;
                let w = solve_neumann_column(w_lu, load, wall)?;
                let (load, wall) = columns::u_tilde_column_data(&w, h1, params, vg)?;
                let ut = solve_neumann_column(&self.velocity_lu, load, wall)?;
                Ok((w, ut))
            })
            .collect::<Result<Vec<_>>>()?;
        let (w2, u_tilde): (Vec<_>, Vec<_>) = solved.into_iter().unzip();

        let flux = column_fluxes(&u_tilde, &self.h1_mid, vg)?;
        let p = solve_reynolds_flux(&flux, self.potential.psi_bar, &self.h1_mid, hg)?;
        let dp = pressure_gradient(&p, hg);

        let u1: Vec<FemFunction> = u_tilde
            .par_iter()
            .zip(dp.par_iter())
            .zip(self.h1_mid.par_iter())
            .map(|((ut, &g), &h1)| correct_velocity(ut, g, h1, &self.potential))
            .collect();

        let diff: Vec<FemFunction> = u1.iter().zip(&state.u1).map(|(a, b)| a.sub(b)).collect();
        let update_norm = self.velocity_norm(&diff);
        let previous_norm = self.velocity_norm(&state.u1);
        let velocity_norm = self.velocity_norm(&u1);
        let record = IterationRecord {
            iteration: state.iteration + 1,
            update_norm,
            previous_norm,
            velocity_norm,
            max_flux_divergence: self.max_flux_divergence(&u1)?,
            apriori_bound: self.stability.velocity_bound(params, previous_norm),
        };
        let next = SchemeState {
            u1,
            w2,
            p,
            iteration: state.iteration + 1,
            last_update_norm: update_norm,
        };
        Ok((next, record))
    }

    /// Iterates until `||u^{n+1} - u^n|| <= tol (1 + ||u^n||)` or `max_iter`.
    pub fn solve_from(&self, state: SchemeState, tol: f64, max_iter: usize) -> Result<SolveOutcome> {
        if !(tol > 0.0) {
            return Err(Error::InvalidParameter {
                name: "tol",
                value: tol,
                reason: "must be positive",
            });
        }
        if max_iter == 0 {
            return Err(Error::InvalidParameter {
                name: "max_iter",
                value: 0.0,
                reason: "need at least one iteration",
            });
        }
        if !self.stability.satisfied {
            log::warn!(
                "sufficient stability condition violated: C = {:.6e}, C(1+beta) = {:.6e}",
                self.stability.constant,
                self.stability.condition_value
            );
        }
        let mut state = state;
        let mut trace = Vec::new();
        let mut converged = false;
        for _ in 0..max_iter {
            let (next, record) = self.iterate(&state)?;
            log::debug!(
                "iteration {}: update {:.3e}, |u| {:.6e}",
                record.iteration,
                record.update_norm,
                record.velocity_norm
            );
            state = next;
            let done = record.update_norm <= tol * (1.0 + record.previous_norm);
            trace.push(record);
            if done {
                converged = true;
                break;
            }
        }
        if !converged {
            log::warn!(
                "no convergence after {} iterations (last update {:.3e})",
                state.iteration,
                state.last_update_norm
            );
        }
        Ok(SolveOutcome {
            state,
            trace,
            converged,
            stability: self.stability,
        })
    }

    pub fn solve(&self, init: Initializer, tol: f64, max_iter: usize) -> Result<SolveOutcome> {
        self.solve_from(self.initial_state(init), tol, max_iter)
    }
}

/// One sweep with a freshly built [`Scheme`].
pub fn iterate(
    state: &SchemeState,
    params: ModelParams,
    geometry: BearingGeometry,
    grids: Grids,
) -> Result<(SchemeState, IterationRecord)> {
    Scheme::new(params, geometry, grids)?.iterate(state)
}

pub fn solve(
    params: ModelParams,
    geometry: BearingGeometry,
    grids: Grids,
    init: Initializer,
    tol: f64,
    max_iter: usize,
) -> Result<SolveOutcome> {
    Scheme::new(params, geometry, grids)?.solve(init, tol, max_iter)
}
