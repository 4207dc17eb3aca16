//! Vertical column problems: the potential, the microrotation solve, the
//! unconstrained velocity solve, and the flux-preserving velocity correction.

use crate::error::Result;
use crate::fem1d::{
    assemble_advected_laplacian, integrate, load_derivative, load_unit, FemFunction,
    TridiagonalLu, TridiagonalMatrix, VerticalGrid,
};
use crate::model::ModelParams;

/// Solution of `-psi'' + M Z psi' = 1`, `psi'(0) = 0`, `psi(1) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    pub psi: FemFunction,
    /// `int_0^1 psi`.
    pub psi_bar: f64,
}

pub fn solve_potential(m: f64, grid: &VerticalGrid) -> Result<Potential> {
    let a = assemble_advected_laplacian(m, grid, 0.0)?;
    let lu = TridiagonalLu::factor(&a)?;
    potential_from_factors(&lu, grid)
}

pub(crate) fn potential_from_factors(lu: &TridiagonalLu, grid: &VerticalGrid) -> Result<Potential> {
    let psi = FemFunction::from_dofs(lu.solve(&load_unit(grid))?);
    let psi_bar = integrate(&psi, grid)?;
    Ok(Potential { psi, psi_bar })
}

/// Solves `-u'' + M Z u' + r u = f` with `u'(0) = g`, `u(1) = 0`.
///
/// `load` holds `int f phi_i`; the wall datum enters as `-g phi_i(0)`.
pub fn solve_neumann_column(
    lu: &TridiagonalLu,
    mut load: Vec<f64>,
    wall_derivative: f64,
) -> Result<FemFunction> {
    load[0] -= wall_derivative;
    Ok(FemFunction::from_dofs(lu.solve(&load)?))
}

/// Reaction coefficient of the microrotation operator once divided by `R_c`.
pub fn w_reaction(h1: f64, params: &ModelParams) -> f64 {
    4.0 * params.n2() * h1 * h1 / params.r_c
}

pub fn w_operator(h1: f64, params: &ModelParams, grid: &VerticalGrid) -> Result<TridiagonalMatrix> {
    assemble_advected_laplacian(params.roughness, grid, w_reaction(h1, params))
}

/// Load and wall datum of the microrotation problem, scaled by `1 / R_c`.
pub(crate) fn w_column_data(
    u1: &FemFunction,
    h1: f64,
    params: &ModelParams,
    grid: &VerticalGrid,
) -> Result<(Vec<f64>, f64)> {
    let n2 = params.n2();
    let coupling = 2.0 * n2 * h1 / params.r_c;
    let mut load = load_derivative(u1, grid)?;
    load.iter_mut().for_each(|b| *b *= coupling);
    // R_c w'(0) = -2 N^2 h1 beta (u1(0) - s1)
    let wall = -coupling * params.beta * (u1.trace() - params.wall_speed);
    Ok((load, wall))
}

/// Load and wall datum of the unconstrained velocity problem.
pub(crate) fn u_tilde_column_data(
    w2: &FemFunction,
    h1: f64,
    params: &ModelParams,
    grid: &VerticalGrid,
) -> Result<(Vec<f64>, f64)> {
    let mut load = load_derivative(w2, grid)?;
    let coupling = -2.0 * params.n2() * h1;
    load.iter_mut().for_each(|b| *b *= coupling);
    // u'(0) = (2 / alpha) h1 w2(0)
    let wall = 2.0 / params.alpha * h1 * w2.trace();
    Ok((load, wall))
}

/// Microrotation column `w2^n` driven by the velocity column `u1^n`.
///
/// Solves `-R_c w'' + R_c M Z w' + 4 N^2 h1^2 w = 2 N^2 h1 u'` with
/// `R_c w'(0) = -2 N^2 h1 beta (u1(0) - s1)` and `w(1) = 0`.
pub fn solve_w_column(
    u1: &FemFunction,
    h1: f64,
    params: &ModelParams,
    grid: &VerticalGrid,
) -> Result<FemFunction> {
    let lu = TridiagonalLu::factor(&w_operator(h1, params, grid)?)?;
    let (load, wall) = w_column_data(u1, h1, params, grid)?;
    solve_neumann_column(&lu, load, wall)
}

/// Unconstrained velocity column `u1_tilde^{n+1}`.
///
/// Solves `-u'' + M Z u' = -2 N^2 h1 w'` with `u'(0) = (2 / alpha) h1 w(0)`
/// and `u(1) = 0`.
pub fn solve_u_tilde_column(
    w2: &FemFunction,
    h1: f64,
    params: &ModelParams,
    grid: &VerticalGrid,
) -> Result<FemFunction> {
    let lu = TridiagonalLu::factor(&assemble_advected_laplacian(params.roughness, grid, 0.0)?)?;
    let (load, wall) = u_tilde_column_data(w2, h1, params, grid)?;
    solve_neumann_column(&lu, load, wall)
}

/// `u1^{n+1} = u1_tilde^{n+1} - h1^2 dp psi`, with `dp` the pressure
/// gradient at the column midpoint. Stays in `V_nZ` because `psi(1) = 0`.
pub fn correct_velocity(u_tilde: &FemFunction, dp_mid: f64, h1: f64, psi: &Potential) -> FemFunction {
    u_tilde.axpy(-h1 * h1 * dp_mid, &psi.psi)
}
