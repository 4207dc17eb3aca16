//! Two-point flux discretization of the Reynolds equation
//! `d/dx (psi_bar h1^3 dp/dx) = d/dx int_0^1 h1 u_tilde dZ`, `p(0) = p(1) = 0`.
//!
//! Both fluxes live at column midpoints `x_{i+1/2}`; their difference is taken
//! at the pressure nodes.

use crate::error::{Error, Result};
use crate::fem1d::{integrate, FemFunction, TridiagonalMatrix, TridiagonalSystem, VerticalGrid};
use crate::fem1d::solve_tridiagonal;
use crate::model::LeadingGap;

/// Pressure nodes `x_i = i / (n1 + 1)`, `i = 0..=n1+1`, and the `n1 + 1`
/// column midpoints between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HorizontalGrid {
    pub n1: usize,
}

impl HorizontalGrid {
    pub fn new(n1: usize) -> Result<Self> {
        if n1 < 1 {
            return Err(Error::InvalidParameter {
                name: "n1",
                value: n1 as f64,
                reason: "need at least one interior pressure node",
            });
        }
        Ok(Self { n1 })
    }

    #[inline]
    pub fn step(&self) -> f64 {
        1.0 / (self.n1 + 1) as f64
    }

    pub fn node_count(&self) -> usize {
        self.n1 + 2
    }

    pub fn column_count(&self) -> usize {
        self.n1 + 1
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.n1 + 1 {
            1.0
        } else {
            i as f64 * self.step()
        }
    }

    pub fn midpoint(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.step()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.node_count()).map(|i| self.node(i)).collect()
    }

    pub fn midpoints(&self) -> Vec<f64> {
        (0..self.column_count()).map(|i| self.midpoint(i)).collect()
    }
}

/// Flux `int_0^1 h1 u dZ` of every column.
pub fn column_fluxes(
    columns: &[FemFunction],
    h1_mid: &[f64],
    vgrid: &VerticalGrid,
) -> Result<Vec<f64>> {
    columns
        .iter()
        .zip(h1_mid)
        .map(|(u, h)| Ok(h * integrate(u, vgrid)?))
        .collect()
}

/// Midpoint pressure gradients `(p_{i+1} - p_i) / h`.
pub fn pressure_gradient(p: &[f64], hgrid: &HorizontalGrid) -> Vec<f64> {
    let h = hgrid.step();
    p.windows(2).map(|w| (w[1] - w[0]) / h).collect()
}

/// Centered divergence of midpoint fluxes at the interior pressure nodes.
pub fn flux_divergence(flux: &[f64], hgrid: &HorizontalGrid) -> Vec<f64> {
    let h = hgrid.step();
    flux.windows(2).map(|w| (w[1] - w[0]) / h).collect()
}

/// Pressure on all nodes given the source flux at each midpoint.
pub fn solve_reynolds_flux(
    source_flux: &[f64],
    psi_bar: f64,
    h1_mid: &[f64],
    hgrid: &HorizontalGrid,
) -> Result<Vec<f64>> {
    let cols = hgrid.column_count();
    for len in [source_flux.len(), h1_mid.len()] {
        if len != cols {
            return Err(Error::GridMismatch {
                expected: cols,
                got: len,
            });
        }
    }
    if !(psi_bar > 0.0) {
        return Err(Error::InvalidParameter {
            name: "psi_bar",
            value: psi_bar,
            reason: "must be positive",
        });
    }
    if let Some(&bad) = h1_mid.iter().find(|&&h| !(h > 0.0)) {
        return Err(Error::Geometry(format!("nonpositive gap h1 = {bad}")));
    }
    let h = hgrid.step();
    // conductance of each midpoint segment
    let k: Vec<f64> = h1_mid.iter().map(|hm| psi_bar * hm.powi(3) / h).collect();
    let n = hgrid.n1;
    let mut a = TridiagonalMatrix::zeros(n);
    let mut rhs = vec![0.0; n];
    for r in 0..n {
        // row r is pressure node i = r + 1, between midpoints r and r + 1
        a.diag[r] = k[r] + k[r + 1];
        if r > 0 {
            a.lower[r] = -k[r];
        }
        if r + 1 < n {
            a.upper[r] = -k[r + 1];
        }
        rhs[r] = source_flux[r] - source_flux[r + 1];
    }
    let interior = solve_tridiagonal(&TridiagonalSystem::new(a, rhs)?)?;
    let mut p = Vec::with_capacity(n + 2);
    p.push(0.0);
    p.extend(interior);
    p.push(0.0);
    Ok(p)
}

/// Reynolds solve from the unconstrained velocity columns.
pub fn solve_reynolds(
    u_tilde: &[FemFunction],
    psi_bar: f64,
    h1: &LeadingGap,
    hgrid: &HorizontalGrid,
    vgrid: &VerticalGrid,
) -> Result<Vec<f64>> {
    let h1_mid: Vec<f64> = hgrid.midpoints().iter().map(|&x| h1.eval(x)).collect();
    let flux = column_fluxes(u_tilde, &h1_mid, vgrid)?;
    solve_reynolds_flux(&flux, psi_bar, &h1_mid, hgrid)
}
