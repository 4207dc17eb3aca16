//! Piecewise-linear finite elements on the vertical segment `[0, 1]`.
//!
//! The trial space `V_nZ` holds continuous, piecewise-affine functions that
//! vanish at `Z = 1`. Nodes `Z_0 .. Z_nZ` are unknowns; `Z_{nZ+1} = 1` is the
//! eliminated Dirichlet node. Every column problem of the scheme is a
//! variant of
//!
//! ```text
//! a(phi, xi) = int phi' xi' + M int Z phi' xi + r int phi xi
//! ```
//!
//! with the natural (flux) condition at `Z = 0` entering through the load.

use crate::error::{Error, Result};
use crate::model::check_roughness;

/// Uniform vertical grid with `nz + 2` nodes `Z_k = k / (nz + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerticalGrid {
    pub nz: usize,
}

impl VerticalGrid {
    pub fn new(nz: usize) -> Result<Self> {
        if nz < 1 {
            return Err(Error::InvalidParameter {
                name: "nZ",
                value: nz as f64,
                reason: "need at least one interior node",
            });
        }
        Ok(Self { nz })
    }

    #[inline]
    pub fn step(&self) -> f64 {
        1.0 / (self.nz + 1) as f64
    }

    /// Total node count, boundary nodes included.
    #[inline]
    pub fn node_count(&self) -> usize {
        self.nz + 2
    }

    /// Number of unknowns in `V_nZ`.
    #[inline]
    pub fn dof_count(&self) -> usize {
        self.nz + 1
    }

    #[inline]
    pub fn node(&self, k: usize) -> f64 {
        // exact endpoint even when the step is not representable
        if k == self.nz + 1 {
            1.0
        } else {
            k as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.node_count()).map(|k| self.node(k)).collect()
    }
}

/// Nodal values of a continuous piecewise-affine function on a [`VerticalGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct FemFunction {
    values: Vec<f64>,
}

impl FemFunction {
    pub fn from_values(values: Vec<f64>) -> Self {
        Self { values }
    }

    /// A member of `V_nZ`; the last value must be exactly zero.
    pub fn trial(values: Vec<f64>) -> Result<Self> {
        match values.last() {
            Some(&0.0) => Ok(Self { values }),
            _ => Err(Error::Geometry(
                "trial-space function must vanish at Z = 1".into(),
            )),
        }
    }

    pub fn zeros(grid: &VerticalGrid) -> Self {
        Self {
            values: vec![0.0; grid.node_count()],
        }
    }

    /// Interpolant of `f` with the value at `Z = 1` forced to zero.
    pub fn interpolate_trial(grid: &VerticalGrid, f: impl Fn(f64) -> f64) -> Self {
        let mut values: Vec<f64> = (0..grid.node_count()).map(|k| f(grid.node(k))).collect();
        values[grid.nz + 1] = 0.0;
        Self { values }
    }

    /// Builds a `V_nZ` function from the unknowns of a solve.
    pub(crate) fn from_dofs(mut dofs: Vec<f64>) -> Self {
        dofs.push(0.0);
        Self { values: dofs }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn in_trial_space(&self) -> bool {
        self.values.last() == Some(&0.0)
    }

    /// Value at `Z = 0`.
    pub fn trace(&self) -> f64 {
        self.values[0]
    }

    pub fn check_grid(&self, grid: &VerticalGrid) -> Result<()> {
        if self.values.len() != grid.node_count() {
            return Err(Error::GridMismatch {
                expected: grid.node_count(),
                got: self.values.len(),
            });
        }
        Ok(())
    }

    /// `self - other`, nodewise.
    pub fn sub(&self, other: &Self) -> Self {
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// `self + scale * other`, nodewise.
    pub fn axpy(&self, scale: f64, other: &Self) -> Self {
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + scale * b)
                .collect(),
        }
    }

    /// `int_0^1 (f')^2`, i.e. the squared `V_Z` norm.
    pub fn seminorm_sq(&self, grid: &VerticalGrid) -> f64 {
        let h = grid.step();
        self.values.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum::<f64>() / h
    }

    pub fn seminorm(&self, grid: &VerticalGrid) -> f64 {
        self.seminorm_sq(grid).sqrt()
    }

    /// `int_0^1 f^2`, exact for the piecewise-affine function.
    pub fn l2_norm_sq(&self, grid: &VerticalGrid) -> f64 {
        let h = grid.step();
        h / 3.0
            * self
                .values
                .windows(2)
                .map(|w| w[0] * w[0] + w[0] * w[1] + w[1] * w[1])
                .sum::<f64>()
    }

    /// Second-order one-sided derivative at `Z = 0`.
    pub fn wall_derivative(&self, grid: &VerticalGrid) -> f64 {
        let v = &self.values;
        if v.len() < 3 {
            return (v[1] - v[0]) / grid.step();
        }
        (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * grid.step())
    }
}

/// Exact integral of the piecewise-affine interpolant (composite trapezoid).
pub fn integrate(f: &FemFunction, grid: &VerticalGrid) -> Result<f64> {
    f.check_grid(grid)?;
    let h = grid.step();
    Ok(h * f.values.windows(2).map(|w| 0.5 * (w[0] + w[1])).sum::<f64>())
}

/// Exact `int_0^1 f g` for two piecewise-affine functions.
pub fn integrate_product(f: &FemFunction, g: &FemFunction, grid: &VerticalGrid) -> Result<f64> {
    f.check_grid(grid)?;
    g.check_grid(grid)?;
    let h = grid.step();
    let (a, b) = (&f.values, &g.values);
    Ok(h / 6.0
        * (0..a.len() - 1)
            .map(|k| {
                2.0 * a[k] * b[k] + a[k] * b[k + 1] + a[k + 1] * b[k] + 2.0 * a[k + 1] * b[k + 1]
            })
            .sum::<f64>())
}

/// Square tridiagonal matrix. Row `i` reads
/// `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1]`;
/// `lower[0]` and `upper[n-1]` are unused and kept at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            lower: vec![0.0; n],
            diag: vec![0.0; n],
            upper: vec![0.0; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            lower: vec![0.0; n],
            diag: vec![1.0; n],
            upper: vec![0.0; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.upper[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    /// Entry `(i, j)`; zero outside the band.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.diag[i]
        } else if j + 1 == i {
            self.lower[i]
        } else if i + 1 == j {
            self.upper[i]
        } else {
            0.0
        }
    }

    /// `x^T A y`.
    pub fn quadratic_form(&self, x: &[f64], y: &[f64]) -> f64 {
        x.iter().zip(self.apply(y)).map(|(a, b)| a * b).sum()
    }

    fn check_dims(&self) -> Result<()> {
        let n = self.diag.len();
        for len in [self.lower.len(), self.upper.len()] {
            if len != n {
                return Err(Error::GridMismatch {
                    expected: n,
                    got: len,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub matrix: TridiagonalMatrix,
    pub rhs: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn new(matrix: TridiagonalMatrix, rhs: Vec<f64>) -> Result<Self> {
        matrix.check_dims()?;
        if rhs.len() != matrix.dim() {
            return Err(Error::GridMismatch {
                expected: matrix.dim(),
                got: rhs.len(),
            });
        }
        Ok(Self { matrix, rhs })
    }

    pub fn residual_inf(&self, x: &[f64]) -> f64 {
        self.matrix
            .apply(x)
            .iter()
            .zip(&self.rhs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// LU factors of a tridiagonal matrix (Thomas algorithm, no pivoting).
///
/// No pivoting is needed for the column operators: their symmetric part is
/// positive definite, so every leading principal minor is nonzero.
#[derive(Debug, Clone)]
pub struct TridiagonalLu {
    lower: Vec<f64>,
    // Multipliers l_i = lower[i] / pivot[i-1].
    mult: Vec<f64>,
    pivot: Vec<f64>,
    upper: Vec<f64>,
}

impl TridiagonalLu {
    pub fn factor(a: &TridiagonalMatrix) -> Result<Self> {
        a.check_dims()?;
        let n = a.dim();
        let scale = a
            .diag
            .iter()
            .chain(&a.lower)
            .chain(&a.upper)
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let tiny = 1e-14 * scale.max(f64::MIN_POSITIVE);
        let mut pivot = vec![0.0; n];
        let mut mult = vec![0.0; n];
        for i in 0..n {
            let mut d = a.diag[i];
            if i > 0 {
                mult[i] = a.lower[i] / pivot[i - 1];
                d -= mult[i] * a.upper[i - 1];
            }
            if !(d.abs() > tiny) {
                return Err(Error::SingularPivot { row: i, pivot: d });
            }
            pivot[i] = d;
        }
        Ok(Self {
            lower: a.lower.clone(),
            mult,
            pivot,
            upper: a.upper.clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.pivot.len()
    }

    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if rhs.len() != n {
            return Err(Error::GridMismatch {
                expected: n,
                got: rhs.len(),
            });
        }
        let mut y = rhs.to_vec();
        for i in 1..n {
            y[i] -= self.mult[i] * y[i - 1];
        }
        y[n - 1] /= self.pivot[n - 1];
        for i in (0..n - 1).rev() {
            y[i] = (y[i] - self.upper[i] * y[i + 1]) / self.pivot[i];
        }
        debug_assert_eq!(self.lower.len(), n);
        Ok(y)
    }
}

pub fn solve_tridiagonal(sys: &TridiagonalSystem) -> Result<Vec<f64>> {
    TridiagonalLu::factor(&sys.matrix)?.solve(&sys.rhs)
}

/// Matrix of `a(phi, xi) = int phi' xi' + M int Z phi' xi + r int phi xi` on `V_nZ`.
///
/// Row `i` is the test function `phi_i`, column `j` the trial function.
/// The advection integrand is piecewise quadratic and integrated exactly.
pub fn assemble_advected_laplacian(
    m: f64,
    grid: &VerticalGrid,
    reaction: f64,
) -> Result<TridiagonalMatrix> {
    check_roughness(m)?;
    if !(reaction >= 0.0 && reaction.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "reaction",
            value: reaction,
            reason: "must be finite and nonnegative",
        });
    }
    let n = grid.dof_count();
    let h = grid.step();
    let mut a = TridiagonalMatrix::zeros(n);
    let dphi = [-1.0 / h, 1.0 / h];
    for k in 0..=grid.nz {
        let (z0, z1) = (grid.node(k), grid.node(k + 1));
        // int_e Z N_a for the two local hats
        let z_moment = [h * (2.0 * z0 + z1) / 6.0, h * (z0 + 2.0 * z1) / 6.0];
        let mass = [[2.0, 1.0], [1.0, 2.0]];
        let mut local = [[0.0; 2]; 2];
        for (ia, row) in local.iter_mut().enumerate() {
            for (ib, entry) in row.iter_mut().enumerate() {
                *entry = dphi[ia] * dphi[ib] * h
                    + m * dphi[ib] * z_moment[ia]
                    + reaction * h / 6.0 * mass[ia][ib];
            }
        }
        let global = [k, k + 1];
        for ia in 0..2 {
            let i = global[ia];
            if i >= n {
                continue;
            }
            for ib in 0..2 {
                let j = global[ib];
                if j >= n {
                    continue;
                }
                let v = local[ia][ib];
                if i == j {
                    a.diag[i] += v;
                } else if j > i {
                    a.upper[i] += v;
                } else {
                    a.lower[i] += v;
                }
            }
        }
    }
    Ok(a)
}

/// Load vector `int phi_i` of the unit source.
pub fn load_unit(grid: &VerticalGrid) -> Vec<f64> {
    let h = grid.step();
    let mut b = vec![h; grid.dof_count()];
    b[0] = 0.5 * h;
    b
}

/// Load vector `int f' phi_i` for a piecewise-affine `f`.
pub fn load_derivative(f: &FemFunction, grid: &VerticalGrid) -> Result<Vec<f64>> {
    f.check_grid(grid)?;
    let n = grid.dof_count();
    let v = f.values();
    let mut b = vec![0.0; n];
    for k in 0..=grid.nz {
        let half = 0.5 * (v[k + 1] - v[k]);
        b[k] += half;
        if k + 1 < n {
            b[k + 1] += half;
        }
    }
    Ok(b)
}

/// Dofs of `f` in `V_nZ` (the values except the eliminated node).
pub fn dofs(f: &FemFunction) -> &[f64] {
    &f.values[..f.values.len() - 1]
}
