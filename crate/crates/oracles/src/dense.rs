//! Dense Gaussian elimination with partial pivoting.

use microlub::fem1d::TridiagonalSystem;

use crate::OracleError;

/// Row-major square system.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSystem {
    pub n: usize,
    pub matrix: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl DenseSystem {
    pub fn new(n: usize, matrix: Vec<f64>, rhs: Vec<f64>) -> Result<Self, OracleError> {
        if matrix.len() != n * n || rhs.len() != n {
            return Err(OracleError::Dimension(format!(
                "matrix has {} entries and rhs {} for n = {n}",
                matrix.len(),
                rhs.len()
            )));
        }
        Ok(Self { n, matrix, rhs })
    }

    /// Expands a tridiagonal system entry by entry.
    pub fn from_tridiagonal(sys: &TridiagonalSystem) -> Self {
        let n = sys.matrix.dim();
        let mut matrix = vec![0.0; n * n];
        for i in 0..n {
            for j in i.saturating_sub(1)..(i + 2).min(n) {
                matrix[i * n + j] = sys.matrix.get(i, j);
            }
        }
        Self {
            n,
            matrix,
            rhs: sys.rhs.clone(),
        }
    }

    pub fn identity(n: usize, rhs: Vec<f64>) -> Self {
        let mut matrix = vec![0.0; n * n];
        for i in 0..n {
            matrix[i * n + i] = 1.0;
        }
        Self { n, matrix, rhs }
    }

    pub fn hilbert(n: usize, rhs: Vec<f64>) -> Self {
        let matrix = (0..n * n)
            .map(|k| 1.0 / ((k / n + k % n + 1) as f64))
            .collect();
        Self { n, matrix, rhs }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                self.matrix[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }
}

pub fn dense_solve(sys: &DenseSystem) -> Result<Vec<f64>, OracleError> {
    let n = sys.n;
    let mut a = sys.matrix.clone();
    let mut b = sys.rhs.clone();
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, a[r * n + col].abs()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(pivot > 1e-14 * scale) {
            return Err(OracleError::Singular(col));
        }
        if pivot_row != col {
            for j in 0..n {
                a.swap(col * n + j, pivot_row * n + j);
            }
            b.swap(col, pivot_row);
        }
        let d = a[col * n + col];
        for r in col + 1..n {
            let f = a[r * n + col] / d;
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                a[r * n + j] -= f * a[col * n + j];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[i * n + j] * x[j]).sum();
        x[i] = (b[i] - s) / a[i * n + i];
    }
    Ok(x)
}
