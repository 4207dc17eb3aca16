//! High-accuracy reference for the potential `psi`.
//!
//! With `phi = psi'`, the problem `-psi'' + M Z psi' = 1`, `psi'(0) = 0`,
//! `psi(1) = 0` becomes the initial-value problem `phi' = M Z phi - 1`,
//! `phi(0) = 0`. Running primitives of `phi` are carried along in the same
//! RK4 march, so `psi(Z) = Phi(Z) - Phi(1)` and `psi_bar` fall out without a
//! separate quadrature pass.

use crate::rk4::rk4_march;
use crate::OracleError;

#[derive(Debug, Clone)]
pub struct PsiOracle {
    pub z: Vec<f64>,
    pub psi: Vec<f64>,
    /// `psi'` at the same points.
    pub dpsi: Vec<f64>,
    pub psi_bar: f64,
}

impl PsiOracle {
    /// Cubic Hermite interpolation of `psi` at `z`.
    pub fn eval(&self, z: f64) -> f64 {
        let n = self.z.len() - 1;
        let h = 1.0 / n as f64;
        let k = ((z / h).floor() as usize).min(n - 1);
        let t = (z - self.z[k]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.psi[k] + h10 * h * self.dpsi[k] + h01 * self.psi[k + 1] + h11 * h * self.dpsi[k + 1]
    }
}

pub fn psi_ode_oracle(m: f64, steps: usize) -> Result<PsiOracle, OracleError> {
    if !(0.0..2.0).contains(&m) {
        return Err(OracleError::Input(format!("M = {m} outside [0, 2)")));
    }
    if steps < 10_000 {
        return Err(OracleError::Input(format!(
            "need at least 1e4 steps, got {steps}"
        )));
    }
    // y = (phi, Phi = int_0^Z phi, int_0^Z Phi)
    let path = rk4_march([0.0; 3], steps, |z, y: &[f64; 3]| [m * z * y[0] - 1.0, y[0], y[1]]);
    let end = path[steps];
    let z: Vec<f64> = (0..=steps).map(|k| k as f64 / steps as f64).collect();
    let psi = path.iter().map(|y| y[1] - end[1]).collect();
    let dpsi = path.iter().map(|y| y[0]).collect();
    Ok(PsiOracle {
        z,
        psi,
        dpsi,
        psi_bar: end[2] - end[1],
    })
}
