//! Physical parameters, bearing geometry and the roughness coefficient.
//!
//! Everything here is dimensionless. The film height of the rough bearing is
//! `h_eps(x1) = eps * h1(x1) + eps^2 * h2(x1 / eps^2)`, where `h1` is the
//! leading-order gap and `h2` a 1-periodic, zero-average roughness pattern.
//! Only the scalar `M = int |h2'|^2` survives in the lubrication limit.
//!
//! The general roughness coefficient is an integral of `|grad h2|^2` over the
//! unit torus. A bearing that is invariant in the transverse direction has an
//! `h2` depending on the first fast variable only, so the torus integral
//! collapses to the 1D integral `int_0^1 h2'(X)^2 dX`; that is the form
//! implemented here.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Upper end (exclusive) of the admissible roughness coefficient range.
pub const M_MAX: f64 = 2.0;

/// Above this value the solver still runs but logs a warning.
pub const M_WARN: f64 = 1.5;

pub(crate) fn check_roughness(m: f64) -> Result<()> {
    if !m.is_finite() || m < 0.0 {
        return Err(Error::InvalidParameter {
            name: "M",
            value: m,
            reason: "must be a finite nonnegative number",
        });
    }
    if m >= M_MAX {
        return Err(Error::StabilityDomain(m));
    }
    Ok(())
}

/// Dimensionless model parameters of the lubrication-limit system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Coupling number `N`, with `N^2 = nu_r / (nu + nu_r)`; lies in (0, 1).
    pub coupling: f64,
    /// Rescaled microrotation length parameter `R_c > 0`.
    pub r_c: f64,
    /// Boundary microrotation coefficient `alpha > 0`.
    pub alpha: f64,
    /// Wall slip control `beta >= 0`.
    pub beta: f64,
    /// Horizontal wall velocity `s1`.
    pub wall_speed: f64,
    /// Roughness coefficient `M` in `[0, 2)`.
    pub roughness: f64,
}

/// The `(nu_b_bar, delta)` parameterization used for bearing studies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    /// `(1 - alpha N^2) / (1 - N^2)`.
    pub nu_b_bar: f64,
    /// `R_c / (2 N^2 beta)`; infinite when `beta = 0`.
    pub delta: f64,
}

impl ModelParams {
    pub fn new(
        coupling: f64,
        r_c: f64,
        alpha: f64,
        beta: f64,
        wall_speed: f64,
        roughness: f64,
    ) -> Result<Self> {
        if !(coupling > 0.0 && coupling < 1.0) {
            return Err(Error::InvalidParameter {
                name: "N",
                value: coupling,
                reason: "must lie in (0, 1)",
            });
        }
        if !(r_c > 0.0 && r_c.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "R_c",
                value: r_c,
                reason: "must be positive",
            });
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "must be positive",
            });
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "beta",
                value: beta,
                reason: "must be nonnegative",
            });
        }
        if !wall_speed.is_finite() {
            return Err(Error::InvalidParameter {
                name: "s1",
                value: wall_speed,
                reason: "must be finite",
            });
        }
        check_roughness(roughness)?;
        if roughness > M_WARN {
            log::warn!("roughness coefficient M = {roughness} is close to the coercivity limit 2");
        }
        Ok(Self {
            coupling,
            r_c,
            alpha,
            beta,
            wall_speed,
            roughness,
        })
    }

    /// Builds parameters from `(N, R_c, nu_b_bar, delta)`.
    ///
    /// `alpha = (1 - nu_b_bar (1 - N^2)) / N^2` and `beta = R_c / (2 N^2 delta)`.
    /// An infinite `delta` maps to `beta = 0`.
    pub fn from_derived(
        coupling: f64,
        r_c: f64,
        nu_b_bar: f64,
        delta: f64,
        wall_speed: f64,
        roughness: f64,
    ) -> Result<Self> {
        if !(coupling > 0.0 && coupling < 1.0) {
            return Err(Error::InvalidParameter {
                name: "N",
                value: coupling,
                reason: "must lie in (0, 1)",
            });
        }
        if !(delta > 0.0) {
            return Err(Error::InvalidParameter {
                name: "delta",
                value: delta,
                reason: "must be positive (use infinity for beta = 0)",
            });
        }
        let n2 = coupling * coupling;
        let alpha = (1.0 - nu_b_bar * (1.0 - n2)) / n2;
        let beta = if delta.is_infinite() {
            0.0
        } else {
            r_c / (2.0 * n2 * delta)
        };
        Self::new(coupling, r_c, alpha, beta, wall_speed, roughness)
    }

    /// Slider-bearing defaults: `N = 0.1`, `R_c = 0.01`, `nu_b_bar = 0.1`,
    /// `delta = 0.01`, `s1 = 1`.
    pub fn slider_defaults(roughness: f64) -> Result<Self> {
        Self::from_derived(0.1, 0.01, 0.1, 0.01, 1.0, roughness)
    }

    pub fn derived(&self) -> DerivedParams {
        let n2 = self.n2();
        DerivedParams {
            nu_b_bar: (1.0 - self.alpha * n2) / (1.0 - n2),
            delta: if self.beta == 0.0 {
                f64::INFINITY
            } else {
                self.r_c / (2.0 * n2 * self.beta)
            },
        }
    }

    #[inline]
    pub fn n2(&self) -> f64 {
        self.coupling * self.coupling
    }

    pub fn with_roughness(&self, roughness: f64) -> Result<Self> {
        Self::new(
            self.coupling,
            self.r_c,
            self.alpha,
            self.beta,
            self.wall_speed,
            roughness,
        )
    }
}

/// Spectrally interpolated periodic samples on a uniform grid of `[0, 1)`.
#[derive(Debug, Clone)]
pub struct SampledProfile {
    samples: Vec<f64>,
    // Fourier coefficients c_k of f(X) = sum_k c_k exp(2 pi i k X), k = 0..n.
    coeffs: Vec<Complex<f64>>,
}

impl SampledProfile {
    /// `samples[j]` is the profile value at `X = j / n`.
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Geometry(
                "a sampled roughness profile needs at least 2 samples".into(),
            ));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::Geometry("non-finite roughness sample".into()));
        }
        let n = samples.len();
        let mut buf: Vec<Complex<f64>> = samples.iter().map(|&v| Complex::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let scale = 1.0 / n as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        Ok(Self {
            samples,
            coeffs: buf,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    // Signed frequency of coefficient index k.
    fn freq(&self, k: usize) -> f64 {
        let n = self.coeffs.len();
        if 2 * k < n {
            k as f64
        } else {
            k as f64 - n as f64
        }
    }

    /// Trigonometric interpolant and its derivative at `x`.
    fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let n = self.coeffs.len();
        let mut value = self.coeffs[0].re;
        let mut deriv = 0.0;
        for k in 1..n {
            if 2 * k == n {
                // Nyquist mode: real cosine so the interpolant stays real.
                let w = PI * n as f64;
                value += self.coeffs[k].re * (w * x).cos();
                deriv -= self.coeffs[k].re * w * (w * x).sin();
                continue;
            }
            let w = 2.0 * PI * self.freq(k);
            let e = Complex::new((w * x).cos(), (w * x).sin());
            let term = self.coeffs[k] * e;
            value += term.re;
            deriv += (Complex::new(0.0, w) * term).re;
        }
        (value, deriv)
    }
}

/// The fast-scale roughness pattern `h2`, 1-periodic in its argument.
#[derive(Clone)]
pub enum RoughnessProfile {
    Flat,
    /// `amplitude * sin(2 pi (X + shift))`.
    Sinusoid { amplitude: f64, shift: f64 },
    /// Closed-form profile with its derivative.
    Function {
        value: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        derivative: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    },
    Sampled(SampledProfile),
}

impl fmt::Debug for RoughnessProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Flat => write!(f, "Flat"),
            Self::Sinusoid { amplitude, shift } => f
                .debug_struct("Sinusoid")
                .field("amplitude", amplitude)
                .field("shift", shift)
                .finish(),
            Self::Function { .. } => write!(f, "Function(..)"),
            Self::Sampled(s) => write!(f, "Sampled({} samples)", s.samples.len()),
        }
    }
}

impl RoughnessProfile {
    pub fn sinusoid(amplitude: f64) -> Self {
        Self::Sinusoid {
            amplitude,
            shift: 0.0,
        }
    }

    pub fn function<F, D>(value: F, derivative: D) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::Function {
            value: Arc::new(value),
            derivative: Arc::new(derivative),
        }
    }

    pub fn sampled(samples: Vec<f64>) -> Result<Self> {
        SampledProfile::new(samples).map(Self::Sampled)
    }

    pub fn value(&self, x: f64) -> f64 {
        match self {
            Self::Flat => 0.0,
            Self::Sinusoid { amplitude, shift } => amplitude * (2.0 * PI * (x + shift)).sin(),
            Self::Function { value, .. } => value(x),
            Self::Sampled(s) => s.eval_with_derivative(x).0,
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self {
            Self::Flat => 0.0,
            Self::Sinusoid { amplitude, shift } => {
                2.0 * PI * amplitude * (2.0 * PI * (x + shift)).cos()
            }
            Self::Function { derivative, .. } => derivative(x),
            Self::Sampled(s) => s.eval_with_derivative(x).1,
        }
    }

    /// Periodic trapezoid mean over `nodes` points.
    pub fn average(&self, nodes: usize) -> f64 {
        let n = nodes.max(1);
        (0..n).map(|j| self.value(j as f64 / n as f64)).sum::<f64>() / n as f64
    }
}

/// How `M` is integrated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Uniform periodic trapezoid nodes on `[0, 1)`.
    pub nodes: usize,
    /// Largest accepted `|mean(h2)|`.
    pub average_tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            nodes: 1024,
            average_tolerance: 1e-9,
        }
    }
}

/// `M = int_0^1 h2'(X)^2 dX` by the periodic trapezoid rule.
pub fn compute_roughness_coefficient(h2: &RoughnessProfile, quad: QuadratureSpec) -> Result<f64> {
    if quad.nodes < 2 {
        return Err(Error::InvalidParameter {
            name: "quadrature nodes",
            value: quad.nodes as f64,
            reason: "need at least 2 nodes",
        });
    }
    let average = h2.average(quad.nodes);
    if !(average.abs() <= quad.average_tolerance) {
        return Err(Error::NonZeroAverage {
            average,
            tolerance: quad.average_tolerance,
        });
    }
    let n = quad.nodes as f64;
    let m = (0..quad.nodes)
        .map(|j| h2.derivative(j as f64 / n).powi(2))
        .sum::<f64>()
        / n;
    check_roughness(m)?;
    Ok(m)
}

/// Leading-order gap `h1` on `[0, 1]`.
#[derive(Clone)]
pub enum LeadingGap {
    /// `1 + slope * x1`.
    Linear { slope: f64 },
    Function(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for LeadingGap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Linear { slope } => f.debug_struct("Linear").field("slope", slope).finish(),
            Self::Function(_) => write!(f, "Function(..)"),
        }
    }
}

impl LeadingGap {
    #[inline]
    pub fn eval(&self, x1: f64) -> f64 {
        match self {
            Self::Linear { slope } => 1.0 + slope * x1,
            Self::Function(h) => h(x1),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BearingGeometry {
    pub h1: LeadingGap,
    pub h2: RoughnessProfile,
}

impl BearingGeometry {
    /// Inclined slider with `h1 = 1 + slope * x1`.
    pub fn inclined(slope: f64, h2: RoughnessProfile) -> Result<Self> {
        Self::new(LeadingGap::Linear { slope }, h2)
    }

    pub fn new(h1: LeadingGap, h2: RoughnessProfile) -> Result<Self> {
        let geometry = Self { h1, h2 };
        geometry.validate()?;
        Ok(geometry)
    }

    pub fn slope(&self) -> Option<f64> {
        match self.h1 {
            LeadingGap::Linear { slope } => Some(slope),
            LeadingGap::Function(_) => None,
        }
    }

    fn validate(&self) -> Result<()> {
        let inf = match self.h1 {
            LeadingGap::Linear { slope } => 1.0f64.min(1.0 + slope),
            LeadingGap::Function(_) => (0..=1000)
                .map(|k| self.h1.eval(k as f64 / 1000.0))
                .fold(f64::INFINITY, f64::min),
        };
        if !(inf > 0.0) {
            return Err(Error::Geometry(format!(
                "leading-order gap must stay positive, inf h1 = {inf}"
            )));
        }
        let quad = QuadratureSpec::default();
        let average = self.h2.average(quad.nodes);
        if !(average.abs() <= quad.average_tolerance) {
            return Err(Error::NonZeroAverage {
                average,
                tolerance: quad.average_tolerance,
            });
        }
        Ok(())
    }

    pub fn roughness_coefficient(&self) -> Result<f64> {
        compute_roughness_coefficient(&self.h2, QuadratureSpec::default())
    }

    /// Physical film height `eps h1(x1) + eps^2 h2(x1 / eps^2)`.
    ///
    /// Only used for reporting; the solver works on the limit problem.
    pub fn gap_function(&self, eps: f64, x1: f64) -> Result<f64> {
        if !(eps > 0.0) {
            return Err(Error::InvalidParameter {
                name: "eps",
                value: eps,
                reason: "must be positive",
            });
        }
        if !(0.0..=1.0).contains(&x1) {
            return Err(Error::InvalidParameter {
                name: "x1",
                value: x1,
                reason: "must lie in [0, 1]",
            });
        }
        Ok(eps * self.h1.eval(x1) + eps * eps * self.h2.value(x1 / (eps * eps)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn flat_profile_has_zero_coefficient() {
        let m = compute_roughness_coefficient(&RoughnessProfile::Flat, QuadratureSpec::default())
            .unwrap();
        assert_eq!(m, 0.0);
    }

    #[test]
    fn sinusoid_matches_closed_form() {
        for a in [0.05, 0.1, 0.2, 0.3] {
            let m = compute_roughness_coefficient(
                &RoughnessProfile::sinusoid(a),
                QuadratureSpec::default(),
            )
            .unwrap();
            assert_relative_eq!(m, 2.0 * PI * PI * a * a, max_relative = 1e-10);
        }
    }

    #[test]
    fn sampled_and_closed_form_agree() {
        let a = 0.15;
        let n = 64;
        let samples: Vec<f64> = (0..n)
            .map(|j| a * (2.0 * PI * j as f64 / n as f64).sin())
            .collect();
        let sampled = RoughnessProfile::sampled(samples).unwrap();
        let closed = RoughnessProfile::sinusoid(a);
        let q = QuadratureSpec::default();
        let ms = compute_roughness_coefficient(&sampled, q).unwrap();
        let mc = compute_roughness_coefficient(&closed, q).unwrap();
        assert_relative_eq!(ms, mc, max_relative = 1e-10);
        for x in [0.0, 0.013, 0.37, 0.5, 0.91] {
            assert!((sampled.value(x) - closed.value(x)).abs() < 1e-12);
            assert!((sampled.derivative(x) - closed.derivative(x)).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_nonzero_average() {
        let h2 = RoughnessProfile::function(|x| 0.1 + 0.1 * (2.0 * PI * x).sin(), |x| {
            0.2 * PI * (2.0 * PI * x).cos()
        });
        let err = compute_roughness_coefficient(&h2, QuadratureSpec::default()).unwrap_err();
        assert!(matches!(err, Error::NonZeroAverage { .. }));
        assert!(BearingGeometry::inclined(-0.5, h2).is_err());
    }

    #[test]
    fn rejects_coefficient_outside_stability_domain() {
        // 2 pi^2 a^2 >= 2 once a >= 1/pi
        let h2 = RoughnessProfile::sinusoid(0.33);
        let err = compute_roughness_coefficient(&h2, QuadratureSpec::default()).unwrap_err();
        assert!(matches!(err, Error::StabilityDomain(_)));
        assert!(matches!(
            ModelParams::slider_defaults(2.0),
            Err(Error::StabilityDomain(_))
        ));
        assert!(ModelParams::slider_defaults(1.99).is_ok());
        assert!(ModelParams::slider_defaults(-0.1).is_err());
    }

    #[test]
    fn quadrature_needs_two_nodes() {
        let q = QuadratureSpec {
            nodes: 1,
            average_tolerance: 1e-9,
        };
        assert!(compute_roughness_coefficient(&RoughnessProfile::Flat, q).is_err());
    }

    #[test]
    fn gap_function_plug_in() {
        let g = BearingGeometry::inclined(-0.5, RoughnessProfile::Flat).unwrap();
        assert_relative_eq!(g.gap_function(0.1, 0.0).unwrap(), 0.1, epsilon = 1e-15);
        assert_relative_eq!(g.gap_function(0.1, 1.0).unwrap(), 0.05, epsilon = 1e-15);

        let g = BearingGeometry::inclined(-0.5, RoughnessProfile::sinusoid(0.1)).unwrap();
        let x1 = 0.005;
        let expected = 0.1 * (1.0 - 0.5 * x1) + 0.01 * 0.1 * PI.sin();
        assert_relative_eq!(g.gap_function(0.1, x1).unwrap(), expected, epsilon = 1e-14);

        assert!(g.gap_function(0.0, 0.5).is_err());
        assert!(g.gap_function(0.1, 1.5).is_err());
    }

    #[test]
    fn geometry_rejects_closing_gap() {
        assert!(BearingGeometry::inclined(-1.0, RoughnessProfile::Flat).is_err());
        assert!(BearingGeometry::inclined(-0.99, RoughnessProfile::Flat).is_ok());
    }

    #[test]
    fn slider_defaults_convert() {
        let p = ModelParams::slider_defaults(0.5).unwrap();
        assert_relative_eq!(p.alpha, 90.1, max_relative = 1e-12);
        assert_relative_eq!(p.beta, 50.0, max_relative = 1e-12);
        assert_eq!(p.wall_speed, 1.0);
    }

    #[test]
    fn zero_beta_roundtrips_through_infinite_delta() {
        let p = ModelParams::new(0.2, 0.01, 3.0, 0.0, 1.0, 0.0).unwrap();
        let d = p.derived();
        assert!(d.delta.is_infinite());
        let q = ModelParams::from_derived(0.2, 0.01, d.nu_b_bar, d.delta, 1.0, 0.0).unwrap();
        assert_eq!(q.beta, 0.0);
    }

    proptest! {
        #[test]
        fn coefficient_is_translation_invariant(a in 0.01f64..0.3, shift in 0.0f64..1.0) {
            let q = QuadratureSpec::default();
            let m0 = compute_roughness_coefficient(&RoughnessProfile::sinusoid(a), q).unwrap();
            let m1 = compute_roughness_coefficient(
                &RoughnessProfile::Sinusoid { amplitude: a, shift }, q).unwrap();
            prop_assert!((m0 - m1).abs() <= 1e-12 * m0.max(1.0));
        }

        #[test]
        fn coefficient_scales_quadratically(scale in 0.1f64..3.0) {
            // Two-mode profile keeps M < 2 over the whole range.
            let base = |s: f64| RoughnessProfile::function(
                move |x| s * (0.05 * (2.0 * PI * x).sin() + 0.02 * (6.0 * PI * x).cos()),
                move |x| s * (0.1 * PI * (2.0 * PI * x).cos() - 0.12 * PI * (6.0 * PI * x).sin()),
            );
            let q = QuadratureSpec::default();
            let m1 = compute_roughness_coefficient(&base(1.0), q).unwrap();
            let ms = compute_roughness_coefficient(&base(scale), q).unwrap();
            prop_assert!((ms - scale * scale * m1).abs() <= 1e-12);
        }

        #[test]
        fn derived_parameters_roundtrip(
            n in 0.01f64..0.95,
            r_c in 1e-4f64..1.0,
            nu in 0.01f64..0.99,
            delta in 1e-3f64..10.0,
        ) {
            let p = ModelParams::from_derived(n, r_c, nu, delta, 1.0, 0.0).unwrap();
            let d = p.derived();
            prop_assert!((d.nu_b_bar - nu).abs() <= 1e-12 * nu.max(1.0));
            prop_assert!((d.delta - delta).abs() <= 1e-12 * delta.max(1.0));
            let q = ModelParams::from_derived(n, r_c, d.nu_b_bar, d.delta, 1.0, 0.0).unwrap();
            prop_assert!((q.alpha - p.alpha).abs() <= 1e-12 * p.alpha.max(1.0));
            prop_assert!((q.beta - p.beta).abs() <= 1e-12 * p.beta.max(1.0));
        }
    }
}
