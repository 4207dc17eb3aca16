//! Lubrication-limit model of a micropolar fluid in a slider bearing with a
//! rough inclined surface and nonzero microrotation boundary conditions.
//!
//! The crate solves the reduced 2D system on `(x1, Z) in (0,1)^2`: a coupled
//! pair of vertical ODEs per column for the velocity `u1` and microrotation
//! `w2`, linked through a Reynolds equation for the pressure `p`. Roughness
//! enters through the single coefficient `M` of [`model`].
//!
//! ```no_run
//! use microlub::{BearingGeometry, Grids, Initializer, ModelParams, RoughnessProfile, Scheme};
//!
//! let params = ModelParams::slider_defaults(0.5)?;
//! let geometry = BearingGeometry::inclined(-0.5, RoughnessProfile::Flat)?;
//! let scheme = Scheme::new(params, geometry, Grids::new(200, 400)?)?;
//! let outcome = scheme.solve(Initializer::Couette, 1e-8, 500)?;
//! let report = microlub::BearingReport::from_outcome(&scheme, &outcome);
//! println!("W = {}, c_f = {}", report.load, report.friction_coefficient);
//! # Ok::<(), microlub::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fem1d;
pub mod metrics;
pub mod model;
pub mod scheme;

pub use error::{Error, Result};
pub use fem1d::{FemFunction, VerticalGrid};
pub use metrics::BearingReport;
pub use model::{
    compute_roughness_coefficient, BearingGeometry, DerivedParams, LeadingGap, ModelParams,
    QuadratureSpec, RoughnessProfile,
};
pub use scheme::{
    Grids, HorizontalGrid, Initializer, IterationRecord, Potential, Scheme, SchemeState,
    SolveOutcome, StabilityReport,
};
