use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The roughness coefficient left the coercive range `[0, 2)`.
    #[error("roughness coefficient M = {0} is outside the stability domain [0, 2)")]
    StabilityDomain(f64),

    #[error("roughness profile average {average:e} exceeds tolerance {tolerance:e}")]
    NonZeroAverage { average: f64, tolerance: f64 },

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("grid mismatch: expected {expected} nodes, got {got}")]
    GridMismatch { expected: usize, got: usize },

    #[error("singular pivot {pivot:e} at row {row}")]
    SingularPivot { row: usize, pivot: f64 },

    #[error("degenerate baseline: {0}")]
    DegenerateBaseline(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
