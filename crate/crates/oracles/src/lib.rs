//! Reference solvers for cross-checking `microlub`.
//!
//! These share only parameter and geometry types with the production crate:
//! no assembly, no factorization, no iteration. Performance is not a goal.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod dense;
mod psi_ode;
mod reference;
mod rk4;

pub use dense::{dense_solve, DenseSystem};
pub use psi_ode::{psi_ode_oracle, PsiOracle};
pub use reference::{column_response, coupled_reference, m0_reference, ColumnResponse, ReferenceSolution};

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("singular system at column {0}")]
    Singular(usize),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    Input(String),
}
