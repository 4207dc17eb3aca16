//! Driver for the `microlub` command: configuration, output files and the
//! four subcommands.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod format;

pub use commands::{run_potential, run_single, run_sweep, run_verify, solve_cell, Cell, Check, SweepOutcome, SweepRow};
pub use config::{ConfigError, RunConfig, WallParams};
