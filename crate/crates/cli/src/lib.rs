//! Command-line front end: orbit tables, curve samples and plots, stability
//! reports and the verification suites.
//!
//! Exit codes are 0 on success, 1 on invalid input and 2 when a
//! verification check fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod csv_io;
pub mod svg;
pub mod verify;

pub use app::{run_cli, run_with, RunConfig, EXIT_INVALID, EXIT_OK, EXIT_VERIFY_FAILED};
