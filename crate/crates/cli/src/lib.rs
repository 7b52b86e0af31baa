//! Run descriptions, parameter sweeps and file output for the revival
//! simulator. The `simulate` binary is a thin wrapper over [`run`] and
//! [`sweep`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod runner;

pub use config::{EmitFlags, RunConfig, SweepAxis, SweepConfig, WindowSpec};
pub use error::{FieldError, RunError};
pub use runner::{run, sweep, RunOutcome, SweepOutcome};
