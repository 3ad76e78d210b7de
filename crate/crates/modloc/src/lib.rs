//! Batch front end for `modloc-core`: JSON configs, report and CSV formats,
//! and the mode runner behind the `modloc` binary.
//!
//! Exit statuses: 0 when every asserted check passes, 2 when a check fails,
//! 1 on any input error.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::manual_is_multiple_of)]

pub mod config;
pub mod describe;
pub mod error;
pub mod formats;
pub mod report;
pub mod run;

pub use config::{Mode, RunConfig};
pub use error::RunError;
pub use run::{execute, Invocation, Outcome};

/// Worker count from `MODLOC_THREADS`, if set.
pub fn threads_from_env() -> Result<Option<usize>, RunError> {
    match std::env::var("MODLOC_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(RunError::invalid("MODLOC_THREADS", format!("expected a positive integer, got `{s}`"))),
        },
    }
}
