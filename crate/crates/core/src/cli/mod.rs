//! Scenario files and the drivers behind the `gaussian-riccati` tool.
//!
//! Exit codes: 2 for parse or validation errors, 3 for numerical failures
//! of the integrator, 4 for I/O errors.

mod drivers;
mod output;
mod scenario;

use std::fmt;

use crate::error::Error;

pub use drivers::{
    compare, run, scan, write_compare, write_run, write_scan, CompareOutput, CompareReport, RunOutput, RunReport,
    ScanRow,
};
pub use output::{format_float, Column};
pub use scenario::{CoherentControls, Scenario, ScanGrid, SCHEMA};

/// Failure of a CLI command, carrying its exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Unreadable or ill-formed input; `field` is the dotted path.
    Invalid { field: String, message: String },
    /// The integrator or an analytic formula failed mid-run.
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn invalid(field: impl Into<String>, message: impl fmt::Display) -> Self {
        CliError::Invalid { field: field.into(), message: message.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    /// Sorts a library error raised while running a validated scenario.
    pub(crate) fn from_run(err: Error) -> Self {
        match err {
            Error::WidthCollapse { .. }
            | Error::AccuracyExceeded { .. }
            | Error::LinearizationSingularity { .. }
            | Error::FamilyPole { .. }
            | Error::UnphysicalWidth { .. }
            | Error::DegenerateWidth { .. } => CliError::Numerical(err.to_string()),
            Error::ProfileDomain { .. } | Error::InvalidProfile(_) => CliError::invalid("model.omega", err),
            Error::InvalidConstants(_) => CliError::invalid("model", err),
            _ => CliError::invalid("run", err),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid { field, message } => write!(f, "invalid `{field}`: {message}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}
