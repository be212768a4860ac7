use thiserror::Error;

use crate::models::Family;
use crate::transforms::RepresentationTag;

/// Errors raised by the dynamics, closed-form, observable, ladder and
/// transform layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("frequency profile is not defined at t = {t}")]
    ProfileDomain { t: f64 },

    #[error("invalid frequency profile: {0}")]
    InvalidProfile(String),

    #[error("invalid physical constants: {0}")]
    InvalidConstants(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate width: alpha = {alpha} must be positive")]
    DegenerateWidth { alpha: f64 },

    #[error("unphysical width: imag(c) = {im_c} must be positive")]
    UnphysicalWidth { im_c: f64 },

    #[error("width collapse at t = {t}: imag(c) = {im_c}")]
    WidthCollapse { t: f64, im_c: f64 },

    #[error(
        "step error estimate {estimate:e} exceeds tolerance {tolerance:e} at t = {t}; use a smaller dt"
    )]
    AccuracyExceeded { t: f64, estimate: f64, tolerance: f64 },

    #[error("linearizing variable lambda vanished at t = {t}")]
    LinearizationSingularity { t: f64 },

    #[error("{operation} is not supported for the {family} family")]
    UnsupportedFamily {
        operation: &'static str,
        family: Family,
    },

    #[error("one-parameter family hits a pole (w = 0) at t = {t}")]
    FamilyPole { t: f64 },

    #[error("operator width c = {operator} does not match state width c = {state}")]
    WidthMismatch { operator: String, state: String },

    #[error("states have different Gaussian parameters and cannot be combined")]
    IncompatibleStates,

    #[error("overlap integral diverges: real part of the combined quadratic form is {re_q}")]
    DivergentIntegral { re_q: f64 },

    #[error("grid misses probability mass {outside_mass:e} (limit 1e-10)")]
    GridCoverage { outside_mass: f64 },

    #[error("operation requires a Gaussian (degree 0) state, got degree {degree}")]
    NonGaussianState { degree: usize },

    #[error("representation mismatch: expected {expected}, found {found}")]
    RepresentationMismatch {
        expected: RepresentationTag,
        found: RepresentationTag,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
