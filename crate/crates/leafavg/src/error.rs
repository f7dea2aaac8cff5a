use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("resource cap exceeded: {what} would need {needed}, cap is {cap}")]
    ResourceCap {
        what: &'static str,
        needed: u128,
        cap: u128,
    },
    #[error("point outside the phase space: {0}")]
    Domain(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("layout rejected: {0}")]
    Layout(String),
    #[error("plug is not thin: {0}")]
    NotThin(String),
    #[error("hypothesis not verified: {0}")]
    Hypothesis(String),
    #[error("mesh: {0}")]
    Mesh(String),
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
