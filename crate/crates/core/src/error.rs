use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: must satisfy {constraint}")]
    InvalidParameter {
        name: &'static str,
        constraint: &'static str,
    },

    #[error("dimension mismatch: expected length {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("{what}: expected {expected} frame, got {actual}")]
    FrameMismatch {
        what: &'static str,
        expected: &'static str,
        actual: &'static str,
    },

    #[error("matrix is not symmetric at ({row}, {col}): |a_ij - a_ji| = {difference:e}")]
    NotSymmetric {
        row: usize,
        col: usize,
        difference: f64,
    },

    #[error("eigensolver did not converge after {rotations} rotations (residual {residual:e})")]
    NoConvergence { rotations: usize, residual: f64 },

    #[error("adaptive quadrature did not reach tolerance (error estimate {estimate:e}, {evaluations} evaluations)")]
    QuadratureFailed { estimate: f64, evaluations: usize },

    #[error("phonon enumeration exceeds {limit} states")]
    EnumerationTooLarge { limit: usize },

    #[error("log-log fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),

    #[error("log-log fit requires positive abscissa and values (point {index})")]
    NonPositiveValue { index: usize },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("internal consistency check failed: {what} (deviation {deviation:e})")]
    Inconsistent { what: &'static str, deviation: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
