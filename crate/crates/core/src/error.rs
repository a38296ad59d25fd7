//! Error type shared by the geometry modules.

use thiserror::Error;

/// Errors raised by the algebraic and geometric operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("index {index} out of range 1..={dimension}")]
    IndexOutOfRange { index: usize, dimension: usize },

    #[error("unsupported dimension {0} (supported: 1..=32)")]
    UnsupportedDimension(usize),

    #[error("degree {degree} is invalid in dimension {dimension}")]
    InvalidDegree { degree: usize, dimension: usize },

    #[error("metric is not symmetric (max asymmetry {0:e})")]
    MetricNotSymmetric(f64),

    #[error("metric is not positive definite (smallest eigenvalue {0:e})")]
    MetricNotPositiveDefinite(f64),

    #[error("structure constants are not antisymmetric (max violation {0:e})")]
    NotAntisymmetric(f64),

    #[error("dimension {0} is not odd")]
    EvenDimension(usize),

    #[error("dimension {0} is not even")]
    OddDimension(usize),

    #[error("not an almost contact structure: |alpha ^ omega^n| = {0:e}")]
    NotAlmostContact(f64),

    #[error("metric is not compatible with (alpha, omega): max violation {0:e}")]
    IncompatibleMetric(f64),

    #[error("metric is not Einstein: max |ric - (s/n) g| = {0:e}")]
    NotEinstein(f64),

    #[error("not an almost Hermitian structure: max violation {0:e}")]
    NotAlmostHermitian(f64),

    #[error("Kaehler form is not closed: max |d Omega| = {0:e}")]
    NotAlmostKahler(f64),

    #[error("{0}")]
    InvalidInput(String),
}

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;
