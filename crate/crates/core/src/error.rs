//! Error type shared by the whole crate.

use thiserror::Error;

/// Errors produced by constructors, channel application, and closed forms.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("qudit dimension must be at least 2, got {d}")]
    DimensionTooSmall { d: usize },

    #[error("dense operations are capped at d = {max}, got d = {d}")]
    DimensionTooLarge { d: usize, max: usize },

    #[error("{what} must be below {bound}, got {value}")]
    IndexOutOfRange {
        what: &'static str,
        value: usize,
        bound: usize,
    },

    #[error("matrix/vector dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("control and target site of a controlled gate must differ (both {site})")]
    ControlEqualsTarget { site: usize },

    #[error("state vector is not normalized: |norm - 1| = {defect:.3e}")]
    NotNormalized { defect: f64 },

    #[error("{name} must lie in [{lo}, {hi}], got {value}")]
    ProbabilityOutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("error-probability table violates normalization: defect {defect:.3e}")]
    TableNotNormalized { defect: f64 },

    #[error("density matrix is not valid: {detail}")]
    InvalidDensityMatrix { detail: String },

    #[error("eigendecomposition did not converge")]
    EigenFailure,

    #[error("eigenvalue {value:.3e} below the PSD tolerance")]
    NegativeEigenvalue { value: f64 },

    #[error("{formula}: spectral coefficients are not a probability distribution: {detail}")]
    SpectralCoefficients {
        formula: &'static str,
        detail: String,
    },

    #[error("{formula} is not defined for this channel family/state")]
    UnsupportedCombination { formula: &'static str },

    #[error("sweep spot-check failed for curve `{label}` at mu = {mu}: closed form {closed} vs oracle {oracle}")]
    SpotCheckFailed {
        label: String,
        mu: f64,
        closed: f64,
        oracle: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
