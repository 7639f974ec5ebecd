//! Crate-wide error type.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by data handling, model construction, training and evaluation.
#[derive(Error, Debug)]
pub enum Error {
    /// Not enough observations to carry out the requested operation.
    #[error("insufficient data: need at least {required} points, got {actual}")]
    InsufficientData { required: usize, actual: usize },

    /// Normalization denominator collapsed to zero (constant series).
    #[error("degenerate scale: {context}")]
    DegenerateScale { context: String },

    /// A user-supplied changepoint lies outside the training time range.
    #[error("invalid changepoint {value}: must lie inside the training range (0, 1)")]
    InvalidChangepoint { value: f64 },

    /// Country code not covered by the bundled holiday table.
    #[error("unknown holiday country: {0}")]
    UnknownCountry(String),

    /// Input vector length does not match the declared shape.
    #[error("shape mismatch: expected {expected}, got {actual} ({context})")]
    ShapeMismatch {
        expected: usize,
        actual: usize,
        context: String,
    },

    /// Scaled-error metric denominator is zero (constant training series).
    #[error("zero denominator: training series is constant")]
    ZeroDenominator,

    /// Two series that must align have different lengths.
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// Auto-regressive generator coefficients describe a non-stationary process.
    #[error("non-stationary AR coefficients (spectral radius {radius:.4} >= 1)")]
    NonStationary { radius: f64 },

    /// A gradient became NaN or infinite during training.
    #[error("non-finite gradient at step {step}: {detail}")]
    NonFiniteGradient { step: usize, detail: String },

    /// Raw timestamps cannot be placed on a regular grid.
    #[error("invalid timestamps: {0}")]
    InvalidTimestamps(String),

    /// A required future-regressor value is absent for a forecast timestamp.
    #[error("missing value for future regressor '{name}' at row {row}")]
    MissingFutureRegressor { name: String, row: usize },

    /// Malformed CSV input.
    #[error("csv error: {0}")]
    Csv(String),

    /// Malformed configuration file or invalid option combination.
    #[error("config error: {0}")]
    Config(String),

    /// Model file could not be read or written.
    #[error("model io error: {0}")]
    ModelIo(String),

    /// Scenario id not recognised by the synthetic generator.
    #[error("unknown scenario id: {0}")]
    UnknownScenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable process/ABI status code: 2 parse, 3 insufficient data,
    /// 4 training failure, 5 missing future-regressor values, 1 other.
    pub fn status_code(&self) -> u8 {
        match self {
            Error::Csv(_)
            | Error::Config(_)
            | Error::InvalidTimestamps(_)
            | Error::UnknownScenario(_)
            | Error::UnknownCountry(_)
            | Error::InvalidChangepoint { .. }
            | Error::ModelIo(_) => 2,
            Error::InsufficientData { .. } | Error::DegenerateScale { .. } => 3,
            Error::NonFiniteGradient { .. } | Error::NonStationary { .. } => 4,
            Error::MissingFutureRegressor { .. } => 5,
            _ => 1,
        }
    }
}

/// Signal that a gap is too large to impute; the caller drops missing
/// positions instead of filling them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImputeAbort {
    /// Length of the offending run of missing values.
    pub gap_len: usize,
    /// Index of the first missing value in the run.
    pub at: usize,
}

/// Signal that every loss recorded by the learning-rate range test was
/// non-finite; the caller falls back to a fixed learning rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DivergedTest;
