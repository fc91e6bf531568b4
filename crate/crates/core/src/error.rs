//! Error type shared by every module of the crate.

use thiserror::Error;

use crate::timeseries::Frequency;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    // --- series construction and transforms ---
    #[error("series is empty")]
    EmptySeries,
    #[error("missing or non-finite observation at index {index}")]
    MissingObservation { index: usize },
    #[error("non-positive value {value} at index {index}; cannot take logarithm")]
    NonPositiveValue { index: usize, value: f64 },
    #[error("series too short: need at least {needed} observations, got {got}")]
    SeriesTooShort { needed: usize, got: usize },
    #[error("frequency mismatch: {left:?} vs {right:?}")]
    FrequencyMismatch { left: Frequency, right: Frequency },
    #[error("series spans do not overlap")]
    EmptyOverlap,
    #[error("expected {expected:?} series, got {got:?}")]
    WrongFrequency { expected: Frequency, got: Frequency },
    #[error("monthly series does not cover a complete quarter")]
    NoCompleteQuarter,
    #[error("invalid period: {0}")]
    InvalidPeriod(String),

    // --- frequency alignment ---
    #[error("series of length {len} is not divisible by frequency ratio {m}")]
    NotDivisible { len: usize, m: usize },
    #[error("series of length {len} is too short for m={m} with {k_lags} lag blocks")]
    TooShort { len: usize, m: usize, k_lags: usize },
    #[error("aligned matrix with {k_lags} lag blocks cannot be unstacked")]
    NotInvertible { k_lags: usize },
    #[error("frequency ratio must be at least 1")]
    InvalidRatio,

    // --- regression ---
    #[error("design is rank deficient (|r_min|/|r_max| = {condition:.3e})")]
    RankDeficient { condition: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid weight shape parameters: {0}")]
    InvalidShape(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("duplicate column label {0:?}")]
    DuplicateLabel(String),

    // --- model zoo ---
    #[error("unknown model acronym {0:?}")]
    UnknownModel(String),
    #[error("restriction {restriction} is not applicable to {model}")]
    IllegalRestriction {
        model: &'static str,
        restriction: &'static str,
    },
    #[error("dataset span is insufficient to build the {0} design")]
    InsufficientSpan(&'static str),
    #[error(
        "insufficient history for {model} at origin {origin}: {got} observations, need {needed}"
    )]
    InsufficientHistory {
        model: &'static str,
        origin: String,
        got: usize,
        needed: usize,
    },

    // --- evaluation ---
    #[error("invalid rolling window {0}")]
    InvalidWindow(usize),
    #[error("invalid backtest range: {0}")]
    InvalidRange(String),
    #[error("empty input")]
    EmptyInput,
    #[error("degenerate variance {variance:.3e} in loss differential")]
    DegenerateVariance { variance: f64 },
    #[error("no integration order <= {0} satisfies both ADF and KPSS")]
    OrderNotFound(usize),

    // --- ingestion ---
    #[error("{path}: row {row}: {message}")]
    Parse {
        path: String,
        row: usize,
        message: String,
    },
    #[error("{path}: row {row}: missing value")]
    MissingValue { path: String, row: usize },
    #[error("{path}: row {row}: dates are not strictly increasing")]
    NonMonotonicDates { path: String, row: usize },
    #[error("manifest is missing role {0}")]
    MissingRole(String),
    #[error("invalid manifest: {0}")]
    InvalidManifest(String),
    #[error("snapshot format version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("snapshot checksum failure: {0}")]
    ChecksumFailure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerical core rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::RankDeficient { .. }
                | Error::DegenerateVariance { .. }
                | Error::OrderNotFound(_)
        )
    }
}
