//! Crate-wide error type.
//!
//! Recoverable per-window conditions (zero-variance segments, too few
//! extrema inside a detrending window) are *not* errors: they surface as
//! [`crate::mfdfa::CellValidity::Degenerate`] cells so a run can complete on
//! partially pathological input. The variants here are hard failures of a
//! whole operation.

use crate::series::SeriesKind;

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    // ---- series ----
    /// A CSV body row failed to parse (wrong field count, unparseable or
    /// non-finite value). `row` is the 1-based data-row index, header excluded.
    #[error("malformed CSV data row {row}: {reason}")]
    MalformedCsv { row: usize, reason: String },

    /// A price value was zero or negative; log returns would be undefined.
    #[error("non-positive price in CSV data row {row}: {value}")]
    NonPositivePrice { row: usize, value: f64 },

    /// The configured date or value column is absent from the CSV header.
    #[error("CSV header has no column named {name:?}")]
    MissingColumn { name: String },

    /// Input contained a header but no data rows, or an empty series.
    #[error("input contains no data")]
    EmptyInput,

    /// An operation was handed a series of the wrong kind.
    #[error("wrong series kind: expected {expected}, got {actual}")]
    WrongKind {
        expected: &'static str,
        actual: SeriesKind,
    },

    /// `log_returns` lag outside `1..len`.
    #[error("return lag {lag} invalid for series of length {len}")]
    LagTooLarge { lag: usize, len: usize },

    // ---- emd ----
    /// Signal shorter than the operation's minimum length.
    #[error("signal too short: need at least {required} samples, got {actual}")]
    TooShort { required: usize, actual: usize },

    /// Fewer than two interior maxima or minima; spline envelopes undefined.
    #[error("insufficient extrema for envelopes: {maxima} maxima, {minima} minima (need at least 2 of each)")]
    InsufficientExtrema { maxima: usize, minima: usize },

    // ---- mfdfa ----
    /// Window start index out of range for the given scale.
    #[error("window start {start} out of range for scale {scale} on profile of length {len}")]
    WindowOutOfRange {
        start: usize,
        scale: usize,
        len: usize,
    },

    /// Profile too short to populate the requested scale grid.
    #[error("series too short for scale grid: need at least {required} samples, got {actual}")]
    SeriesTooShort { required: usize, actual: usize },

    /// Invalid scale-grid or q-grid construction parameters.
    #[error("invalid grid bounds: {reason}")]
    BadBounds { reason: String },

    /// No q value in a regime had enough usable scales for a log-log fit.
    #[error("regime {regime} too sparse: no q value had enough usable scales")]
    RegimeTooSparse { regime: &'static str },

    // ---- spectrum ----
    /// Too few tau points for finite-difference differentiation.
    #[error("q grid too coarse for singularity spectrum: {points} points (need at least 3)")]
    GridTooCoarse { points: usize },

    /// The Hurst curve does not contain q = 2, so H(2) statistics are undefined.
    #[error("Hurst curve has no entry at q = 2")]
    MissingQ2,

    // ---- synth ----
    /// Invalid generator specification.
    #[error("invalid generator spec: {reason}")]
    BadSpec { reason: String },

    /// Circulant embedding produced negative eigenvalues even after the
    /// embedding size was doubled; the requested covariance is not realizable.
    #[error("circulant embedding failed for fGn (H = {hurst}, n = {len})")]
    EmbeddingFailure { hurst: f64, len: usize },

    // ---- cli ----
    /// Unusable run configuration (unknown key, bad value, no inputs).
    #[error("bad configuration: {reason}")]
    BadConfig { reason: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}
