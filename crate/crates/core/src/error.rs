use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("sequence length must be at least 1")]
    EmptySequence,

    #[error("coefficient {value} at index {index} is outside {{-1, 0, +1}}")]
    BadCoefficient { index: usize, value: i8 },

    #[error("spectral autocorrelation lost precision at lag {lag}: rounding residual {residual:e}")]
    Precision { lag: usize, residual: f64 },

    #[error("merit factor undefined: ||f||_4^4 equals ||f||_2^4")]
    DegenerateMeritFactor,

    #[error("{what} = {value} exceeds the supported limit {limit}")]
    OutOfScale {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("length fraction T must be positive and finite, got {0}")]
    InvalidLengthFraction(f64),

    #[error("rotation fraction R must be finite, got {0}")]
    InvalidRotationFraction(f64),

    #[error("point (R={r}, T={t}) is outside region D4")]
    OutsideD4 { r: f64, t: f64 },

    #[error("|R| = {0} exceeds 1/2")]
    RotationOutOfRange(f64),

    #[error("cubic has no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("expected {expected} real roots of the cubic, found {found}")]
    RootCount { expected: usize, found: usize },

    #[error("invalid prime range [{lo}, {hi}]")]
    InvalidRange { lo: u64, hi: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("t/p = {t}/{p} must exceed 3/2")]
    LengthTooShort { p: u64, t: usize },

    #[error("no records to export")]
    NoRecords,

    #[error("writing {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
