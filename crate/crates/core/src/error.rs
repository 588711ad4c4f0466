use thiserror::Error;

/// Errors raised by the forecasting engine.
#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected} inputs, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate regressor: gain is zero but the innovation is {innovation}")]
    DegenerateRegressor { innovation: f64 },

    #[error("selection block not warmed up: {seen} of {needed} samples seen")]
    NotWarmedUp { needed: usize, seen: usize },

    #[error("cascade capacity exhausted: {max} layers already built")]
    CapacityExhausted { max: usize },

    #[error("degenerate range: training values are constant ({0})")]
    DegenerateRange(f64),

    #[error("series too short: {len} values cannot feed {lags} lags")]
    SeriesTooShort { len: usize, lags: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported snapshot: {0}")]
    VersionMismatch(String),

    #[error("malformed snapshot: {0}")]
    Snapshot(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
