use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected ambient dimension {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("sphere dimension must be at least 1, got {0}")]
    InvalidDimension(usize),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("{what} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("singular input: {0}")]
    Singular(&'static str),

    #[error("polarization history of length {len} exceeds the depth limit {limit}")]
    DepthLimit { len: usize, limit: usize },

    #[error("cannot parse set spec at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("empty input")]
    EmptyInput,

    #[error("power-law fit not applicable: {0}")]
    FitNotApplicable(String),

    #[error("report output failed: {0}")]
    Output(String),
}

impl Error {
    pub(crate) fn out_of_range(what: &'static str, value: f64, min: f64, max: f64) -> Self {
        Error::OutOfRange {
            what,
            value,
            min,
            max,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Output(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Output(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Output(e.to_string())
    }
}
