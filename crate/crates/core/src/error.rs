use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("index {index} outside table range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    /// The alternating sum cancelled too much to be trusted.
    #[error("alternating sum lost precision: largest term exceeds result by {ratio:.3e}")]
    PrecisionLoss { value: f64, ratio: f64 },

    #[error("rejection sampler exhausted its budget after {attempts} attempts ({draws} draws)")]
    AttemptsExhausted { attempts: u64, draws: u64 },

    #[error("n = {n} exceeds the enumeration cap {cap}")]
    AboveCap { n: usize, cap: usize },

    #[error("sequence is not an admissible derangement encoding: {0}")]
    InvalidEta(String),

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
