use thiserror::Error;

/// Errors raised by the calibration, fusion, simulation and I/O layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate calibration: {0}")]
    DegenerateCalibration(String),

    #[error("insufficient candidates: need at least 3 calibration pairs, got {0}")]
    InsufficientCandidates(usize),

    #[error("no valid subset: every 3-subset of the candidates is degenerate")]
    NoValidSubset,

    #[error("conflicting match: {0}")]
    ConflictingMatch(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for errors that come from malformed input text rather than the domain.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
