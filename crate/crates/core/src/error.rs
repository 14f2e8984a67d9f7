use std::path::PathBuf;

use crate::pulse_dsl::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid spin system: {0}")]
    InvalidSystem(String),

    #[error("invalid density state: {0}")]
    InvalidState(String),

    #[error("operator is not unitary: max |U'U - 1| = {0:.3e}")]
    NotUnitary(f64),

    #[error("invalid pulse element: {0}")]
    InvalidElement(String),

    #[error("malformed sequence at element {index}: {message}")]
    Sequence { index: usize, message: String },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("invalid Werner purity {0}: states with epsilon outside [0, 1] are not positive semidefinite")]
    InvalidEpsilon(f64),

    #[error("ambiguous readout on qubit {qubit}: multiplet lines cancel")]
    AmbiguousReadout { qubit: u8 },

    #[error("unknown sequence name `{0}`")]
    UnknownSequence(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
