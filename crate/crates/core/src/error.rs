use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable sets differ: [{left}] vs [{right}]")]
    VarMismatch { left: String, right: String },

    #[error("series precision mismatch: {0} vs {1} quarter-units")]
    PrecisionMismatch(usize, usize),

    /// A computation was refused because its size exceeds a configured cap.
    #[error("{what}: {value} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: String,
        cap: String,
    },

    #[error("edge {{{0}, {1}}} is not present in the graph")]
    EdgeAbsent(usize, usize),

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("line {line}, column {column}: {msg}")]
    Parse {
        line: usize,
        column: usize,
        msg: String,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("term decoding failed: {0}")]
    Decode(String),

    #[error("reconstruction failed: {0}")]
    Reconstruct(String),

    #[error("arithmetic check failed: {0}")]
    Arithmetic(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn cap(what: &'static str, value: impl ToString, cap: impl ToString) -> Self {
        Error::CapExceeded {
            what,
            value: value.to_string(),
            cap: cap.to_string(),
        }
    }

    pub(crate) fn parse(line: usize, column: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            msg: msg.into(),
        }
    }

    pub fn is_cap_exceeded(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}
