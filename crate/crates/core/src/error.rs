use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("Mal'cev basis for c={c}, r={r} has m={m} letters, above the configured cap of {cap}")]
    BasisTooLarge {
        c: usize,
        r: usize,
        m: usize,
        cap: usize,
    },

    #[error("expanded word needs more than {cap} factors (configured cap)")]
    WordTooLong { cap: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not in full form: condition ({condition}) fails at row {row}: {detail}")]
    NotFullForm {
        condition: &'static str,
        row: usize,
        detail: String,
    },

    #[error("relator subgroup is not normal: conjugate of row {row} by generator a{generator} is not in it")]
    NotNormal { row: usize, generator: usize },

    #[error("element is not in the image of the homomorphism")]
    NotInImage,

    #[error("subgroup reduction was run without expression tracking")]
    TrackingAbsent,

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
