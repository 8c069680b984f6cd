use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    /// The given interior hull is not the interior of any lattice polygon.
    #[error("polygon is not the interior hull of any lattice polygon")]
    NotRealizable,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("triangulation is not regular")]
    NonRegular,
    #[error("graph with {vertices} vertices exceeds the canonicalization bound of {limit}")]
    TooLarge { vertices: usize, limit: usize },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
