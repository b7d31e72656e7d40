use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid coloring: {0}")]
    InvalidColoring(String),

    #[error("domain [1,{n}] with {r} colors is too large for exhaustive enumeration")]
    OracleTooLarge { n: usize, r: usize },

    #[error("coloring is not valid on [1,{m}]: monochromatic triple ({x}, {y}, {z})")]
    PremiseViolated {
        m: usize,
        x: usize,
        y: usize,
        z: usize,
    },

    #[error("construction precondition failed: {0}")]
    Precondition(String),

    #[error("malformed assignment: {0}")]
    Assignment(String),

    #[error("no valid coloring of [1,{upper}] should exist for ({a},{b}) with 2 colors, yet one was found")]
    BoundExceeded { a: usize, b: usize, upper: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
