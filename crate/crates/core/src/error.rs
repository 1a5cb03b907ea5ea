use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("letter {0} has no image under the substitution")]
    Unmapped(String),
    #[error("letter {0} is not declared")]
    Undeclared(String),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("length mismatch: {0}")]
    Arity(String),
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unsupported manifold `{0}`")]
    UnsupportedManifold(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("model point has no matrix for {0}")]
    MissingLetter(String),
    #[error("no declared monomial basis: {0}")]
    NoBasis(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
