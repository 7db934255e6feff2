use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),
    /// A product landed above the truncation degree.
    #[error("degree {degree} exceeds truncation {truncation}")]
    Overflow { degree: usize, truncation: usize },
    /// A query or computation needs degrees the data is not valid for.
    #[error("horizon exhausted: {0}")]
    Horizon(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A theorem-backed identity failed on computed data.
    #[error("internal check failed: {0}")]
    InternalCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
