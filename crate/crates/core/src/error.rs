use thiserror::Error;

/// Library-wide error type.
///
/// The variants map onto the distinct exit conditions of the command-line
/// front end: malformed input, violated mathematical preconditions, exhausted
/// search resources, and bound-certificate failures (which indicate a defect
/// in the library rather than in the input).
#[derive(Debug, Error)]
pub enum Error {
    /// Input could not be parsed or fails schema validation.
    #[error("parse error: {0}")]
    Parse(String),
    /// Dimension or shape mismatch between operands.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// A mathematical precondition of the requested operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// An enumeration exceeded its configured height cap or point budget
    /// before the answer was determined.
    #[error("resource budget exhausted: {0}")]
    Resource(String),
    /// An output failed the height bound it is guaranteed to satisfy; this
    /// falsifies the implementation, not the input.
    #[error("library defect: {0}")]
    Defect(String),
}

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
    pub fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
    pub fn defect(msg: impl Into<String>) -> Self {
        Error::Defect(msg.into())
    }
}
