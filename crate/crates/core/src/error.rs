use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("size cap exceeded: {size} elements (cap {cap})")]
    SizeCap { size: usize, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("element support exceeds the class space; enlarge the space first")]
    SupportExceeded,

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("zero is not an element of the multiplicative group")]
    ZeroElement,

    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("constant not in the constants field: {0}")]
    NotInConstantsField(String),

    #[error("element is not in the base field F")]
    NotInBaseField,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        field,
        reason: reason.into(),
    }
}
