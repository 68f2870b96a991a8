use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate element label {0:?}")]
    DuplicateLabel(String),

    #[error("index {index} out of range for a set of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("size guard violated: {0}")]
    SizeGuard(String),

    #[error("maps are defined on different prosets")]
    ProsetMismatch,

    #[error("table is not a translation: {0}")]
    NotATranslation(String),

    #[error("map is not monotone: {0}")]
    NotMonotone(String),

    #[error("translation count exceeds cap of {cap}")]
    CapExceeded { cap: usize },

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("supremum of the translations with ω ≤ {eps} is not a translation in the list")]
    SupremumNotRealized { eps: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("functor {functor} does not apply to target {target}")]
    InapplicableFunctor { functor: String, target: String },

    #[error("module is not functorial: {0}")]
    NotFunctorial(String),

    #[error("proset is not totally ordered")]
    NotTotal,

    #[error("search guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("order violation: {0}")]
    OrderViolation(String),

    #[error("certificates do not chain: {0}")]
    ChainMismatch(String),

    #[error("value is not on the declared grid: {0}")]
    OffGrid(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

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
