use thiserror::Error;

/// Everything that can go wrong in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    Budget {
        what: String,
        needed: u128,
        limit: u128,
    },

    #[error("insufficient precision: {0}")]
    Precision(String),

    #[error("density is infinite: exponent set lies in a coordinate hyperplane")]
    DensityInfinite,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn budget(what: impl Into<String>, needed: u128, limit: u128) -> Self {
        Error::Budget {
            what: what.into(),
            needed,
            limit,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
