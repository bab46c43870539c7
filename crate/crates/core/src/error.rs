use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A configuration field is out of range or inconsistent with another one.
    #[error("invalid configuration: {field}: {reason}")]
    Config { field: &'static str, reason: String },

    /// Arguments violate an operation's precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Non-finite data, a failed factorization or a solver that did not converge.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Exhaustive selection would enumerate more subsets than allowed.
    #[error(
        "exhaustive search over C({n},{k}) = {count} subsets exceeds the cap of {cap}; \
         use partitioned selection instead"
    )]
    SearchCapExceeded {
        n: usize,
        k: usize,
        count: u128,
        cap: u128,
    },
}

impl Error {
    pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Config {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn input(reason: impl Into<String>) -> Self {
        Error::InvalidInput(reason.into())
    }

    pub(crate) fn numeric(reason: impl Into<String>) -> Self {
        Error::Numeric(reason.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
