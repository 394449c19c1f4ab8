use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    Dimension {
        context: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("cannot parse {input:?} as a field element: {reason}")]
    Parse { input: String, reason: String },

    #[error("invalid weights at {path}: {reason}")]
    InvalidWeights { path: String, reason: String },

    #[error("invalid flag at {path}: {reason}")]
    InvalidFlag { path: String, reason: String },

    #[error("invalid input at {path}: {reason}")]
    Invalid { path: String, reason: String },

    #[error("enumeration budget exceeded: {needed} visits required, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("input is not fine: gcd of degree and jumps is {gcd}")]
    NotFine { gcd: u64 },
}

impl Error {
    pub(crate) fn dim(context: impl Into<String>, expected: usize, found: usize) -> Self {
        Error::Dimension {
            context: context.into(),
            expected,
            found,
        }
    }

    pub(crate) fn invalid(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Invalid {
            path: path.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
