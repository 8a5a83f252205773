use std::fmt;

use crate::chain::Case;
use crate::testfn::Class;

/// Errors raised by chain construction, estimators and the eigensolver.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("the chain needs at least one state")]
    EmptyChain,

    #[error("weight sequences differ in length: mu has {mu}, nu has {nu}")]
    LengthMismatch { mu: usize, nu: usize },

    #[error("nonpositive or non-finite weight {which}[{index}] = {value}")]
    InvalidWeight {
        which: Weight,
        index: usize,
        value: f64,
    },

    #[error(
        "exponent p = {0} is outside the accepted window [1+1e-6, 1e6]; \
         the degenerate cases p = 1 and p = infinity are not covered"
    )]
    InvalidExponent(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operation requires a {expected} chain, got {found}")]
    WrongCase { expected: Case, found: Case },

    #[error("chain size N = {n} exceeds the cap {cap} for this operation")]
    TooLarge { n: usize, cap: usize },

    #[error("test function is not admissible for class {class}: {reason}")]
    Inadmissible { class: Class, reason: String },

    #[error("eigenvalue search failed: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which weight sequence an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    Mu,
    Nu,
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Mu => f.write_str("mu"),
            Weight::Nu => f.write_str("nu"),
        }
    }
}

impl Error {
    pub(crate) fn inadmissible(class: Class, reason: impl Into<String>) -> Self {
        Error::Inadmissible {
            class,
            reason: reason.into(),
        }
    }
}
