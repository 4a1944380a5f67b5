use thiserror::Error;

use crate::algebra::field::FieldElement;

/// Errors raised anywhere in the engine.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A result would need coefficients beyond the known window.
    #[error("precision exhausted: {context}{}", needed.map(|n| format!(" (need precision {n})")).unwrap_or_default())]
    PrecisionExhausted {
        context: String,
        needed: Option<i64>,
    },

    #[error("not invertible: {0}")]
    NotInvertible(String),

    /// Inverting an element of a quotient tower uncovered a zero divisor:
    /// the minimal polynomial at `level` factors as `factor * cofactor`.
    #[error("zero divisor at tower level {level}: minimal polynomial splits")]
    ZeroDivisorSplit {
        level: usize,
        factor: Vec<FieldElement>,
        cofactor: Vec<FieldElement>,
    },

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("connection is not block diagonal for the requested partition")]
    NotBlockDiagonal,

    #[error("leading term is a scalar matrix")]
    ScalarLeadingTerm,

    #[error("connection is not regular singular (pole order {0})")]
    NotRegularSingular(i64),

    #[error("no nilpotent orbit of dimension {delta} in gl_{n}")]
    NoSuchOrbit { n: usize, delta: usize },

    #[error("linear solve failed: {0}")]
    LinearSolveFailed(String),

    #[error("cohomology did not stabilize after {0} doublings")]
    Unstabilized(usize),

    #[error("incompatible operands: {0}")]
    Incompatible(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn precision(context: impl Into<String>, needed: Option<i64>) -> Self {
        Error::PrecisionExhausted {
            context: context.into(),
            needed,
        }
    }
}
