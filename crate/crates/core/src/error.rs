use num_bigint::BigUint;
use thiserror::Error;

use crate::arith::Rat;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("square root of negative value {0}")]
    NegativeSqrt(Rat),

    #[error("zero has no square class")]
    ZeroClass,

    #[error("factorization of {value} incomplete with trial-division bound {bound}")]
    IncompleteFactorization { value: BigUint, bound: u64 },

    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("parameter {0} is not in (0,1)")]
    ParamOutOfRange(Rat),

    #[error("not a right triangle: {0}")]
    NotRightTriangle(String),

    #[error("area must be positive, got {0}")]
    InvalidArea(Rat),

    #[error("{t} is not a parameter of a triangle with area {area} up to squares")]
    NotMember { t: Box<Rat>, area: Box<Rat> },

    #[error("parameters belong to different areas {0} and {1}")]
    AreaMismatch(Box<Rat>, Box<Rat>),

    #[error("degenerate result: parameter 1 has no triangle")]
    DegenerateParam,

    #[error("descent not applicable: 1−t, 1+t not both squares")]
    NotApplicable,

    #[error("the identity has no affine point")]
    IdentityHasNoPoint,

    #[error("point {0} is torsion and has no triangle")]
    TorsionPoint(String),

    #[error("point {0} is not on the curve")]
    NotOnCurve(String),

    #[error("degenerate: {0}")]
    Degenerate(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("no representative with W-image {0}; representative set is incomplete")]
    MissingCoset(String),

    #[error("invalid representative set: {0}")]
    InvalidRepresentatives(String),

    #[error("internal: halving failed for a kernel element: {0}")]
    HalvingFailed(String),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// Internal errors mean the arithmetic contradicted itself, as opposed
    /// to an input that simply has no answer.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::HalvingFailed(_) | Error::InvariantViolation(_))
    }

    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}
