//! Error type shared across the library.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed scalar: {0}")]
    ParseScalar(String),

    #[error("zero denominator in rational")]
    ZeroDenominator,

    #[error("affine map requires a nonzero scale factor")]
    ZeroAffineScale,

    #[error("division by zero scalar")]
    DivisionByZero,

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("x(s) on a q-quadratic lattice needs a half-integer s, got {0}")]
    NonHalfIntegerPoint(String),

    #[error("degenerate lattice step at s = {0}: x(s+1/2) = x(s-1/2)")]
    DegenerateStep(String),

    #[error("polynomial degree {deg} exceeds operator table bound {max}")]
    DegreeExceedsTables { deg: usize, max: usize },

    #[error("recurrence coefficient C_{0} is zero (regularity violation)")]
    ZeroRecurrenceC(usize),

    #[error("recurrence data too short: need B_0..B_{{{need_b}}} and C_1..C_{{{need_c}}}")]
    MissingRecurrenceData { need_b: usize, need_c: usize },

    #[error("functional has only {have} valid moments, need {need}")]
    InsufficientMoments { need: usize, have: usize },

    #[error("functional is not regular: <u, P_{0}^2> = 0")]
    NotRegular(usize),

    #[error("simple set required: polynomial at degree {0} is missing or has wrong degree")]
    NotSimpleSet(usize),

    #[error("Pearson leading coefficient d_{0} vanishes")]
    PearsonLeadingZero(i64),

    #[error("regularity coefficient d_{0} vanishes")]
    DnZero(i64),

    #[error("Askey-Wilson restriction violated at n = {n}: factor {factor} vanishes")]
    RestrictionViolation { n: i64, factor: String },

    #[error("invalid family parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
