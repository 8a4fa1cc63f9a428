use thiserror::Error;

use crate::groebner::GBasis;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{what} = {value} exceeds the configured bound {bound}")]
    BoundExceeded {
        what: &'static str,
        value: u64,
        bound: u64,
    },
    #[error("division by zero")]
    DivisionByZero,
    #[error("discrete logarithm of zero")]
    ZeroArgument,
    #[error("root-of-unity orders differ: {0} vs {1}")]
    OrderMismatch(u64, u64),
    #[error("{target} is not a multiple of {order}")]
    NotAMultiple { order: u64, target: u64 },
    #[error("polynomial and basis use different term orders")]
    TermOrderMismatch,
    #[error("{k} is not coprime to {n}")]
    NotCoprime { k: i64, n: u64 },
    #[error("order {m} does not divide q - 1 = {q_minus_one}")]
    OrderDoesNotDivide { m: u64, q_minus_one: u64 },
    #[error("character power s = {s} is trivial for order m = {m}")]
    TrivialPower { s: i64, m: u64 },
    #[error("gamma must be nonzero")]
    ZeroGamma,
    #[error("multiplier maps to zero in the field")]
    ZeroMultiplier,
    #[error("order m = {0} must be even")]
    OddOrder(u64),
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("mode not supported: {0}")]
    ModeUnsupported(String),
    #[error("resource limit exceeded after {} S-pairs", .0.stats.s_pairs)]
    LimitExceeded(Box<GBasis>),
    #[error("elimination ideal is zero: no univariate relation")]
    NotZeroDimensional,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("basis is not certified")]
    UncertifiedBasis,
    #[error("m = {0} is not tabulated")]
    NotTabulated(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
