use thiserror::Error;

/// Errors raised by the library. Check failures inside verification suites are
/// reported in [`crate::verify::VerificationReport`] instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vector length {got} does not match generator count {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("group order {order} exceeds the enumeration cap {cap}")]
    CapExceeded { order: u128, cap: u128 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),

    #[error("group shapes differ")]
    ShapeMismatch,

    #[error("element is not a p-adic unit")]
    NonUnit,

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("argument outside the convergence domain of {0}")]
    OutsideDomain(&'static str),

    #[error("series certificate failed: {0}")]
    Certificate(String),

    #[error("result is not integral (residual scale {scale})")]
    NotIntegral { scale: u32 },

    #[error("precision insufficient: need {needed} digits, have {have}")]
    PrecisionInsufficient { needed: i64, have: i64 },

    #[error("subgroup is infinite")]
    InfiniteSubgroup,

    #[error("exact sequence bookkeeping failed: |H2| = {h2} does not divide |HC1| = {hc1}")]
    NonDivisible { hc1: String, h2: String },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
