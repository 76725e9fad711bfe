use thiserror::Error;

use crate::padic::Valuation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{p} is not prime: divisible by {factor}")]
    NotPrime { p: u64, factor: u64 },

    #[error("{0} is not prime: primes start at 2")]
    BelowTwo(u64),

    #[error("precision must be at least 1")]
    ZeroPrecision,

    #[error("operand mismatch: (p={left_p}, N={left_n}) vs (p={right_p}, N={right_n})")]
    OperandMismatch {
        left_p: u64,
        left_n: u32,
        right_p: u64,
        right_n: u32,
    },

    #[error("cannot invert a non-unit: valuation {valuation}")]
    NotUnit { valuation: Valuation },

    #[error("q = 0 at precision {precision}: the group generated by its canonical sequence is trivial")]
    ZeroParameter { precision: u32 },

    #[error("q is a unit (valuation 0): |q| < 1 is required")]
    UnitParameter,

    #[error("epsilon must be positive, got {0}")]
    NonPositiveEpsilon(String),

    #[error("hull generator {generator} exceeds epsilon {epsilon}: precision must be at least {needed}")]
    InsufficientPrecision {
        generator: String,
        epsilon: String,
        needed: u32,
    },

    #[error("denominator of {value} is not a power of {p}")]
    NotPrimePowerDenominator { value: String, p: u64 },

    #[error("prime mismatch: {left} vs {right}")]
    PrimeMismatch { left: u64, right: u64 },

    #[error("pairing at level {level} needs precision {level}, have {precision}")]
    PairingPrecision { level: u32, precision: u32 },

    #[error("enumeration guard exceeded: {p}^{level} > 1000000")]
    EnumerationGuard { p: u64, level: u32 },

    #[error("coefficient (5n^3+7n^5)/12 is not integral at n={0}")]
    NonIntegralCoefficient(u64),

    #[error("invalid size {0}: matrix sizes must be at least 1")]
    InvalidSize(u64),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
