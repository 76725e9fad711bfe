use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always stored reduced with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numerator: BigInt, denominator: BigInt) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::parse("zero denominator"));
        }
        Ok(Rational(BigRational::new(numerator, denominator)))
    }

    /// Convenience for small literals; panics on a zero denominator.
    pub fn frac(numerator: i64, denominator: i64) -> Self {
        Self::new(numerator.into(), denominator.into()).expect("nonzero denominator")
    }

    pub fn from_integer(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Representative of `self mod 1` in `[0, 1)`.
    pub fn fract_mod1(&self) -> Self {
        Rational(&self.0 - self.0.floor())
    }

    pub fn checked_div(&self, other: &Rational) -> Option<Rational> {
        if other.is_zero() {
            None
        } else {
            Some(Rational(&self.0 / &other.0))
        }
    }

    pub fn recip(&self) -> Option<Rational> {
        Rational::one().checked_div(self)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n.into())
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($tr::$method(&self.0, &rhs.0))
            }
        }
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($tr::$method(self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

/// `a/b` (reduced on parse) or a bare integer `a`.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|e| Error::parse(format!("rational `{s}`: {e}")))
        };
        match s.split_once('/') {
            Some((a, b)) => Rational::new(parse_int(a)?, parse_int(b)?),
            None => Ok(Rational::from_integer(parse_int(s)?)),
        }
    }
}
