//! Fixed-precision p-adic integers.
//!
//! A [`PAdicInt`] is a residue modulo `p^N` standing for an element of ℤ_p
//! known to `N` digits. All arithmetic is exact modulo `p^N` and never
//! changes the precision; operands must agree on both `p` and `N`.
//!
//! Digits are least-significant first: `x = c_0 + c_1 p + … + c_{N-1} p^{N-1}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{big_pow, check_prime};
use crate::error::{Error, Result};

/// p-adic valuation of a fixed-precision value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u32),
    /// All stored digits vanish; the true valuation is at least this precision.
    AtLeastPrecision(u32),
}

impl Valuation {
    /// Lower bound usable in tail estimates (`N` for the indistinguishable-from-zero case).
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Finite(v) | Valuation::AtLeastPrecision(v) => v,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Valuation::Finite(_))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeastPrecision(_) => f.write_str("at_least_precision"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PAdicInt {
    p: u64,
    precision: u32,
    residue: BigUint,
}

impl PAdicInt {
    /// Residue of an arbitrary (possibly negative) integer modulo `p^N`.
    pub fn from_integer(m: &BigInt, p: u64, precision: u32) -> Result<Self> {
        check_prime(p)?;
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        let modulus = BigInt::from(big_pow(p, precision));
        let r = m.mod_floor(&modulus);
        Ok(PAdicInt {
            p,
            precision,
            residue: r.to_biguint().expect("mod_floor is nonnegative"),
        })
    }

    pub fn from_i64(m: i64, p: u64, precision: u32) -> Result<Self> {
        Self::from_integer(&BigInt::from(m), p, precision)
    }

    /// Builds from exactly `N` digits, each in `[0, p)`.
    pub fn from_digits(p: u64, precision: u32, digits: &[u64]) -> Result<Self> {
        check_prime(p)?;
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        if digits.len() != precision as usize {
            return Err(Error::parse(format!(
                "expected {precision} digits, got {}",
                digits.len()
            )));
        }
        let mut residue = BigUint::zero();
        for (i, &d) in digits.iter().enumerate().rev() {
            if d >= p {
                return Err(Error::parse(format!(
                    "digit {d} at position {i} is outside [0, {}]",
                    p - 1
                )));
            }
            residue = residue * p + d;
        }
        Ok(PAdicInt {
            p,
            precision,
            residue,
        })
    }

    pub fn zero(p: u64, precision: u32) -> Result<Self> {
        Self::from_i64(0, p, precision)
    }

    pub fn one(p: u64, precision: u32) -> Result<Self> {
        Self::from_i64(1, p, precision)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// The canonical representative in `[0, p^N)`.
    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn modulus(&self) -> BigUint {
        big_pow(self.p, self.precision)
    }

    pub fn digits(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.precision as usize);
        let mut rest = self.residue.clone();
        let p = BigUint::from(self.p);
        for _ in 0..self.precision {
            let (q, r) = rest.div_rem(&p);
            out.push(r.to_u64().expect("digit below p"));
            rest = q;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !(&self.residue % self.p).is_zero()
    }

    pub fn valuation(&self) -> Valuation {
        if self.residue.is_zero() {
            return Valuation::AtLeastPrecision(self.precision);
        }
        let p = BigUint::from(self.p);
        let mut rest = self.residue.clone();
        let mut v = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            v += 1;
        }
        Valuation::Finite(v)
    }

    /// Reduction to a lower precision `n` (`1 <= n <= N`).
    pub fn truncate(&self, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroPrecision);
        }
        let n = n.min(self.precision);
        Ok(PAdicInt {
            p: self.p,
            precision: n,
            residue: &self.residue % big_pow(self.p, n),
        })
    }

    fn check_compatible(&self, other: &PAdicInt) -> Result<()> {
        if self.p != other.p || self.precision != other.precision {
            return Err(Error::OperandMismatch {
                left_p: self.p,
                left_n: self.precision,
                right_p: other.p,
                right_n: other.precision,
            });
        }
        Ok(())
    }

    fn with_residue(&self, residue: BigUint) -> PAdicInt {
        PAdicInt {
            p: self.p,
            precision: self.precision,
            residue,
        }
    }

    pub fn add(&self, other: &PAdicInt) -> Result<PAdicInt> {
        self.check_compatible(other)?;
        Ok(self.with_residue((&self.residue + &other.residue) % self.modulus()))
    }

    pub fn neg(&self) -> PAdicInt {
        if self.residue.is_zero() {
            return self.clone();
        }
        self.with_residue(self.modulus() - &self.residue)
    }

    pub fn sub(&self, other: &PAdicInt) -> Result<PAdicInt> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PAdicInt) -> Result<PAdicInt> {
        self.check_compatible(other)?;
        Ok(self.with_residue((&self.residue * &other.residue) % self.modulus()))
    }

    /// Multiplication by an ordinary integer.
    pub fn scale(&self, k: &BigInt) -> PAdicInt {
        let m = BigInt::from(self.modulus());
        let r = (BigInt::from(self.residue.clone()) * k).mod_floor(&m);
        self.with_residue(r.to_biguint().expect("nonnegative"))
    }

    pub fn pow(&self, e: u64) -> PAdicInt {
        self.with_residue(self.residue.modpow(&BigUint::from(e), &self.modulus()))
    }

    /// The unique `z` with `x·z ≡ 1 (mod p^N)`.
    pub fn invert(&self) -> Result<PAdicInt> {
        if !self.is_unit() {
            return Err(Error::NotUnit {
                valuation: self.valuation(),
            });
        }
        let m = BigInt::from(self.modulus());
        let x = BigInt::from(self.residue.clone());
        let eg = x.extended_gcd(&m);
        debug_assert!(eg.gcd.is_one());
        let z = eg.x.mod_floor(&m);
        Ok(self.with_residue(z.to_biguint().expect("nonnegative")))
    }

    /// `a_n = x mod p^n` for `n = 1..=N`.
    pub fn canonical_sequence(&self) -> CanonicalSequence {
        let mut entries = Vec::with_capacity(self.precision as usize);
        let mut acc = BigUint::zero();
        let mut place = BigUint::one();
        for c in self.digits() {
            acc += &place * c;
            place *= self.p;
            entries.push(acc.clone());
        }
        CanonicalSequence {
            p: self.p,
            entries,
        }
    }

    /// `r mod p^N`
    pub fn residue_string(&self) -> String {
        format!("{} mod {}^{}", self.residue, self.p, self.precision)
    }

    pub fn as_bigint(&self) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self.residue.clone())
    }
}

impl fmt::Display for PAdicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits: Vec<String> = self.digits().iter().map(u64::to_string).collect();
        write!(
            f,
            "p={} N={} digits=[{}]",
            self.p,
            self.precision,
            digits.join(",")
        )
    }
}

/// Accepts `p=<prime> N=<precision> digits=[c0,c1,...]` or
/// `p=<prime> N=<precision> int=<m>`.
impl FromStr for PAdicInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = None;
        let mut n = None;
        let mut body = None;
        for field in s.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::parse(format!("expected key=value, got `{field}`")))?;
            match key {
                "p" => {
                    p = Some(
                        value
                            .parse::<u64>()
                            .map_err(|e| Error::parse(format!("p: {e}")))?,
                    )
                }
                "N" => {
                    n = Some(
                        value
                            .parse::<u32>()
                            .map_err(|e| Error::parse(format!("N: {e}")))?,
                    )
                }
                "digits" | "int" if body.is_none() => body = Some((key, value)),
                _ => return Err(Error::parse(format!("unexpected field `{field}`"))),
            }
        }
        let p = p.ok_or_else(|| Error::parse("missing p="))?;
        let n = n.ok_or_else(|| Error::parse("missing N="))?;
        match body {
            Some(("int", m)) => {
                let m = m
                    .parse::<BigInt>()
                    .map_err(|e| Error::parse(format!("int: {e}")))?;
                PAdicInt::from_integer(&m, p, n)
            }
            Some((_, list)) => PAdicInt::from_digits(p, n, &parse_digit_list(list)?),
            None => Err(Error::parse("missing digits= or int=")),
        }
    }
}

/// `[c0,c1,...]` (brackets optional). An empty list is allowed.
pub fn parse_digit_list(s: &str) -> Result<Vec<u64>> {
    let inner = s.trim();
    let inner = inner
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .unwrap_or(inner);
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| Error::parse(format!("digit `{}`: {e}", t.trim())))
        })
        .collect()
}

/// The integers `a_1..a_N` with `0 <= a_n < p^n` and `a_{n+1} ≡ a_n (mod p^n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalSequence {
    p: u64,
    entries: Vec<BigUint>,
}

impl CanonicalSequence {
    /// Validates both invariants.
    pub fn new(p: u64, entries: Vec<BigUint>) -> Result<Self> {
        check_prime(p)?;
        let seq = CanonicalSequence { p, entries };
        if let Some(msg) = seq.violation() {
            return Err(Error::parse(msg));
        }
        Ok(seq)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// `a_1..a_N` (index 0 holds `a_1`).
    pub fn entries(&self) -> &[BigUint] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `a_n` for 1-based `n`.
    pub fn get(&self, n: usize) -> Option<&BigUint> {
        n.checked_sub(1).and_then(|i| self.entries.get(i))
    }

    /// First broken invariant, if any.
    pub fn violation(&self) -> Option<String> {
        let mut pn = BigUint::one();
        for (i, a) in self.entries.iter().enumerate() {
            let n = i + 1;
            let prev_pn = pn.clone();
            pn *= self.p;
            if a >= &pn {
                return Some(format!("a_{n} = {a} is not below {}^{n}", self.p));
            }
            if i > 0 && (a % &prev_pn) != self.entries[i - 1] {
                return Some(format!("a_{n} ≢ a_{} (mod {}^{})", n - 1, self.p, n - 1));
            }
        }
        None
    }
}
