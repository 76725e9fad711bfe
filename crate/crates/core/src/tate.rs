//! Coefficients of the Tate curve `E_q: y² + xy = x³ + a₄(q)x + a₆(q)`:
//!
//! ```text
//! a₄(q) = −5 Σ n³ qⁿ / (1 − qⁿ)
//! a₆(q) = −Σ c_n qⁿ / (1 − qⁿ),   c_n = (5n³ + 7n⁵)/12 ∈ ℤ
//! ```
//!
//! For `v = valuation(q) ≥ 1` the n-th term has valuation at least `n·v`
//! (`1 − qⁿ` is a unit), so the sums are exact mod `p^N` after
//! `truncation_index(q)` terms.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::padic::{PAdicInt, Valuation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TateCoefficients {
    pub a4: PAdicInt,
    pub a6: PAdicInt,
    pub terms_used: u32,
    /// Exact valuation of `q`, or `N` when `q ≡ 0 (mod p^N)`.
    pub q_valuation: u32,
}

fn tate_valuation(q: &PAdicInt) -> Result<u32> {
    match q.valuation() {
        Valuation::Finite(0) => Err(Error::UnitParameter),
        v => Ok(v.lower_bound()),
    }
}

/// Least `n_max` with `(n_max + 1)·v ≥ N`.
///
/// A residue of zero is read as `v ≥ N`, which gives the empty sum; the
/// literal parameter `q = 0` is rejected by the callers that ingest it.
pub fn truncation_index(q: &PAdicInt) -> Result<u32> {
    let v = tate_valuation(q)?;
    Ok(q.precision().div_ceil(v) - 1)
}

/// `(5n³ + 7n⁵) / 12`, checked to be integral.
pub fn a6_coefficient(n: u64) -> Result<BigUint> {
    let n = BigUint::from(n);
    let n3 = &n * &n * &n;
    let num = BigUint::from(5u32) * &n3 + BigUint::from(7u32) * &n3 * &n * &n;
    let (c, rem) = num.div_rem(&BigUint::from(12u32));
    if !rem.is_zero() {
        return Err(Error::NonIntegralCoefficient(
            n.try_into().unwrap_or(u64::MAX),
        ));
    }
    Ok(c)
}

/// `Σ_{n=1}^{terms} coeff(n)·qⁿ·(1 − qⁿ)^{-1}` mod `p^N`.
fn lambert_sum<F>(q: &PAdicInt, terms: u32, coeff: F) -> Result<PAdicInt>
where
    F: Fn(u64) -> Result<BigInt>,
{
    let one = PAdicInt::one(q.prime(), q.precision())?;
    let mut acc = PAdicInt::zero(q.prime(), q.precision())?;
    let mut qn = one.clone();
    for n in 1..=u64::from(terms) {
        qn = qn.mul(q)?;
        let denom = one.sub(&qn)?.invert()?;
        let term = qn.mul(&denom)?.scale(&coeff(n)?);
        acc = acc.add(&term)?;
    }
    Ok(acc)
}

/// `a₄` summed over exactly `terms` terms (for tail-stability checks).
pub fn a4_with_terms(q: &PAdicInt, terms: u32) -> Result<PAdicInt> {
    tate_valuation(q)?;
    let sum = lambert_sum(q, terms, |n| Ok(BigInt::from(n).pow(3)))?;
    Ok(sum.scale(&BigInt::from(-5)))
}

/// `a₆` summed over exactly `terms` terms.
pub fn a6_with_terms(q: &PAdicInt, terms: u32) -> Result<PAdicInt> {
    tate_valuation(q)?;
    let sum = lambert_sum(q, terms, |n| a6_coefficient(n).map(BigInt::from))?;
    Ok(sum.neg())
}

pub fn a4(q: &PAdicInt) -> Result<PAdicInt> {
    a4_with_terms(q, truncation_index(q)?)
}

pub fn a6(q: &PAdicInt) -> Result<PAdicInt> {
    a6_with_terms(q, truncation_index(q)?)
}

pub fn tate_coefficients(q: &PAdicInt) -> Result<TateCoefficients> {
    let terms_used = truncation_index(q)?;
    Ok(TateCoefficients {
        a4: a4_with_terms(q, terms_used)?,
        a6: a6_with_terms(q, terms_used)?,
        terms_used,
        q_valuation: tate_valuation(q)?,
    })
}
