//! The pairing ℤ_p × ℤ(p^∞) → ℚ/ℤ ⊂ S¹, `(z, a/pⁿ) ↦ z·a/pⁿ mod 1`.
//!
//! A p-adic integer `z` acts as the character `γ ↦ z·γ` of ℤ(p^∞); every
//! element `γ` in turn gives the evaluation character `x_γ(y) = y(γ)` on
//! characters `y`. At level `n` the pairing descends to
//! `ℤ/pⁿ × (1/pⁿ)ℤ/ℤ → (1/pⁿ)ℤ/ℤ`, where perfectness is finitely checkable.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;

use crate::arith::{big_pow, check_prime};
use crate::error::{Error, Result};
use crate::gamma::PruferElement;
use crate::padic::PAdicInt;
use crate::rational::Rational;

/// A rational point of ℝ/ℤ, stored as its representative in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CircleElement {
    value: Rational,
}

impl CircleElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(r: &Rational) -> Self {
        CircleElement {
            value: r.fract_mod1(),
        }
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn add(&self, other: &CircleElement) -> CircleElement {
        Self::from_rational(&(&self.value + &other.value))
    }
}

impl fmt::Display for CircleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.value.fmt(f)
    }
}

fn check_pairable(z: &PAdicInt, gamma: &PruferElement) -> Result<()> {
    if z.prime() != gamma.prime() {
        return Err(Error::PrimeMismatch {
            left: z.prime(),
            right: gamma.prime(),
        });
    }
    if gamma.level() > z.precision() {
        return Err(Error::PairingPrecision {
            level: gamma.level(),
            precision: z.precision(),
        });
    }
    Ok(())
}

/// `z·a mod m` for a level-n pair with `m = pⁿ` in machine range.
fn pair_numerator(z: u64, a: u64, m: u64) -> u64 {
    ((z as u128 * a as u128) % m as u128) as u64
}

/// `((z mod p^level)·a / p^level) mod 1` for `gamma = a/p^level`.
pub fn pair(z: &PAdicInt, gamma: &PruferElement) -> Result<CircleElement> {
    check_pairable(z, gamma)?;
    let level = gamma.level();
    let modulus = big_pow(z.prime(), level);
    let z_mod = z.residue() % &modulus;
    let numerator = match (modulus.to_u64(), z_mod.to_u64(), gamma.numerator().to_u64()) {
        (Some(m), Some(zm), Some(a)) => BigUint::from(pair_numerator(zm, a, m)),
        _ => (z_mod * gamma.numerator()) % &modulus,
    };
    Ok(CircleElement::from_rational(
        &Rational::new(BigInt::from(numerator), BigInt::from(modulus)).expect("p^n > 0"),
    ))
}

/// The character of ℤ(p^∞) attached to a p-adic integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    z: PAdicInt,
}

impl Character {
    pub fn new(z: PAdicInt) -> Self {
        Character { z }
    }

    pub fn p_adic(&self) -> &PAdicInt {
        &self.z
    }

    /// `y(γ) = Σ_{i<n} c_i·a / p^{n−i} mod 1`, digit by digit.
    pub fn apply(&self, gamma: &PruferElement) -> Result<CircleElement> {
        check_pairable(&self.z, gamma)?;
        let n = gamma.level();
        let a = BigInt::from(gamma.numerator().clone());
        let mut acc = CircleElement::zero();
        for (i, c) in self.z.digits().into_iter().take(n as usize).enumerate() {
            if c == 0 {
                continue;
            }
            let term = Rational::new(
                BigInt::from(c) * &a,
                BigInt::from(big_pow(self.z.prime(), n - i as u32)),
            )
            .expect("positive");
            acc = acc.add(&CircleElement::from_rational(&term));
        }
        Ok(acc)
    }
}

/// The double-dual element `x_γ`: a character on characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    gamma: PruferElement,
}

impl Evaluation {
    pub fn new(gamma: PruferElement) -> Self {
        Evaluation { gamma }
    }

    /// `x_γ(y) = y(γ)`
    pub fn evaluate(&self, y: &Character) -> Result<CircleElement> {
        y.apply(&self.gamma)
    }
}

/// `x_γ(z)`; agrees with `pair(z, γ)` (checked in the test suites).
pub fn bidual_eval(gamma: &PruferElement, z: &PAdicInt) -> Result<CircleElement> {
    Evaluation::new(gamma.clone()).evaluate(&Character::new(z.clone()))
}

/// Largest group order `perfectness_check` will enumerate.
pub const ENUMERATION_GUARD: u64 = 1_000_000;
/// Largest order for which bilinearity is checked on all `m²` pairs.
pub const EXHAUSTIVE_BILINEAR_LIMIT: u64 = 10_000;
const SAMPLED_LINES: u64 = 257;
const MAX_COUNTEREXAMPLES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfectnessReport {
    pub p: u64,
    pub level: u32,
    pub order: u64,
    pub bilinear: bool,
    /// Bilinearity was checked on every pair rather than on sampled lines.
    pub bilinear_exhaustive: bool,
    /// Every nonzero `z mod pⁿ` pairs nontrivially with some `γ`.
    pub left_nondegenerate: bool,
    /// Every nonzero `γ` of level ≤ n pairs nontrivially with some `z`.
    pub right_nondegenerate: bool,
    pub counterexamples: Vec<String>,
}

impl PerfectnessReport {
    pub fn is_perfect(&self) -> bool {
        self.bilinear && self.left_nondegenerate && self.right_nondegenerate
    }
}

/// Exhaustive check that the level-n pairing is perfect and bilinear.
///
/// Both groups are cyclic of order `m = pⁿ`, so bilinearity is checked as
/// `pair(0,·) = pair(·,0) = 0` plus the step identities
/// `pair(z+1, γ) = pair(z, γ) + pair(1, γ)` and
/// `pair(z, γ + 1/m) = pair(z, γ) + pair(z, 1/m)` over all `(z, γ)`.
/// Above [`EXHAUSTIVE_BILINEAR_LIMIT`] the step identities are checked on
/// every full row and column through a fixed spread of sample points.
pub fn perfectness_check(p: u64, level: u32) -> Result<PerfectnessReport> {
    check_prime(p)?;
    let m = p
        .checked_pow(level)
        .filter(|&m| m <= ENUMERATION_GUARD)
        .ok_or(Error::EnumerationGuard { p, level })?;
    let mut counterexamples = Vec::new();
    let mut note = |msg: String| {
        if counterexamples.len() < MAX_COUNTEREXAMPLES {
            counterexamples.push(msg);
        }
    };

    let mut bilinear = true;
    for x in 0..m {
        if pair_numerator(0, x, m) != 0 || pair_numerator(x, 0, m) != 0 {
            bilinear = false;
            note(format!("zero does not pair trivially with {x}"));
        }
    }
    let bilinear_exhaustive = m <= EXHAUSTIVE_BILINEAR_LIMIT;
    let lines: Vec<u64> = if bilinear_exhaustive {
        (0..m).collect()
    } else {
        let stride = m / SAMPLED_LINES;
        (0..SAMPLED_LINES).map(|i| i * stride + i % stride.max(1)).chain([m - 1]).collect()
    };
    let mut step_holds = |z: u64, a: u64| {
        let here = pair_numerator(z, a, m);
        let next_z = pair_numerator((z + 1) % m, a, m);
        let next_a = pair_numerator(z, (a + 1) % m, m);
        let ok = next_z == (here + pair_numerator(1, a, m)) % m
            && next_a == (here + pair_numerator(z, 1, m)) % m;
        if !ok {
            note(format!("additivity fails at z={z}, gamma={a}/{p}^{level}"));
        }
        ok
    };
    for &fixed in &lines {
        for x in 0..m {
            if !step_holds(fixed, x) {
                bilinear = false;
            }
            if !bilinear_exhaustive && !step_holds(x, fixed) {
                bilinear = false;
            }
        }
    }

    let mut left_nondegenerate = true;
    for z in 1..m {
        if (0..m).all(|a| pair_numerator(z, a, m) == 0) {
            left_nondegenerate = false;
            note(format!("z={z} pairs trivially with every gamma"));
        }
    }
    let mut right_nondegenerate = true;
    for a in 1..m {
        if (0..m).all(|z| pair_numerator(z, a, m) == 0) {
            right_nondegenerate = false;
            note(format!("gamma={a}/{p}^{level} pairs trivially with every z"));
        }
    }

    Ok(PerfectnessReport {
        p,
        level,
        order: m,
        bilinear,
        bilinear_exhaustive,
        left_nondegenerate,
        right_nondegenerate,
        counterexamples,
    })
}

/// `pair(z, ·)` vanishes on every γ of level ≤ `level`.
pub fn annihilates_level(z: &PAdicInt, level: u32) -> Result<bool> {
    let p = z.prime();
    let top = PruferElement::new(p, &BigInt::from(1), level)?;
    // 1/p^level generates all elements of level ≤ n
    Ok(pair(z, &top)?.is_zero())
}

impl From<&CircleElement> for Rational {
    fn from(c: &CircleElement) -> Self {
        c.value.clone()
    }
}
