//! The subgroup Γ_q ⊆ ℚ generated by `γ_n = a_n / p^n`, its finite
//! truncations, and its image in the Prüfer group ℤ(p^∞) ⊂ ℚ/ℤ.
//!
//! Γ_q itself is infinitely generated. Everything here works with the
//! truncation Γ_q^{(N)} = ⟨γ_1, …, γ_N⟩ at the precision `N` of `q`, which
//! is cyclic like every finitely generated subgroup of ℚ.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{big_pow, check_prime, split_power};
use crate::error::{Error, Result};
use crate::padic::{PAdicInt, Valuation};
use crate::rational::Rational;
use crate::supernatural::SupernaturalNumber;

/// The group `generator·ℤ ⊆ ℚ`; a zero generator is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicSubgroupQ {
    generator: Rational,
}

impl CyclicSubgroupQ {
    pub fn new(generator: Rational) -> Self {
        CyclicSubgroupQ {
            generator: generator.abs(),
        }
    }

    pub fn trivial() -> Self {
        CyclicSubgroupQ {
            generator: Rational::zero(),
        }
    }

    pub fn generator(&self) -> &Rational {
        &self.generator
    }

    pub fn is_trivial(&self) -> bool {
        self.generator.is_zero()
    }

    /// `r ∈ generator·ℤ`.
    pub fn contains(&self, r: &Rational) -> bool {
        match r.checked_div(&self.generator) {
            Some(k) => k.is_integer(),
            None => r.is_zero(),
        }
    }

    /// `true` when `other ⊆ self`.
    pub fn contains_group(&self, other: &CyclicSubgroupQ) -> bool {
        self.contains(&other.generator)
    }
}

/// `(γ_1, …, γ_N)` with `γ_n = a_n / p^n`.
pub fn gamma_generators(q: &PAdicInt) -> Vec<Rational> {
    let mut pn = BigInt::one();
    q.canonical_sequence()
        .entries()
        .iter()
        .map(|a| {
            pn *= q.prime();
            Rational::new(BigInt::from(a.clone()), pn.clone()).expect("p^n > 0")
        })
        .collect()
}

/// The hull of `gens` together with integer coefficients `c_i` such that
/// `Σ c_i·gens[i]` equals the hull generator.
pub fn cyclic_hull_with_coefficients(gens: &[Rational]) -> (CyclicSubgroupQ, Vec<BigInt>) {
    let common = gens
        .iter()
        .fold(BigInt::one(), |acc, g| acc.lcm(g.denom()));
    let mut g = BigInt::zero();
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(gens.len());
    for r in gens {
        let scaled = r.numer() * (&common / r.denom());
        let eg = g.extended_gcd(&scaled);
        let (mut d, mut x, mut y) = (eg.gcd, eg.x, eg.y);
        if d.is_negative() {
            d = -d;
            x = -x;
            y = -y;
        }
        for c in coeffs.iter_mut() {
            *c *= &x;
        }
        coeffs.push(y);
        g = d;
    }
    let generator = Rational::new(g, common).expect("lcm of denominators is positive");
    (CyclicSubgroupQ::new(generator), coeffs)
}

pub fn cyclic_hull(gens: &[Rational]) -> CyclicSubgroupQ {
    cyclic_hull_with_coefficients(gens).0
}

/// The truncation Γ_q^{(N)} at the precision of `q`.
pub fn gamma_group(q: &PAdicInt) -> CyclicSubgroupQ {
    cyclic_hull(&gamma_generators(q))
}

/// Prime-to-p part of `gcd{a_n : a_n ≠ 0}`; `None` when every `a_n` is zero.
pub fn content(q: &PAdicInt) -> Option<BigUint> {
    let g = q
        .canonical_sequence()
        .entries()
        .iter()
        .filter(|a| !a.is_zero())
        .fold(BigUint::zero(), |acc, a| acc.gcd(a));
    if g.is_zero() {
        None
    } else {
        Some(split_power(&g, q.prime()).1)
    }
}

fn hull_content(group: &CyclicSubgroupQ, p: u64) -> Option<BigUint> {
    if group.is_trivial() {
        return None;
    }
    let num = group.generator().numer().magnitude().clone();
    Some(split_power(&num, p).1)
}

fn require_nonzero(q: &PAdicInt) -> Result<u32> {
    match q.valuation() {
        Valuation::Finite(v) => Ok(v),
        Valuation::AtLeastPrecision(_) => Err(Error::ZeroParameter {
            precision: q.precision(),
        }),
    }
}

fn require_tate_regime(q: &PAdicInt) -> Result<u32> {
    match require_nonzero(q)? {
        0 => Err(Error::UnitParameter),
        v => Ok(v),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainsOneReport {
    pub contains_one: bool,
    pub content: BigUint,
    pub generator: Rational,
}

/// Whether `1 ∈ Γ_q^{(N)}`. This fails exactly when the numerators share a
/// factor prime to `p` (e.g. q = 6 at p = 3, where every `a_n` is even).
pub fn contains_one_report(q: &PAdicInt) -> Result<ContainsOneReport> {
    require_nonzero(q)?;
    let group = gamma_group(q);
    let content = content(q).expect("q is nonzero");
    Ok(ContainsOneReport {
        contains_one: group.contains(&Rational::one()),
        content,
        generator: group.generator().clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityWitness {
    pub witness: Rational,
    pub distance: Rational,
    pub generator: Rational,
}

/// Nearest element of Γ_q^{(N)} to `target`; ties go to the smaller element.
pub fn density_witness(
    q: &PAdicInt,
    target: &Rational,
    epsilon: &Rational,
) -> Result<DensityWitness> {
    if !epsilon.is_positive() {
        return Err(Error::NonPositiveEpsilon(epsilon.to_string()));
    }
    let v = require_nonzero(q)?;
    let group = gamma_group(q);
    let g = group.generator().clone();
    if &g > epsilon {
        return Err(Error::InsufficientPrecision {
            generator: g.to_string(),
            epsilon: epsilon.to_string(),
            needed: precision_for_epsilon(q, v, epsilon),
        });
    }
    let t = target.checked_div(&g).expect("nonzero generator");
    let mut k = t.floor();
    let frac = &t - &Rational::from_integer(k.clone());
    if frac > Rational::frac(1, 2) {
        k += 1;
    }
    let witness = &Rational::from_integer(k) * &g;
    let distance = (&witness - target).abs();
    Ok(DensityWitness {
        witness,
        distance,
        generator: g,
    })
}

// Past the valuation the hull generator is content·p^{v-N}; the content can
// only shrink with more digits, so this is an upper bound on what is needed.
fn precision_for_epsilon(q: &PAdicInt, v: u32, epsilon: &Rational) -> u32 {
    let c = BigInt::from(content(q).unwrap_or_else(BigUint::one));
    let mut n = q.precision().max(v + 1);
    loop {
        let g = Rational::new(&c * BigInt::from(big_pow(q.prime(), v)), BigInt::from(big_pow(q.prime(), n)))
            .expect("positive");
        if &g <= epsilon {
            return n;
        }
        n += 1;
    }
}

/// An element `a/p^level (mod 1)` of ℤ(p^∞), fully reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PruferElement {
    p: u64,
    level: u32,
    numerator: BigUint,
}

impl PruferElement {
    pub fn identity(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(PruferElement {
            p,
            level: 0,
            numerator: BigUint::zero(),
        })
    }

    /// `a / p^level mod 1`, reduced.
    pub fn new(p: u64, numerator: &BigInt, level: u32) -> Result<Self> {
        check_prime(p)?;
        let modulus = BigInt::from(big_pow(p, level));
        let a = numerator.mod_floor(&modulus).to_biguint().expect("nonnegative");
        Ok(Self::reduce(p, a, level))
    }

    fn reduce(p: u64, mut a: BigUint, mut level: u32) -> Self {
        if a.is_zero() {
            level = 0;
        } else {
            let (k, rest) = split_power(&a, p);
            a = rest;
            level -= k;
        }
        PruferElement {
            p,
            level,
            numerator: a,
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn is_identity(&self) -> bool {
        self.level == 0
    }

    /// The element has order `p^level`.
    pub fn order(&self) -> BigUint {
        big_pow(self.p, self.level)
    }

    /// Representative in `[0, 1)`.
    pub fn to_rational(&self) -> Rational {
        Rational::new(
            BigInt::from(self.numerator.clone()),
            BigInt::from(big_pow(self.p, self.level)),
        )
        .expect("positive denominator")
    }

    pub fn add(&self, other: &PruferElement) -> Result<PruferElement> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch {
                left: self.p,
                right: other.p,
            });
        }
        prufer_image(&(&self.to_rational() + &other.to_rational()), self.p)
    }

    pub fn scale(&self, k: &BigInt) -> PruferElement {
        let a = BigInt::from(self.numerator.clone()) * k;
        PruferElement::new(self.p, &a, self.level).expect("prime already checked")
    }
}

impl fmt::Display for PruferElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}^{}", self.numerator, self.p, self.level)
    }
}

/// `a/p^n`, e.g. `3/2^3`. The numerator may be any integer; it is reduced mod 1.
impl FromStr for PruferElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse(format!("expected a/p^n, got `{s}`"));
        let (a, rest) = s.trim().split_once('/').ok_or_else(bad)?;
        let (p, n) = rest.split_once('^').ok_or_else(bad)?;
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let n: u32 = n.trim().parse().map_err(|_| bad())?;
        PruferElement::new(p, &a, n)
    }
}

/// Reduction of `gamma` mod 1 into ℤ(p^∞); its denominator must be a power of `p`.
pub fn prufer_image(gamma: &Rational, p: u64) -> Result<PruferElement> {
    check_prime(p)?;
    let (level, rest) = split_power(gamma.denom().magnitude(), p);
    if !rest.is_one() {
        return Err(Error::NotPrimePowerDenominator {
            value: gamma.to_string(),
            p,
        });
    }
    PruferElement::new(p, gamma.numer(), level)
}

/// One relation `p·γ_{n+1} ≡ γ_n (mod 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruferStep {
    /// The `n` of the relation (1-based).
    pub n: u32,
    pub holds: bool,
    /// `p·γ_{n+1} − γ_n`, an integer when the relation holds.
    pub discrepancy: Rational,
    /// The digit `b_{n+1}` (= `c_n` in least-significant-first indexing).
    pub digit: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruferReport {
    pub p: u64,
    pub valuation: u32,
    /// `p·γ_1 ≡ 0 (mod 1)`.
    pub base_holds: bool,
    pub steps: Vec<PruferStep>,
    /// Reduced images of `γ_1..γ_N`.
    pub images: Vec<PruferElement>,
    /// The image of `γ_n` has level exactly `n − v` for every `v < n ≤ N`.
    pub unbounded_order: bool,
}

impl PruferReport {
    pub fn all_hold(&self) -> bool {
        self.base_holds && self.steps.iter().all(|s| s.holds)
    }

    /// Every discrepancy equals the corresponding digit.
    pub fn discrepancies_match_digits(&self) -> bool {
        self.steps
            .iter()
            .all(|s| s.discrepancy == Rational::from(s.digit as i64))
    }
}

/// Checks the defining relations of ℤ(p^∞) on the images of the γ_n.
pub fn prufer_relations_check(q: &PAdicInt) -> Result<PruferReport> {
    let v = require_tate_regime(q)?;
    let p = q.prime();
    let gens = gamma_generators(q);
    let digits = q.digits();
    let images = gens
        .iter()
        .map(|g| prufer_image(g, p))
        .collect::<Result<Vec<_>>>()?;
    let pb = BigInt::from(p);
    let base_holds = images[0].scale(&pb).is_identity();
    let steps = (1..gens.len())
        .map(|i| {
            let lhs = images[i].scale(&pb);
            PruferStep {
                n: i as u32,
                holds: lhs == images[i - 1],
                discrepancy: &(&Rational::from_integer(pb.clone()) * &gens[i]) - &gens[i - 1],
                digit: digits[i],
            }
        })
        .collect();
    let n = q.precision();
    let unbounded_order = n > v
        && images
            .iter()
            .enumerate()
            .skip(v as usize)
            .all(|(i, img)| img.level() == i as u32 + 1 - v);
    Ok(PruferReport {
        p,
        valuation: v,
        base_holds,
        steps,
        images,
        unbounded_order,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupernaturalLimit {
    pub sn: SupernaturalNumber,
    pub scale: BigUint,
    pub stabilized: bool,
    /// p-exponent of the hull generator's denominator at levels `N−2..=N`.
    pub denominator_exponents: Vec<u32>,
}

/// Empirical limit of the truncations: Γ_q = scale·ℤ[1/p] ≅ ℚ(p^∞).
pub fn supernatural_limit(q: &PAdicInt) -> Result<SupernaturalLimit> {
    require_tate_regime(q)?;
    let p = q.prime();
    let n = q.precision();
    let levels: Vec<u32> = (n.saturating_sub(2).max(1)..=n).collect();
    let mut contents = Vec::with_capacity(levels.len());
    let mut denominator_exponents = Vec::with_capacity(levels.len());
    for &level in &levels {
        let group = gamma_group(&q.truncate(level)?);
        contents.push(hull_content(&group, p));
        denominator_exponents.push(split_power(group.generator().denom().magnitude(), p).0);
    }
    let scale = contents
        .last()
        .cloned()
        .flatten()
        .expect("q is nonzero at full precision");
    let stabilized = levels.len() == 3 && contents.iter().all(|c| c.as_ref() == Some(&scale));
    Ok(SupernaturalLimit {
        sn: SupernaturalNumber::infinite_power(p)?,
        scale,
        stabilized,
        denominator_exponents,
    })
}
