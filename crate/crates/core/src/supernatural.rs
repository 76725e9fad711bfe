//! Supernatural numbers, the groups ℚ(n), and the K₀ data of UHF algebras.
//!
//! A UHF algebra `M_k` is the inductive limit of `M_{k_1} → M_{k_1 k_2} → …`.
//! Only its dimension data is modelled here: the size sequence `k`, the
//! supernatural number `n = ∏ p^{n_p}` with `n_p = sup{j : p^j | ∏ k_i}`, and
//! `K₀(M_k) ≅ ℚ(n)`, the rationals whose denominators divide `n`.
//!
//! Two UHF algebras are stably isomorphic iff `r·ℚ(n) = s·ℚ(n′)` for some
//! positive integers `r, s`. In general that holds iff `n_p = n′_p` for all
//! but finitely many primes and `Σ |n_p − n′_p| < ∞` over the primes where
//! both are finite. Every supernatural number here has finite support, so
//! the test reduces to comparing the sets of primes with infinite exponent.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::arith::{big_pow, check_prime, factorize, split_power};
use crate::error::{Error, Result};
use crate::gamma::supernatural_limit;
use crate::padic::PAdicInt;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exponent {
    Finite(u32),
    Infinite,
}

impl Exponent {
    pub fn is_infinite(self) -> bool {
        self == Exponent::Infinite
    }

    fn plus(self, other: Exponent) -> Exponent {
        match (self, other) {
            (Exponent::Finite(a), Exponent::Finite(b)) => Exponent::Finite(a + b),
            _ => Exponent::Infinite,
        }
    }

    /// Whether `ℓ^k` divides `ℓ^self`.
    fn admits(self, k: u32) -> bool {
        match self {
            Exponent::Finite(e) => k <= e,
            Exponent::Infinite => true,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(e) => write!(f, "{e}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

/// `∏ p^{n_p}` with `n_p ∈ ℕ ∪ {∞}` and finitely many nonzero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SupernaturalNumber {
    exponents: BTreeMap<u64, Exponent>,
}

impl SupernaturalNumber {
    pub fn one() -> Self {
        Self::default()
    }

    /// Product of the given prime powers; repeated primes accumulate.
    pub fn from_exponents<I>(factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, Exponent)>,
    {
        let mut n = Self::one();
        for (p, e) in factors {
            check_prime(p)?;
            n.multiply_prime(p, e);
        }
        Ok(n)
    }

    /// `p^∞`
    pub fn infinite_power(p: u64) -> Result<Self> {
        Self::from_exponents([(p, Exponent::Infinite)])
    }

    fn multiply_prime(&mut self, p: u64, e: Exponent) {
        if e == Exponent::Finite(0) {
            return;
        }
        let slot = self.exponents.entry(p).or_insert(Exponent::Finite(0));
        *slot = slot.plus(e);
    }

    pub fn exponent(&self, p: u64) -> Exponent {
        self.exponents
            .get(&p)
            .copied()
            .unwrap_or(Exponent::Finite(0))
    }

    /// Primes with nonzero exponent, ascending.
    pub fn support(&self) -> impl Iterator<Item = (u64, Exponent)> + '_ {
        self.exponents.iter().map(|(&p, &e)| (p, e))
    }

    pub fn infinite_primes(&self) -> BTreeSet<u64> {
        self.support()
            .filter(|(_, e)| e.is_infinite())
            .map(|(p, _)| p)
            .collect()
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Prime-wise sum of exponents.
    pub fn mul(&self, other: &SupernaturalNumber) -> SupernaturalNumber {
        let mut out = self.clone();
        for (p, e) in other.support() {
            out.multiply_prime(p, e);
        }
        out
    }

    pub fn divides(&self, other: &SupernaturalNumber) -> bool {
        self.support().all(|(p, e)| e <= other.exponent(p))
    }

    /// Membership in ℚ(n): every prime power in the denominator divides `n`.
    pub fn qn_contains(&self, r: &Rational) -> bool {
        let mut den: BigUint = r.denom().magnitude().clone();
        for (p, e) in self.support() {
            let (k, rest) = split_power(&den, p);
            if !e.admits(k) {
                return false;
            }
            den = rest;
        }
        den.is_one()
    }

    /// A deterministic sample of elements of ℚ(n), at most `limit` of them.
    pub fn sample_elements(&self, limit: usize) -> Vec<Rational> {
        const NUMERATORS: [i64; 3] = [1, -5, 7];
        const CAP: u32 = 6;
        let tops: Vec<(u64, u32)> = self
            .support()
            .map(|(p, e)| match e {
                Exponent::Finite(k) => (p, k.min(CAP)),
                Exponent::Infinite => (p, CAP),
            })
            .collect();
        // single prime powers and the full product first, then mixed products
        let mut denominators = vec![BigUint::one()];
        for &(p, top) in &tops {
            denominators.extend((1..=top).map(|k| big_pow(p, k)));
        }
        denominators.push(tops.iter().map(|&(p, k)| big_pow(p, k)).product());
        let mut mixed = vec![BigUint::one()];
        for &(p, top) in &tops {
            mixed = mixed
                .iter()
                .flat_map(|d| (0..=top).map(move |k| d * big_pow(p, k)))
                .take(limit.max(1))
                .collect();
        }
        for d in mixed {
            if !denominators.contains(&d) {
                denominators.push(d);
            }
        }
        denominators.dedup();
        let mut out = Vec::new();
        'outer: for d in &denominators {
            for a in NUMERATORS {
                if out.len() >= limit {
                    break 'outer;
                }
                out.push(Rational::new(a.into(), BigInt::from(d.clone())).expect("positive"));
            }
        }
        out
    }
}

impl fmt::Display for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .support()
            .map(|(p, e)| match e {
                Exponent::Finite(1) => p.to_string(),
                e => format!("{p}^{e}"),
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// `1` or a factor list such as `2^inf*3^2*5`.
impl FromStr for SupernaturalNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Self::one());
        }
        let mut factors = Vec::new();
        for part in s.split('*') {
            let part = part.trim();
            let bad = || Error::parse(format!("supernatural factor `{part}`"));
            let (p, e) = match part.split_once('^') {
                Some((p, "inf")) => (p, Exponent::Infinite),
                Some((p, k)) => (p, Exponent::Finite(k.parse().map_err(|_| bad())?)),
                None => (part, Exponent::Finite(1)),
            };
            let p: u64 = p.parse().map_err(|_| bad())?;
            factors.push((p, e));
        }
        Self::from_exponents(factors)
    }
}

/// Size sequence `k_1, k_2, …` of a UHF algebra: a finite prefix followed by
/// a block repeated forever (empty tail means the sequence stops).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UHFDescriptor {
    prefix: Vec<u64>,
    tail: Vec<u64>,
}

impl UHFDescriptor {
    pub fn new(prefix: Vec<u64>, tail: Vec<u64>) -> Result<Self> {
        if let Some(&k) = prefix.iter().chain(&tail).find(|&&k| k == 0) {
            return Err(Error::InvalidSize(k));
        }
        Ok(UHFDescriptor { prefix, tail })
    }

    /// `(p, p, p, …)`
    pub fn repeating(p: u64) -> Result<Self> {
        Self::new(Vec::new(), vec![p])
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn tail(&self) -> &[u64] {
        &self.tail
    }

    pub fn is_infinite(&self) -> bool {
        !self.tail.is_empty()
    }

    /// `k_1..k_m` of the unrolled sequence (shorter if the sequence is finite).
    pub fn stage_sizes(&self, m: usize) -> Vec<u64> {
        self.prefix
            .iter()
            .chain(self.tail.iter().cycle())
            .take(m)
            .copied()
            .collect()
    }
}

impl fmt::Display for UHFDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        write!(f, "sizes={}", join(&self.prefix))?;
        if !self.tail.is_empty() {
            write!(f, ";tail={}", join(&self.tail))?;
        }
        Ok(())
    }
}

/// `sizes=2,4,8`, `sizes=;tail=2` or `tail=(2)`.
impl FromStr for UHFDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut prefix = Vec::new();
        let mut tail = Vec::new();
        for field in s.split(';').map(str::trim).filter(|f| !f.is_empty()) {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::parse(format!("expected key=value, got `{field}`")))?;
            let list = parse_size_list(value)?;
            match key.trim() {
                "sizes" => prefix = list,
                "tail" => tail = list,
                other => return Err(Error::parse(format!("unknown descriptor field `{other}`"))),
            }
        }
        UHFDescriptor::new(prefix, tail)
    }
}

pub fn parse_size_list(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    let s = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .unwrap_or(s);
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|e| Error::parse(format!("size `{t}`: {e}")))
        })
        .collect()
}

pub fn supernatural_from_sizes(m: &UHFDescriptor) -> SupernaturalNumber {
    let mut n = SupernaturalNumber::one();
    for &k in m.prefix() {
        for (p, e) in factorize(k) {
            n.multiply_prime(p, Exponent::Finite(e));
        }
    }
    for &k in m.tail() {
        for (p, _) in factorize(k) {
            n.multiply_prime(p, Exponent::Infinite);
        }
    }
    n
}

/// The `n` with `K₀(M_k) ≅ ℚ(n)`.
pub fn k0_of(m: &UHFDescriptor) -> SupernaturalNumber {
    supernatural_from_sizes(m)
}

pub fn qn_contains(n: &SupernaturalNumber, r: &Rational) -> bool {
    n.qn_contains(r)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub r: BigUint,
    pub s: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StableIsoReport {
    pub equal: bool,
    pub witness: Option<Witness>,
    /// The witness passed the sampled membership check in both directions.
    pub verified: bool,
}

/// Sample size used to re-check a witness.
pub const WITNESS_SAMPLES: usize = 50;

pub fn stably_isomorphic(n: &SupernaturalNumber, n2: &SupernaturalNumber) -> StableIsoReport {
    if n.infinite_primes() != n2.infinite_primes() {
        return StableIsoReport {
            equal: false,
            witness: None,
            verified: false,
        };
    }
    let mut r = BigUint::one();
    let mut s = BigUint::one();
    let primes: BTreeSet<u64> = n.support().chain(n2.support()).map(|(p, _)| p).collect();
    for p in primes {
        if let (Exponent::Finite(a), Exponent::Finite(b)) = (n.exponent(p), n2.exponent(p)) {
            if a > b {
                r *= big_pow(p, a - b);
            } else {
                s *= big_pow(p, b - a);
            }
        }
    }
    let witness = Witness { r, s };
    let verified = verify_witness(n, n2, &witness, WITNESS_SAMPLES);
    StableIsoReport {
        equal: true,
        witness: Some(witness),
        verified,
    }
}

/// Sampled check of `r·ℚ(n) = s·ℚ(n′)`: `x ∈ ℚ(n) ⇒ (r/s)·x ∈ ℚ(n′)` and
/// `x′ ∈ ℚ(n′) ⇒ (s/r)·x′ ∈ ℚ(n)`, on `samples` elements each way.
pub fn verify_witness(
    n: &SupernaturalNumber,
    n2: &SupernaturalNumber,
    witness: &Witness,
    samples: usize,
) -> bool {
    if witness.r.is_zero() || witness.s.is_zero() {
        return false;
    }
    let r = BigInt::from(witness.r.clone());
    let s = BigInt::from(witness.s.clone());
    let forward = Rational::new(r.clone(), s.clone()).expect("s > 0");
    let backward = Rational::new(s, r).expect("r > 0");
    n.sample_elements(samples)
        .iter()
        .all(|x| n2.qn_contains(&(&forward * x)))
        && n2
            .sample_elements(samples)
            .iter()
            .all(|x| n.qn_contains(&(&backward * x)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UhfFromTate {
    pub descriptor: UHFDescriptor,
    pub k0: SupernaturalNumber,
    pub scale: BigUint,
    pub stabilized: bool,
    pub label: Option<&'static str>,
}

/// The UHF algebra `M_q` with `K₀(M_q) ≅ Γ_q`: always `M_{p^∞}`, up to the
/// scale factor which stable isomorphism ignores.
pub fn uhf_from_tate(q: &PAdicInt) -> Result<UhfFromTate> {
    let limit = supernatural_limit(q)?;
    let p = q.prime();
    Ok(UhfFromTate {
        descriptor: UHFDescriptor::repeating(p)?,
        k0: limit.sn,
        scale: limit.scale,
        stabilized: limit.stabilized,
        label: (p == 2).then_some("CAR"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sn(s: &str) -> SupernaturalNumber {
        s.parse().unwrap()
    }

    fn desc(prefix: &[u64], tail: &[u64]) -> UHFDescriptor {
        UHFDescriptor::new(prefix.to_vec(), tail.to_vec()).unwrap()
    }

    #[test]
    fn from_sizes_examples() {
        assert_eq!(supernatural_from_sizes(&desc(&[2, 4, 8], &[])), sn("2^6"));
        for p in [2, 3, 5, 7] {
            assert_eq!(
                supernatural_from_sizes(&desc(&[], &[p])),
                SupernaturalNumber::infinite_power(p).unwrap()
            );
        }
        assert!(supernatural_from_sizes(&desc(&[1, 1, 1], &[])).is_one());
        assert_eq!(supernatural_from_sizes(&desc(&[3], &[6, 1])), sn("2^inf*3^inf"));
    }

    #[test]
    fn k0_examples() {
        assert_eq!(k0_of(&desc(&[], &[2])).to_string(), "2^inf");
        assert_eq!(k0_of(&desc(&[6, 10], &[])).to_string(), "2^2*3*5");
        assert_eq!(k0_of(&desc(&[1], &[])).to_string(), "1");
    }

    #[test]
    fn qn_membership() {
        assert!(qn_contains(&sn("2^inf"), &Rational::frac(5, 1024)));
        assert!(!qn_contains(&sn("2^3"), &Rational::frac(1, 16)));
        assert!(qn_contains(&sn("2^inf*3"), &Rational::frac(7, 6)));
        assert!(!qn_contains(&sn("2^inf*3"), &Rational::frac(1, 9)));
        assert!(!qn_contains(&sn("2^inf"), &Rational::frac(1, 5)));
        assert!(qn_contains(&sn("1"), &Rational::from(-4)));
    }

    #[test]
    fn stable_iso_examples() {
        let n = sn("2^inf*3^2*5");
        let rep = stably_isomorphic(&n, &n);
        assert!(rep.equal && rep.verified);
        assert_eq!(
            rep.witness,
            Some(Witness {
                r: BigUint::one(),
                s: BigUint::one()
            })
        );

        let rep = stably_isomorphic(&sn("2^inf"), &sn("2^inf*3^2"));
        assert!(rep.equal && rep.verified);
        let w = rep.witness.unwrap();
        assert_eq!((w.r, w.s), (BigUint::one(), BigUint::from(9u32)));

        let rep = stably_isomorphic(&sn("2^inf"), &sn("3^inf"));
        assert!(!rep.equal);
        assert!(rep.witness.is_none());
    }

    #[test]
    fn reversed_witness_fails() {
        // (s/r)·x maps ℚ(n) into ℚ(n′) but not back: 1/9 ∈ ℚ(n′), 1/81 ∉ ℤ[1/2].
        let bad = Witness {
            r: BigUint::from(9u32),
            s: BigUint::one(),
        };
        assert!(!verify_witness(&sn("2^inf"), &sn("2^inf*3^2"), &bad, 50));
    }

    #[test]
    fn text_formats() {
        for s in ["1", "2^inf*3^2*5", "7", "2^inf*3^inf"] {
            assert_eq!(sn(s).to_string(), s);
        }
        assert_eq!(sn("3*2*2").to_string(), "2^2*3");
        assert_eq!(sn("2^0").to_string(), "1");
        assert!("4^2".parse::<SupernaturalNumber>().is_err());
        assert!("2^x".parse::<SupernaturalNumber>().is_err());

        let d: UHFDescriptor = "sizes=;tail=2".parse().unwrap();
        assert_eq!(d, desc(&[], &[2]));
        assert_eq!(d.to_string(), "sizes=;tail=2");
        let d: UHFDescriptor = "sizes=2,4,8".parse().unwrap();
        assert_eq!(d.to_string(), "sizes=2,4,8");
        let d: UHFDescriptor = "tail=(5)".parse().unwrap();
        assert_eq!(d, desc(&[], &[5]));
        assert_eq!("sizes=0".parse::<UHFDescriptor>(), Err(Error::InvalidSize(0)));
    }

    #[test]
    fn stages() {
        let d = desc(&[6], &[2, 3]);
        assert_eq!(d.stage_sizes(5), vec![6, 2, 3, 2, 3]);
        assert_eq!(desc(&[4], &[]).stage_sizes(3), vec![4]);
    }

    #[test]
    fn from_tate_examples() {
        let q = PAdicInt::from_i64(2, 2, 6).unwrap();
        let u = uhf_from_tate(&q).unwrap();
        assert_eq!(u.descriptor, desc(&[], &[2]));
        assert_eq!(u.k0.to_string(), "2^inf");
        assert_eq!(u.label, Some("CAR"));

        let u = uhf_from_tate(&PAdicInt::from_i64(5, 5, 6).unwrap()).unwrap();
        assert_eq!(u.descriptor, desc(&[], &[5]));
        assert_eq!(u.k0.to_string(), "5^inf");
        assert_eq!(u.label, None);

        let u = uhf_from_tate(&PAdicInt::from_i64(6, 3, 6).unwrap()).unwrap();
        assert_eq!(u.descriptor, desc(&[], &[3]));
        assert_eq!(u.k0.to_string(), "3^inf");
        assert_eq!(u.scale, BigUint::from(2u32));

        assert!(uhf_from_tate(&PAdicInt::from_i64(0, 3, 6).unwrap()).is_err());
        assert_eq!(
            uhf_from_tate(&PAdicInt::from_i64(2, 3, 6).unwrap()),
            Err(Error::UnitParameter)
        );
    }
}
