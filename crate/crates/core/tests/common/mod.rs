//! Independent oracles shared by the integration suites. Nothing here calls
//! into the code paths it is used to check.
#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn pow_u(p: u64, e: u32) -> BigUint {
    BigUint::from(p).pow(e)
}

/// Base-p digits of `m mod p^n` by repeated division (least significant first).
pub fn digits_oracle(m: &BigInt, p: u64, n: u32) -> Vec<u64> {
    let modulus = BigInt::from(pow_u(p, n));
    let mut r = m.mod_floor(&modulus);
    let pb = BigInt::from(p);
    (0..n)
        .map(|_| {
            let (q, d) = r.div_mod_floor(&pb);
            r = q;
            u64::try_from(d).unwrap()
        })
        .collect()
}

/// `a_k = m mod p^k` by direct reduction, `k = 1..=n`.
pub fn canonical_oracle(m: &BigInt, p: u64, n: u32) -> Vec<BigUint> {
    (1..=n)
        .map(|k| {
            m.mod_floor(&BigInt::from(pow_u(p, k)))
                .to_biguint()
                .unwrap()
        })
        .collect()
}

/// `x mod p^n` for a rational whose denominator is prime to p, using Euler's
/// theorem for the inverse.
pub fn rational_mod_prime_power(x: &BigRational, p: u64, n: u32) -> BigUint {
    let m = BigInt::from(pow_u(p, n));
    let den = x.denom().mod_floor(&m);
    assert!(!(x.denom() % BigInt::from(p)).is_zero(), "denominator divisible by p");
    let phi = BigInt::from(pow_u(p, n - 1) * (p - 1));
    let inv = den.modpow(&(phi - 1), &m);
    (x.numer() * inv).mod_floor(&m).to_biguint().unwrap()
}

/// Exact rational partial sums of the `a4`, `a6` q-series over `n = 1..=terms`.
pub fn tate_rational_partial_sums(q: &BigInt, terms: u32) -> (BigRational, BigRational) {
    let mut s4 = BigRational::zero();
    let mut s6 = BigRational::zero();
    for n in 1..=terms {
        let nn = BigInt::from(n);
        let qn = q.pow(n);
        let frac = BigRational::new(qn.clone(), BigInt::one() - &qn);
        s4 += BigRational::from_integer(nn.pow(3)) * &frac;
        s6 += BigRational::from_integer(BigInt::from(5) * nn.pow(3) + BigInt::from(7) * nn.pow(5))
            * &frac;
    }
    (
        s4 * BigRational::from_integer(BigInt::from(-5)),
        s6 * BigRational::new(BigInt::from(-1), BigInt::from(12)),
    )
}

/// `(a4, a6) mod p^n` from the exact rational partial sums.
pub fn tate_oracle(q: i64, p: u64, n: u32, terms: u32) -> (BigUint, BigUint) {
    let (a4, a6) = tate_rational_partial_sums(&BigInt::from(q), terms);
    (
        rational_mod_prime_power(&a4, p, n),
        rational_mod_prime_power(&a6, p, n),
    )
}

pub const SMALL_PRIMES: [u64; 4] = [2, 3, 5, 7];

/// Exponents over {2,3,5,7}; `None` is ∞.
pub type ExponentVec = [Option<u32>; 4];

fn split_small(mut k: u64) -> ([i64; 4], u64) {
    let mut v = [0i64; 4];
    for (i, &p) in SMALL_PRIMES.iter().enumerate() {
        while k % p == 0 {
            k /= p;
            v[i] += 1;
        }
    }
    (v, k)
}

/// Generators of ℚ(n) with ∞ truncated at `inf_cap`: each is `1/ℓ^k`,
/// encoded as (prime index, k).
fn generators(n: &ExponentVec, inf_cap: u32) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    for (i, e) in n.iter().enumerate() {
        let top = e.unwrap_or(inf_cap);
        out.extend((1..=top).map(|k| (i, k)));
    }
    out
}

/// Is `(num/den)·(1/ℓ^k)` in ℚ(target)? `num`, `den` given by valuations over
/// {2,3,5,7} plus cofactors.
fn scaled_member(
    num: &([i64; 4], u64),
    den: &([i64; 4], u64),
    gen: Option<(usize, u32)>,
    target: &ExponentVec,
) -> bool {
    if num.1 % den.1 != 0 {
        return false;
    }
    for i in 0..4 {
        let mut e = num.0[i] - den.0[i];
        if let Some((j, k)) = gen {
            if j == i {
                e -= k as i64;
            }
        }
        if e < 0 {
            if let Some(cap) = target[i] {
                if (-e) as u32 > cap {
                    return false;
                }
            }
        }
    }
    true
}

/// Search `r, s <= bound` for `r·ℚ(n) = s·ℚ(n2)`, checked on generator samples
/// (`1` and `1/ℓ^k`, with ∞ exponents sampled up to `inf_cap`).
pub fn brute_force_stable_iso(
    n: &ExponentVec,
    n2: &ExponentVec,
    bound: u64,
    inf_cap: u32,
) -> Option<(u64, u64)> {
    let g1 = generators(n, inf_cap);
    let g2 = generators(n2, inf_cap);
    let split: Vec<([i64; 4], u64)> = (0..=bound).map(|k| split_small(k.max(1))).collect();
    for r in 1..=bound {
        for s in 1..=bound {
            let (rs, ss) = (&split[r as usize], &split[s as usize]);
            let forward = scaled_member(rs, ss, None, n2)
                && g1.iter().all(|&g| scaled_member(rs, ss, Some(g), n2));
            if !forward {
                continue;
            }
            let backward = scaled_member(ss, rs, None, n)
                && g2.iter().all(|&g| scaled_member(ss, rs, Some(g), n));
            if backward {
                return Some((r, s));
            }
        }
    }
    None
}

pub fn exponent_vec_to_string(n: &ExponentVec) -> String {
    let parts: Vec<String> = SMALL_PRIMES
        .iter()
        .zip(n)
        .filter(|(_, e)| **e != Some(0))
        .map(|(p, e)| match e {
            None => format!("{p}^inf"),
            Some(1) => p.to_string(),
            Some(k) => format!("{p}^{k}"),
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Nearest integer multiple of `g` to `t`, ties to the smaller, by scanning
/// the multiples around `t` (independent of the library's rounding).
pub fn nearest_multiple(g: &BigRational, t: &BigRational) -> BigRational {
    let k0 = (t / g).floor().to_integer();
    let mut best: Option<BigRational> = None;
    for dk in -2i64..=2 {
        let cand = BigRational::from_integer(&k0 + dk) * g;
        let better = match &best {
            None => true,
            Some(b) => {
                let (dc, db) = ((&cand - t).abs(), (b - t).abs());
                dc < db || (dc == db && &cand < b)
            }
        };
        if better {
            best = Some(cand);
        }
    }
    best.unwrap()
}
