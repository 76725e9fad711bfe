//! Small integer helpers shared by the modules: primality, factoring of
//! machine-word integers and big prime powers.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

/// Least divisor `d > 1` of `n`, or `n` itself when `n` is prime. `n >= 2`.
pub fn smallest_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut d = 3u64;
    while (d as u128) * (d as u128) <= n as u128 {
        if n % d == 0 {
            return d;
        }
        d += 2;
    }
    n
}

/// Trial-division primality check with a diagnostic factor on failure.
pub fn check_prime(p: u64) -> Result<()> {
    if p < 2 {
        return Err(Error::BelowTwo(p));
    }
    let f = smallest_factor(p);
    if f != p {
        return Err(Error::NotPrime { p, factor: f });
    }
    Ok(())
}

pub fn is_prime(p: u64) -> bool {
    check_prime(p).is_ok()
}

/// Prime factorisation `n = ∏ ℓ^e`, primes ascending. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    while n > 1 {
        let f = smallest_factor(n);
        let mut e = 0;
        while n % f == 0 {
            n /= f;
            e += 1;
        }
        out.push((f, e));
    }
    out
}

pub fn big_pow(p: u64, e: u32) -> BigUint {
    let mut acc = BigUint::one();
    let base = BigUint::from(p);
    for _ in 0..e {
        acc *= &base;
    }
    acc
}

/// Number of times `p` divides `n` (`n != 0`), and the cofactor.
pub fn split_power(n: &BigUint, p: u64) -> (u32, BigUint) {
    let bp = BigUint::from(p);
    let mut rest = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = (&rest / &bp, &rest % &bp);
        if r != BigUint::default() || rest == BigUint::default() {
            break;
        }
        rest = q;
        k += 1;
    }
    (k, rest)
}
