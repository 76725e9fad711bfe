//! Acceptance suite. Each test runs one criterion and prints a single
//! `[PASS]`/`[FAIL]` line (visible with `--nocapture`).

mod common;

use std::process::Command;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tate_uhf::duality::EXHAUSTIVE_BILINEAR_LIMIT;
use tate_uhf::supernatural::verify_witness;
use tate_uhf::tate::{a4_with_terms, a6_coefficient, a6_with_terms};
use tate_uhf::{
    a4, a6, bidual_eval, contains_one_report, density_witness, gamma_generators, gamma_group,
    pair, perfectness_check, prufer_image, prufer_relations_check, stably_isomorphic,
    supernatural_limit, truncation_index, uhf_from_tate, CyclicSubgroupQ, Error, PAdicInt,
    PruferElement, Rational, SupernaturalNumber, UHFDescriptor,
};

use common::{brute_force_stable_iso, exponent_vec_to_string, tate_oracle, ExponentVec};

type Check = std::result::Result<(), String>;

fn report(id: u32, name: &str, outcome: Check) {
    match &outcome {
        Ok(()) => println!("[PASS] criterion {id}: {name}"),
        Err(why) => println!("[FAIL] criterion {id}: {name}: {why}"),
    }
    if let Err(why) = outcome {
        panic!("criterion {id} failed: {why}");
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn r(a: i64, b: i64) -> Rational {
    Rational::frac(a, b)
}

fn big(r: &Rational) -> BigRational {
    BigRational::new(r.numer().clone(), r.denom().clone())
}

const PRIMES: [u64; 4] = [2, 3, 5, 7];

/// A p-adic integer with valuation >= 1 that is nonzero in its first 12
/// digits, given by `digits` random digits.
fn random_tate_q(rng: &mut ChaCha8Rng, digits: u32) -> PAdicInt {
    let p = PRIMES[rng.gen_range(0..4)];
    loop {
        let mut ds: Vec<u64> = (0..digits).map(|_| rng.gen_range(0..p)).collect();
        ds[0] = 0;
        if ds[..12].iter().any(|&d| d != 0) {
            return PAdicInt::from_digits(p, digits, &ds).unwrap();
        }
    }
}

fn worked_example() -> Check {
    for p in PRIMES {
        let pi = p as i64;
        let q = PAdicInt::from_i64(pi, p, 8).unwrap();
        let seq: Vec<BigUint> = q.canonical_sequence().entries().to_vec();
        let mut expect = vec![BigUint::from(0u32)];
        expect.extend(std::iter::repeat(BigUint::from(p)).take(7));
        ensure!(seq == expect, "p={p}: canonical sequence {seq:?}");

        let gens = gamma_generators(&q);
        let mut expect = vec![Rational::zero()];
        expect.extend((1..8).map(|k| r(1, pi.pow(k))));
        ensure!(gens == expect, "p={p}: generators {gens:?}");

        let hull = gamma_group(&q);
        ensure!(hull.generator() == &r(1, pi.pow(7)), "p={p}: hull {}", hull.generator());

        let lim = supernatural_limit(&q).unwrap();
        ensure!(
            lim.sn == SupernaturalNumber::infinite_power(p).unwrap() && lim.scale == BigUint::from(1u32),
            "p={p}: limit {} scale {}",
            lim.sn,
            lim.scale
        );

        let u = uhf_from_tate(&q).unwrap();
        ensure!(
            u.descriptor == UHFDescriptor::repeating(p).unwrap(),
            "p={p}: descriptor {}",
            u.descriptor
        );
        ensure!(
            (u.label == Some("CAR")) == (p == 2),
            "p={p}: label {:?}",
            u.label
        );
    }
    Ok(())
}

fn prufer_relations() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    for _ in 0..200 {
        let q = random_tate_q(&mut rng, 12);
        let p = q.prime();
        let rep = prufer_relations_check(&q).map_err(|e| e.to_string())?;
        ensure!(rep.all_hold(), "{q}: relation fails");
        ensure!(rep.discrepancies_match_digits(), "{q}: discrepancy differs from digit");

        // recheck in ℚ without the report
        let gens = gamma_generators(&q);
        let digits = q.digits();
        let pr = Rational::from(p as i64);
        ensure!((&pr * &gens[0]).is_zero(), "{q}: p·γ_1 = {}", &pr * &gens[0]);
        for n in 1..gens.len() {
            let diff = &(&pr * &gens[n]) - &gens[n - 1];
            ensure!(
                diff == Rational::from(digits[n] as i64),
                "{q}: p·γ_{} − γ_{} = {diff}, digit {}",
                n + 1,
                n,
                digits[n]
            );
            let lhs = prufer_image(&(&pr * &gens[n]), p).unwrap();
            let rhs = prufer_image(&gens[n - 1], p).unwrap();
            ensure!(lhs == rhs, "{q}: mod-1 images differ at n={n}");
        }
    }
    Ok(())
}

fn density() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for _ in 0..200 {
        let full = random_tate_q(&mut rng, 40);
        let p = full.prime();
        let pi = p as i64;

        // generators shrink monotonically, each truncation nesting in the next
        let mut prev: Option<CyclicSubgroupQ> = None;
        let v = full.truncate(12).unwrap().valuation().lower_bound();
        for n in 1..=40 {
            let g = gamma_group(&full.truncate(n).unwrap());
            if let Some(prev) = &prev {
                ensure!(g.contains_group(prev), "{full}: N={n} does not contain N={}", n - 1);
                if n > v + 1 {
                    ensure!(g.generator() < prev.generator(), "{full}: no shrink at N={n}");
                }
            }
            prev = Some(g);
        }

        let b = rng.gen_range(1..=1000i64);
        let target = r(rng.gen_range(0..=b), b);
        let eps = r(1, pi.pow(4));
        let mut hit = None;
        for n in 1..=40 {
            let q = full.truncate(n).unwrap();
            match density_witness(&q, &target, &eps) {
                Ok(w) => {
                    hit = Some((q, w));
                    break;
                }
                Err(Error::InsufficientPrecision { .. }) | Err(Error::ZeroParameter { .. }) => {}
                Err(e) => return Err(format!("{full}: {e}")),
            }
        }
        let (q, w) = hit.ok_or_else(|| format!("{full}: no precision up to 40 reaches ε"))?;
        let group = gamma_group(&q);
        ensure!(group.contains(&w.witness), "{q}: witness {} not in group", w.witness);
        let dist = (big(&w.witness) - big(&target)).abs();
        ensure!(big(&w.distance) == dist, "{q}: reported distance {}", w.distance);
        ensure!(dist < big(&eps), "{q}: distance {dist} ≥ ε");
        let nearest = common::nearest_multiple(&big(group.generator()), &big(&target));
        ensure!(big(&w.witness) == nearest, "{q}: witness is not the nearest multiple");
    }
    Ok(())
}

fn euclid_gap() -> Check {
    let q = PAdicInt::from_i64(6, 3, 6).unwrap();
    let rep = contains_one_report(&q).map_err(|e| e.to_string())?;
    ensure!(!rep.contains_one, "q=6, p=3: reported 1 ∈ Γ_q");
    ensure!(rep.content == BigUint::from(2u32), "q=6, p=3: content {}", rep.content);
    for p in PRIMES {
        let rep = contains_one_report(&PAdicInt::from_i64(p as i64, p, 6).unwrap())
            .map_err(|e| e.to_string())?;
        ensure!(rep.contains_one, "q=p={p}: 1 ∉ Γ_q");
        ensure!(rep.content == BigUint::from(1u32), "q=p={p}: content {}", rep.content);
    }
    Ok(())
}

fn tate_series() -> Check {
    for (p, q, n, expect_a4) in [(2u64, 2i64, 4u32, 2u32), (3, 3, 2, 3)] {
        let x = PAdicInt::from_i64(q, p, n).unwrap();
        // the oracle sums every term n' <= N, past any truncation argument
        let (o4, o6) = tate_oracle(q, p, n, n);
        let got4 = a4(&x).map_err(|e| e.to_string())?;
        let got6 = a6(&x).map_err(|e| e.to_string())?;
        ensure!(got4.residue() == &o4, "a4 at ({p},{q},{n}): {} vs oracle {o4}", got4.residue());
        ensure!(got6.residue() == &o6, "a6 at ({p},{q},{n}): {} vs oracle {o6}", got6.residue());
        ensure!(o4 == BigUint::from(expect_a4), "oracle a4 {o4} ≠ {expect_a4}");
        let t = truncation_index(&x).unwrap();
        ensure!(a4_with_terms(&x, t + 10).unwrap() == got4, "a4 tail unstable at ({p},{q},{n})");
        ensure!(a6_with_terms(&x, t + 10).unwrap() == got6, "a6 tail unstable at ({p},{q},{n})");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    for _ in 0..100 {
        let p = PRIMES[rng.gen_range(0..4)];
        let n = rng.gen_range(1..=16);
        let q = PAdicInt::from_i64(rng.gen_range(1..100_000i64) * p as i64, p, n).unwrap();
        let t = truncation_index(&q).unwrap();
        ensure!(a4(&q).unwrap() == a4_with_terms(&q, t + 10).unwrap(), "a4 tail unstable for {q}");
        ensure!(a6(&q).unwrap() == a6_with_terms(&q, t + 10).unwrap(), "a6 tail unstable for {q}");
    }
    for k in 1..=10_000u64 {
        let k128 = k as u128;
        let num = 5 * k128.pow(3) + 7 * k128.pow(5);
        ensure!(num % 12 == 0, "5n³+7n⁵ not divisible by 12 at n={k}");
        let c = a6_coefficient(k).map_err(|e| e.to_string())?;
        ensure!(c == BigUint::from(num / 12), "coefficient mismatch at n={k}");
    }
    Ok(())
}

fn finite_duality() -> Check {
    for p in [2u64, 3, 5] {
        let mut level = 0;
        while p.pow(level) <= 3125 {
            let rep = perfectness_check(p, level).map_err(|e| e.to_string())?;
            ensure!(
                rep.is_perfect(),
                "p={p}, level={level}: {:?}",
                rep.counterexamples
            );
            ensure!(
                rep.bilinear_exhaustive && rep.order <= EXHAUSTIVE_BILINEAR_LIMIT,
                "p={p}, level={level}: bilinearity not exhaustive"
            );
            level += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    for _ in 0..10_000 {
        let p = [2u64, 3, 5][rng.gen_range(0..3)];
        let n = rng.gen_range(1..=20);
        let z = PAdicInt::from_integer(&BigInt::from(rng.gen::<i128>()), p, n).unwrap();
        let g = PruferElement::new(p, &BigInt::from(rng.gen::<i64>()), rng.gen_range(0..=n)).unwrap();
        let lhs = bidual_eval(&g, &z).map_err(|e| e.to_string())?;
        let rhs = pair(&z, &g).map_err(|e| e.to_string())?;
        ensure!(lhs == rhs, "x_γ(y) ≠ y(γ) for z={z}, γ={g}: {lhs} vs {rhs}");
    }
    Ok(())
}

fn random_exponents(rng: &mut ChaCha8Rng, finite_max: [u32; 4]) -> ExponentVec {
    let mut v = [None; 4];
    for (slot, max) in v.iter_mut().zip(finite_max) {
        *slot = if rng.gen_bool(0.3) {
            None
        } else {
            Some(rng.gen_range(0..=max))
        };
    }
    v
}

fn sn(v: &ExponentVec) -> SupernaturalNumber {
    exponent_vec_to_string(v).parse().unwrap()
}

fn classification() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    // finite exponents small enough that any minimal witness is <= 1000
    let small = [2, 2, 1, 0];
    let mut equal_seen = 0;
    for _ in 0..100 {
        let a = random_exponents(&mut rng, small);
        let b = if rng.gen_bool(0.5) {
            // same infinite set, new finite part
            let mut b = random_exponents(&mut rng, small);
            for i in 0..4 {
                if a[i].is_none() {
                    b[i] = None;
                } else if b[i].is_none() {
                    b[i] = Some(rng.gen_range(0..=small[i]));
                }
            }
            b
        } else {
            random_exponents(&mut rng, small)
        };
        let (na, nb) = (sn(&a), sn(&b));
        let rep = stably_isomorphic(&na, &nb);
        let brute = brute_force_stable_iso(&a, &b, 1000, 14);
        ensure!(
            rep.equal == brute.is_some(),
            "{na} vs {nb}: decider {} brute force {brute:?}",
            rep.equal
        );
        if let Some(w) = &rep.witness {
            equal_seen += 1;
            ensure!(rep.verified, "{na} vs {nb}: witness not verified");
            ensure!(verify_witness(&na, &nb, w, 50), "{na} vs {nb}: witness fails resampling");
        }
    }
    ensure!(equal_seen >= 20, "only {equal_seen} equal pairs sampled");

    let full = [5, 5, 5, 5];
    for _ in 0..300 {
        let (a, b, c) = (
            sn(&random_exponents(&mut rng, full)),
            sn(&random_exponents(&mut rng, full)),
            sn(&random_exponents(&mut rng, full)),
        );
        ensure!(stably_isomorphic(&a, &a).equal, "not reflexive at {a}");
        ensure!(
            stably_isomorphic(&a, &b).equal == stably_isomorphic(&b, &a).equal,
            "not symmetric at {a}, {b}"
        );
        if stably_isomorphic(&a, &b).equal && stably_isomorphic(&b, &c).equal {
            ensure!(stably_isomorphic(&a, &c).equal, "not transitive at {a}, {b}, {c}");
        }
    }
    Ok(())
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tate-uhf"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
    )
}

fn cli_contract() -> Check {
    let split = |s: &str| s.split_whitespace().map(str::to_owned).collect::<Vec<_>>();
    let run = |s: &str| {
        let args = split(s);
        cli(&args.iter().map(String::as_str).collect::<Vec<_>>())
    };

    let (code, out) = run("gamma gens --p 2 --q 2 --prec 4");
    ensure!(code == 0 && out == "0, 1/2, 1/4, 1/8\n", "gamma gens: {code} {out:?}");
    let (code, out) = run("gamma gens --p 2 --q 2 --prec 4 --json");
    ensure!(
        code == 0 && out.contains(r#""generators":["0","1/2","1/4","1/8"]"#),
        "gamma gens --json: {code} {out:?}"
    );

    let (code, out) = run("uhf from-tate --p 2 --q 2 --prec 6 --json");
    ensure!(
        code == 0 && out.contains(r#""k0":"2^inf""#) && out.contains(r#""label":"CAR""#),
        "uhf from-tate: {code} {out:?}"
    );

    let (code, out) = run("tate coeffs --p 2 --q 2 --prec 4 --json");
    ensure!(code == 0 && out.contains(r#""a4":"2 mod 2^4""#), "tate coeffs: {code} {out:?}");

    for (args, want) in [
        ("frobnicate", 2),
        ("gamma gens --p 2 --prec 4", 2),
        ("gamma gens --p 2 --q 1/2 --prec 4", 2),
        ("gamma density --p 3 --q 3 --prec 4 --target x --epsilon 1/9", 2),
        ("tate coeffs --p 3 --q 4 --prec 3", 3),
        ("tate coeffs --p 3 --q 0 --prec 3 --json", 3),
        ("gamma prufer-check --p 5 --q 1 --prec 3", 3),
        ("gamma gens --p 9 --q 1 --prec 3", 3),
        ("gamma density --p 2 --q 2 --prec 3 --target 1/3 --epsilon 1/100", 3),
        ("dual check --p 2 --level 3", 0),
    ] {
        let (code, out) = run(args);
        ensure!(code == want, "`{args}` exited {code}, expected {want}: {out}");
    }
    Ok(())
}

#[test]
fn criterion_1_worked_example() {
    report(1, "worked example q = p, N = 8, p in {2,3,5,7}", worked_example());
}

#[test]
fn criterion_2_prufer_relations() {
    report(2, "Prüfer relations on 200 random q, N = 12", prufer_relations());
}

#[test]
fn criterion_3_density() {
    report(3, "hull shrinkage and density witnesses within 1/p^4", density());
}

#[test]
fn criterion_4_euclid_gap() {
    report(4, "contains-one report for q = 6 (p = 3) and q = p", euclid_gap());
}

#[test]
fn criterion_5_tate_series() {
    report(5, "a4/a6 oracle agreement, tail stability, integrality", tate_series());
}

#[test]
fn criterion_6_finite_duality() {
    report(6, "perfect pairing up to p^level <= 3125 and x_γ(y) = y(γ)", finite_duality());
}

#[test]
fn criterion_7_classification() {
    report(7, "stable isomorphism vs brute force, witnesses, equivalence laws", classification());
}

#[test]
fn criterion_8_cli_contract() {
    report(8, "CLI documented outputs and exit codes", cli_contract());
}
