//! Command-line surface. Every subcommand produces one document, either as
//! human-readable text or (with `--json`) as a single JSON envelope:
//!
//! ```text
//! {"command":…,"diagnostics":[…],"inputs":{…},"result":{…},"status":"ok"|"error"}
//! ```
//!
//! Numbers that can grow are carried as strings in their exact text formats
//! (`a/b`, `r mod p^N`, `2^inf*3`); keys are emitted in sorted order.
//! Exit codes: 0 success, 2 input error, 3 precondition violation.

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::duality::{bidual_eval, pair, perfectness_check};
use crate::error::{Error, Result};
use crate::gamma::{
    contains_one_report, density_witness, gamma_generators, gamma_group, prufer_relations_check,
    supernatural_limit, PruferElement,
};
use crate::padic::{parse_digit_list, PAdicInt};
use crate::rational::Rational;
use crate::supernatural::{k0_of, stably_isomorphic, uhf_from_tate, SupernaturalNumber, UHFDescriptor};
use crate::tate::tate_coefficients;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_PRECONDITION: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "tate-uhf",
    version,
    about = "Exact p-adic, Prüfer and supernatural-number computations for Tate curves and UHF algebras"
)]
struct Cli {
    /// Emit a single JSON document instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Group,
}

#[derive(Subcommand, Debug)]
enum Group {
    /// p-adic integers and canonical sequences
    #[command(subcommand)]
    Padic(PadicCmd),
    /// The subgroup Γ_q of ℚ and its Prüfer quotient
    #[command(subcommand)]
    Gamma(GammaCmd),
    /// Supernatural numbers and UHF K₀ invariants
    #[command(subcommand)]
    Uhf(UhfCmd),
    /// Tate curve coefficients
    #[command(subcommand)]
    Tate(TateCmd),
    /// The ℤ_p × ℤ(p^∞) pairing
    #[command(subcommand)]
    Dual(DualCmd),
}

#[derive(Args, Debug)]
struct QArgs {
    /// Prime p
    #[arg(long)]
    p: u64,
    /// Precision N (number of p-adic digits)
    #[arg(long)]
    prec: u32,
    /// Integer (may be negative) or digit list `[c0,c1,...]`
    #[arg(long, allow_hyphen_values = true)]
    q: String,
}

#[derive(Subcommand, Debug)]
enum PadicCmd {
    /// Digits, valuation and canonical sequence of q
    Canon(QArgs),
    /// Ring arithmetic mod p^N
    Arith {
        #[command(flatten)]
        x: QArgs,
        #[arg(long, value_enum)]
        op: ArithOp,
        /// Second operand (integer or digit list)
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ArithOp {
    Add,
    Sub,
    Neg,
    Mul,
    Invert,
}

#[derive(Subcommand, Debug)]
enum GammaCmd {
    /// γ_n = a_n / p^n
    Gens(QArgs),
    /// Generator of the truncation Γ_q^(N)
    Group(QArgs),
    /// Check p·γ_1 ≡ 0 and p·γ_{n+1} ≡ γ_n (mod 1)
    PruferCheck(QArgs),
    /// Whether 1 ∈ Γ_q^(N), with the prime-to-p content
    ContainsOne(QArgs),
    /// Nearest element of Γ_q^(N) to a target
    Density {
        #[command(flatten)]
        q: QArgs,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long)]
        epsilon: String,
    },
    /// Supernatural limit of the truncations
    Limit(QArgs),
}

#[derive(Subcommand, Debug)]
enum UhfCmd {
    /// K₀ invariant of a size sequence
    K0 {
        /// Finite prefix, e.g. `2,4,8`
        #[arg(long, default_value = "")]
        sizes: String,
        /// Block repeated forever, e.g. `2`
        #[arg(long)]
        tail: Option<String>,
    },
    /// Stable isomorphism of two UHF algebras by their supernatural numbers
    StableIso {
        #[arg(long)]
        n: String,
        #[arg(long)]
        n2: String,
    },
    /// The UHF algebra dual to the Tate curve with parameter q
    FromTate(QArgs),
}

#[derive(Subcommand, Debug)]
enum TateCmd {
    /// a4(q) and a6(q) mod p^N
    Coeffs(QArgs),
}

#[derive(Subcommand, Debug)]
enum DualCmd {
    /// Pair a p-adic integer with a Prüfer element `a/p^n`
    Pair {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        prec: u32,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long)]
        gamma: String,
    },
    /// Exhaustive perfectness check at level n
    Check {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        level: u32,
    },
}

/// Exit code plus the text destined for stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

struct Document {
    command: &'static str,
    inputs: Map<String, Value>,
    result: Value,
    text: String,
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let json_requested = argv.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    code: EXIT_OK,
                    stdout: e.to_string().trim_end().to_string(),
                    stderr: String::new(),
                };
            }
            let usage = e.to_string().trim_end().to_string();
            return failure(json_requested, "", Map::new(), EXIT_INPUT, usage);
        }
    };
    let (command, inputs) = describe(&cli.command);
    match dispatch(&cli.command) {
        Ok(doc) if cli.json => Outcome {
            code: EXIT_OK,
            stdout: envelope(doc.command, doc.inputs, doc.result, "ok", Vec::new()),
            stderr: String::new(),
        },
        Ok(doc) => Outcome {
            code: EXIT_OK,
            stdout: doc.text,
            stderr: String::new(),
        },
        Err(e) => {
            let code = match e {
                Error::Parse(_) => EXIT_INPUT,
                _ => EXIT_PRECONDITION,
            };
            failure(cli.json, command, inputs, code, e.to_string())
        }
    }
}

fn failure(json: bool, command: &str, inputs: Map<String, Value>, code: u8, msg: String) -> Outcome {
    if json {
        Outcome {
            code,
            stdout: envelope(command, inputs, Value::Null, "error", vec![msg]),
            stderr: String::new(),
        }
    } else {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {msg}"),
        }
    }
}

fn envelope(
    command: &str,
    inputs: Map<String, Value>,
    result: Value,
    status: &str,
    diagnostics: Vec<String>,
) -> String {
    json!({
        "command": command,
        "inputs": inputs,
        "result": result,
        "status": status,
        "diagnostics": diagnostics,
    })
    .to_string()
}

fn q_inputs(q: &QArgs) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("p".into(), json!(q.p.to_string()));
    m.insert("prec".into(), json!(q.prec.to_string()));
    m.insert("q".into(), json!(q.q));
    m
}

fn with(mut m: Map<String, Value>, key: &str, value: &str) -> Map<String, Value> {
    m.insert(key.into(), json!(value));
    m
}

fn describe(group: &Group) -> (&'static str, Map<String, Value>) {
    match group {
        Group::Padic(PadicCmd::Canon(q)) => ("padic canon", q_inputs(q)),
        Group::Padic(PadicCmd::Arith { x, op, y }) => {
            let m = with(q_inputs(x), "op", &format!("{op:?}").to_lowercase());
            let m = match y {
                Some(y) => with(m, "y", y),
                None => m,
            };
            ("padic arith", m)
        }
        Group::Gamma(GammaCmd::Gens(q)) => ("gamma gens", q_inputs(q)),
        Group::Gamma(GammaCmd::Group(q)) => ("gamma group", q_inputs(q)),
        Group::Gamma(GammaCmd::PruferCheck(q)) => ("gamma prufer-check", q_inputs(q)),
        Group::Gamma(GammaCmd::ContainsOne(q)) => ("gamma contains-one", q_inputs(q)),
        Group::Gamma(GammaCmd::Density { q, target, epsilon }) => (
            "gamma density",
            with(with(q_inputs(q), "target", target), "epsilon", epsilon),
        ),
        Group::Gamma(GammaCmd::Limit(q)) => ("gamma limit", q_inputs(q)),
        Group::Uhf(UhfCmd::K0 { sizes, tail }) => {
            let m = with(Map::new(), "sizes", sizes);
            let m = match tail {
                Some(t) => with(m, "tail", t),
                None => m,
            };
            ("uhf k0", m)
        }
        Group::Uhf(UhfCmd::StableIso { n, n2 }) => {
            ("uhf stable-iso", with(with(Map::new(), "n", n), "n2", n2))
        }
        Group::Uhf(UhfCmd::FromTate(q)) => ("uhf from-tate", q_inputs(q)),
        Group::Tate(TateCmd::Coeffs(q)) => ("tate coeffs", q_inputs(q)),
        Group::Dual(DualCmd::Pair { p, prec, z, gamma }) => {
            let m = with(Map::new(), "p", &p.to_string());
            let m = with(with(with(m, "prec", &prec.to_string()), "z", z), "gamma", gamma);
            ("dual pair", m)
        }
        Group::Dual(DualCmd::Check { p, level }) => (
            "dual check",
            with(with(Map::new(), "p", &p.to_string()), "level", &level.to_string()),
        ),
    }
}

/// Parses an integer or a digit list (padded with zeros up to `prec`).
/// Also reports whether the literal value was zero.
fn parse_padic(s: &str, p: u64, prec: u32) -> Result<(PAdicInt, bool)> {
    let t = s.trim();
    if t.starts_with('[') || t.contains(',') {
        let mut digits = parse_digit_list(t)?;
        if digits.len() > prec as usize {
            return Err(Error::parse(format!(
                "{} digits given for precision {prec}",
                digits.len()
            )));
        }
        digits.resize(prec as usize, 0);
        let literal_zero = digits.iter().all(|&d| d == 0);
        Ok((PAdicInt::from_digits(p, prec, &digits)?, literal_zero))
    } else {
        let m: BigInt = t
            .parse()
            .map_err(|e| Error::parse(format!("q `{t}`: {e}")))?;
        Ok((PAdicInt::from_integer(&m, p, prec)?, m.is_zero()))
    }
}

fn parse_q(q: &QArgs) -> Result<PAdicInt> {
    parse_padic(&q.q, q.p, q.prec).map(|(x, _)| x)
}

fn parse_rational(s: &str) -> Result<Rational> {
    s.parse()
}

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(ToString::to_string).collect()
}

fn dispatch(group: &Group) -> Result<Document> {
    let (command, inputs) = describe(group);
    let (result, text) = match group {
        Group::Padic(PadicCmd::Canon(q)) => {
            let x = parse_q(q)?;
            let seq = strings(x.canonical_sequence().entries());
            let text = format!(
                "{x}\nresidue: {}\nvaluation: {}\ncanonical sequence: {}",
                x.residue_string(),
                x.valuation(),
                seq.join(", ")
            );
            let result = json!({
                "value": x.to_string(),
                "residue": x.residue_string(),
                "digits": x.digits(),
                "valuation": x.valuation().to_string(),
                "sequence": seq,
            });
            (result, text)
        }
        Group::Padic(PadicCmd::Arith { x, op, y }) => {
            let a = parse_q(x)?;
            let operand = || -> Result<PAdicInt> {
                let y = y
                    .as_deref()
                    .ok_or_else(|| Error::parse(format!("--y is required for {op:?}")))?;
                Ok(parse_padic(y, x.p, x.prec)?.0)
            };
            let z = match op {
                ArithOp::Add => a.add(&operand()?)?,
                ArithOp::Sub => a.sub(&operand()?)?,
                ArithOp::Mul => a.mul(&operand()?)?,
                ArithOp::Neg => a.neg(),
                ArithOp::Invert => a.invert()?,
            };
            let text = format!("{z}\nresidue: {}", z.residue_string());
            let result = json!({
                "value": z.to_string(),
                "residue": z.residue_string(),
                "digits": z.digits(),
            });
            (result, text)
        }
        Group::Gamma(GammaCmd::Gens(q)) => {
            let gens = strings(&gamma_generators(&parse_q(q)?));
            let text = gens.join(", ");
            (json!({ "generators": gens }), text)
        }
        Group::Gamma(GammaCmd::Group(q)) => {
            let g = gamma_group(&parse_q(q)?);
            let text = format!("generator: {}", g.generator());
            let result = json!({
                "generator": g.generator().to_string(),
                "trivial": g.is_trivial(),
            });
            (result, text)
        }
        Group::Gamma(GammaCmd::PruferCheck(q)) => {
            let rep = prufer_relations_check(&parse_q(q)?)?;
            let steps: Vec<Value> = rep
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "n": s.n,
                        "holds": s.holds,
                        "discrepancy": s.discrepancy.to_string(),
                        "digit": s.digit,
                    })
                })
                .collect();
            let mut text = format!(
                "p*gamma_1 = 0 mod 1: {}\n",
                if rep.base_holds { "holds" } else { "FAILS" }
            );
            for s in &rep.steps {
                text.push_str(&format!(
                    "p*gamma_{} = gamma_{} + {}: {}\n",
                    s.n + 1,
                    s.n,
                    s.discrepancy,
                    if s.holds { "holds" } else { "FAILS" }
                ));
            }
            text.push_str(&format!("unbounded order: {}", rep.unbounded_order));
            let result = json!({
                "valuation": rep.valuation,
                "base_holds": rep.base_holds,
                "all_hold": rep.all_hold(),
                "discrepancies_match_digits": rep.discrepancies_match_digits(),
                "steps": steps,
                "images": strings(&rep.images),
                "unbounded_order": rep.unbounded_order,
            });
            (result, text)
        }
        Group::Gamma(GammaCmd::ContainsOne(q)) => {
            let rep = contains_one_report(&parse_q(q)?)?;
            let text = format!(
                "contains one: {}\ncontent: {}\ngenerator: {}",
                rep.contains_one, rep.content, rep.generator
            );
            let result = json!({
                "contains_one": rep.contains_one,
                "content": rep.content.to_string(),
                "generator": rep.generator.to_string(),
            });
            (result, text)
        }
        Group::Gamma(GammaCmd::Density { q, target, epsilon }) => {
            let w = density_witness(&parse_q(q)?, &parse_rational(target)?, &parse_rational(epsilon)?)?;
            let text = format!("witness: {}\ndistance: {}", w.witness, w.distance);
            let result = json!({
                "witness": w.witness.to_string(),
                "distance": w.distance.to_string(),
                "generator": w.generator.to_string(),
            });
            (result, text)
        }
        Group::Gamma(GammaCmd::Limit(q)) => {
            let lim = supernatural_limit(&parse_q(q)?)?;
            let text = format!(
                "supernatural: {}\nscale: {}\nstabilized: {}",
                lim.sn, lim.scale, lim.stabilized
            );
            let result = json!({
                "sn": lim.sn.to_string(),
                "scale": lim.scale.to_string(),
                "stabilized": lim.stabilized,
                "denominator_exponents": lim.denominator_exponents,
            });
            (result, text)
        }
        Group::Uhf(UhfCmd::K0 { sizes, tail }) => {
            let prefix = crate::supernatural::parse_size_list(sizes)?;
            let tail = match tail {
                Some(t) => crate::supernatural::parse_size_list(t)?,
                None => Vec::new(),
            };
            let d = UHFDescriptor::new(prefix, tail)?;
            let k0 = k0_of(&d);
            let text = format!("{d}\nK0 = Q({k0})");
            (json!({ "descriptor": d.to_string(), "k0": k0.to_string() }), text)
        }
        Group::Uhf(UhfCmd::StableIso { n, n2 }) => {
            let a: SupernaturalNumber = n.parse()?;
            let b: SupernaturalNumber = n2.parse()?;
            let rep = stably_isomorphic(&a, &b);
            let witness = rep
                .witness
                .as_ref()
                .map(|w| json!({ "r": w.r.to_string(), "s": w.s.to_string() }));
            let text = match &rep.witness {
                Some(w) => format!("stably isomorphic: {} Q({a}) = {} Q({b})", w.r, w.s),
                None => "not stably isomorphic".to_string(),
            };
            let result = json!({
                "equal": rep.equal,
                "witness": witness,
                "verified": rep.verified,
            });
            (result, text)
        }
        Group::Uhf(UhfCmd::FromTate(q)) => {
            let u = uhf_from_tate(&parse_q(q)?)?;
            let mut text = format!("{}\nK0 = Q({})\nscale: {}", u.descriptor, u.k0, u.scale);
            if let Some(label) = u.label {
                text.push_str(&format!("\n{label} algebra"));
            }
            let result = json!({
                "descriptor": u.descriptor.to_string(),
                "k0": u.k0.to_string(),
                "scale": u.scale.to_string(),
                "stabilized": u.stabilized,
                "label": u.label,
            });
            (result, text)
        }
        Group::Tate(TateCmd::Coeffs(q)) => {
            let (x, literal_zero) = parse_padic(&q.q, q.p, q.prec)?;
            if literal_zero {
                return Err(Error::ZeroParameter { precision: q.prec });
            }
            let c = tate_coefficients(&x)?;
            let text = format!(
                "a4 = {}\na6 = {}\nterms used: {}",
                c.a4.residue_string(),
                c.a6.residue_string(),
                c.terms_used
            );
            let result = json!({
                "a4": c.a4.residue_string(),
                "a4_digits": c.a4.digits(),
                "a6": c.a6.residue_string(),
                "a6_digits": c.a6.digits(),
                "terms_used": c.terms_used,
                "q_valuation": c.q_valuation,
            });
            (result, text)
        }
        Group::Dual(DualCmd::Pair { p, prec, z, gamma }) => {
            let (z, _) = parse_padic(z, *p, *prec)?;
            let g: PruferElement = gamma.parse()?;
            let value = pair(&z, &g)?;
            let bidual = bidual_eval(&g, &z)?;
            let text = value.to_string();
            let result = json!({
                "value": value.to_string(),
                "bidual": bidual.to_string(),
            });
            (result, text)
        }
        Group::Dual(DualCmd::Check { p, level }) => {
            let rep = perfectness_check(*p, *level)?;
            let text = format!(
                "order {}: bilinear {}, left nondegenerate {}, right nondegenerate {} => {}",
                rep.order,
                rep.bilinear,
                rep.left_nondegenerate,
                rep.right_nondegenerate,
                if rep.is_perfect() { "perfect" } else { "NOT perfect" }
            );
            let result = json!({
                "order": rep.order,
                "perfect": rep.is_perfect(),
                "bilinear": rep.bilinear,
                "bilinear_exhaustive": rep.bilinear_exhaustive,
                "left_nondegenerate": rep.left_nondegenerate,
                "right_nondegenerate": rep.right_nondegenerate,
                "counterexamples": rep.counterexamples,
            });
            (result, text)
        }
    };
    Ok(Document {
        command,
        inputs,
        result,
        text,
    })
}
