//! Exact computations behind the duality between Tate curves `E_q` over ℚ_p
//! and UHF algebras: canonical sequences of p-adic integers, the dense
//! subgroup Γ_q ⊆ ℚ and its Prüfer quotient, supernatural-number K₀
//! invariants, the coefficients `a₄(q)`, `a₆(q)`, and the finite-level
//! Pontryagin pairing between ℤ_p and ℤ(p^∞).
//!
//! Every value is exact: p-adic integers are residues mod `p^N`, rationals
//! are reduced big-integer fractions, and circle values are points of ℚ/ℤ.

pub mod arith;
pub mod cli;
pub mod duality;
pub mod error;
pub mod gamma;
pub mod padic;
pub mod rational;
pub mod supernatural;
pub mod tate;

pub use duality::{bidual_eval, pair, perfectness_check, CircleElement, PerfectnessReport};
pub use error::{Error, Result};
pub use gamma::{
    contains_one_report, cyclic_hull, density_witness, gamma_generators, gamma_group,
    prufer_image, prufer_relations_check, supernatural_limit, CyclicSubgroupQ, PruferElement,
};
pub use padic::{CanonicalSequence, PAdicInt, Valuation};
pub use rational::Rational;
pub use supernatural::{
    k0_of, qn_contains, stably_isomorphic, supernatural_from_sizes, uhf_from_tate, Exponent,
    SupernaturalNumber, UHFDescriptor,
};
pub use tate::{a4, a6, tate_coefficients, truncation_index, TateCoefficients};
