//! Cyclicity of isogeny classes of abelian varieties over finite fields.
//!
//! An isogeny class over `F_q` is determined by its Weil polynomial
//! `f(t) = t^2g + a_1 t^(2g-1) + ... + a_g t^g + a_(g-1) q t^(g-1) + ... + q^g`,
//! and the class is *cyclic* (every variety in it has a cyclic group of
//! rational points) exactly when `f'(1)` is coprime with `f(1)/rad(f(1))`.
//! This crate implements that criterion together with the surrounding
//! machinery used to study it at desk scale:
//!
//! * [`arith`] — exact integer utilities: factorization, radicals,
//!   valuations, the inclusion–exclusion square-divisor counts and the
//!   unit-translate density of residue rings;
//! * [`weil`] — Weil polynomial construction, evaluation, products and the
//!   cyclicity verdict itself;
//! * [`validity`] — which coefficient vectors actually define an isogeny
//!   class (Waterhouse conditions for curves, Rück's theorem with p-adic
//!   subchecks for surfaces, a numeric root-modulus check above that);
//! * [`enumerate`] — exhaustive windows of admissible last coefficients;
//! * [`stats`] — cyclic-density estimators and their closed-form lower
//!   bounds;
//! * [`hyp`] — divisor-control witnesses `(eta, t, s)` and their empirical
//!   verification;
//! * [`surfaces`] — maximal surfaces over even-power fields, near-maximal
//!   elliptic products, and two generators of cyclic families;
//! * [`oracle`] — a brute-force elliptic-curve oracle that recomputes group
//!   structures by point enumeration and checks the criterion against them.

pub mod arith;
pub mod enumerate;
pub mod hyp;
pub mod oracle;
pub mod poly;
pub mod stats;
pub mod surfaces;
pub mod validity;
pub mod weil;

/// Errors shared by the whole crate. Each variant names the precondition
/// that was violated; the arithmetic itself is total once inputs pass.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("{what} must be coprime (gcd = {gcd})")]
    NotCoprime { what: &'static str, gcd: String },
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("classes lie over different fields")]
    FieldMismatch,
    #[error("not a valid isogeny class: {0}")]
    InvalidClass(String),
    #[error("dimension {g} unsupported: {reason}")]
    UnsupportedDimension { g: usize, reason: &'static str },
    #[error("prime {ell} divides the progression step")]
    PrimeDividesStep { ell: u64 },
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),
    #[error("family member {index} failed verification: {reason}")]
    FamilyMemberFailed { index: usize, reason: String },
    #[error("prime {p} outside the supported oracle range 5..=101")]
    PrimeOutOfRange { p: u64 },
    #[error("no curves over F_{p} with trace {trace}")]
    EmptyTraceClass { p: u64, trace: i64 },
    #[error("field degree {r} is odd; an integral square root of q is required")]
    OddPower { r: u32 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub use weil::{CyclicityVerdict, FieldSize, IsogenyClass};
