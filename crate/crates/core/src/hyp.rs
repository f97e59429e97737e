//! Divisor-control witnesses. A witness `(eta, t, s)` for a coefficient
//! vector `b` asserts that the common prime divisors of `f(1)` and `f'(1)`
//! over every `F_q` are controlled by the constant `eta` and the linear
//! form `t*q + s`, with `gcd(eta, t, s) = 1`. When `gcd(eta, t*q+s) = 1`
//! at a particular `q`, the class there must be cyclic.
//!
//! Witnesses are built here for curves (`(|2+a|, 1, 1+a)`) and surfaces
//! (`(|(2a+b+2)(a^2-4a+4b-16)|, a, 4+3a+2b)`, for odd `a` coprime to
//! `b+2`), and verified empirically on sampled field sizes. `eta = 0` is
//! tolerated as a degenerate witness (every integer divides 0, so the
//! control is vacuous); bound computations reject it.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith;
use crate::weil::{FieldSize, IsogenyClass};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypWitness {
    eta: BigUint,
    t: BigInt,
    s: BigInt,
}

impl HypWitness {
    /// Requires `gcd(eta, t, s) = 1` as given.
    pub fn new(eta: BigUint, t: BigInt, s: BigInt) -> Result<Self> {
        let g = eta.gcd(t.magnitude()).gcd(s.magnitude());
        if !g.is_one() {
            return Err(Error::InvalidWitness(format!(
                "gcd(eta, t, s) = {g}, expected 1"
            )));
        }
        Ok(HypWitness { eta, t, s })
    }

    /// Divides out the common factor instead of rejecting it.
    pub fn normalized(eta: BigUint, t: BigInt, s: BigInt) -> Result<Self> {
        let g = eta.gcd(t.magnitude()).gcd(s.magnitude());
        if g.is_zero() {
            return Err(Error::InvalidWitness("eta, t, s all zero".into()));
        }
        let gi = BigInt::from(g.clone());
        HypWitness::new(eta / &g, t / &gi, s / &gi)
    }

    pub fn eta(&self) -> &BigUint {
        &self.eta
    }

    pub fn t(&self) -> &BigInt {
        &self.t
    }

    pub fn s(&self) -> &BigInt {
        &self.s
    }

    /// The linear form `t*q + s` at a concrete field size.
    pub fn linear_form_at(&self, q: &BigUint) -> BigInt {
        &self.t * BigInt::from(q.clone()) + &self.s
    }
}

/// The curve witness `(|2+a|, 1, 1+a)`: here `f'(1) = 2+a` and
/// `f(1) = q+1+a` are exactly the two controlling quantities, so the
/// witness verifies for every `a`. `a = -2` degenerates to `eta = 0`.
pub fn elliptic_witness(a: i64) -> HypWitness {
    let eta = BigInt::from(2 + a).magnitude().clone();
    HypWitness::new(eta, BigInt::one(), BigInt::from(1 + a))
        .expect("t = 1 forces a trivial gcd")
}

/// The surface witness `(|(2a+b+2)(a^2-4a+4b-16)|, a, 4+3a+2b)`. Requires
/// `a` odd and `gcd(a, b+2) = 1`, which force the gcd-1 invariant.
pub fn surface_witness(a: i64, b: i64) -> Result<HypWitness> {
    if a.rem_euclid(2) != 1 {
        return Err(Error::InvalidWitness(format!(
            "a = {a} must be odd for the surface witness"
        )));
    }
    let g = a.unsigned_abs().gcd(&(b + 2).unsigned_abs());
    if g != 1 {
        return Err(Error::InvalidWitness(format!(
            "gcd(a, b+2) = {g}, expected 1 for the surface witness"
        )));
    }
    let a_big = BigInt::from(a);
    let b_big = BigInt::from(b);
    let eta = ((2 * &a_big + &b_big + 2) * (&a_big * &a_big - 4 * &a_big + 4 * &b_big - 16))
        .magnitude()
        .clone();
    HypWitness::new(eta, a_big, BigInt::from(4 + 3 * a + 2 * b))
}

/// If two witnesses verify for the same coefficient vector, so does
/// `(gcd(eta1, eta2), t1, s1)`; the result is re-normalized to keep the
/// gcd-1 invariant.
pub fn combine_witnesses(w1: &HypWitness, w2: &HypWitness) -> Result<HypWitness> {
    let eta = w1.eta.gcd(&w2.eta);
    HypWitness::normalized(eta, w1.t.clone(), w1.s.clone())
}

/// Reduction rule: if `(eta, t1, s1)` and `(eta, t2, s2)` both verify for
/// the same vector and a prime `ell | eta` divides `t2*s2` but not `t1*s1`,
/// then `(eta/ell, t1*ell, s1*ell)` also verifies. Note the scaling breaks
/// the identity `f'(1) = t*q + s` where it held; the result is a
/// divisor-tracking witness only.
pub fn reduce_witness(w: &HypWitness, w2: &HypWitness, ell: u64) -> Result<HypWitness> {
    if !arith::is_prime_u64(ell) {
        return Err(Error::NotPrime(ell.to_string()));
    }
    if w.eta != w2.eta {
        return Err(Error::InvalidWitness(
            "reduction requires both witnesses to share eta".into(),
        ));
    }
    let ell_big = BigUint::from(ell);
    if !(&w.eta % &ell_big).is_zero() {
        return Err(Error::InvalidWitness(format!("{ell} does not divide eta")));
    }
    let ts2 = (&w2.t * &w2.s).magnitude().clone();
    if !(&ts2 % &ell_big).is_zero() {
        return Err(Error::InvalidWitness(format!(
            "{ell} does not divide t2*s2"
        )));
    }
    let ts1 = (&w.t * &w.s).magnitude().clone();
    if (&ts1 % &ell_big).is_zero() {
        return Err(Error::InvalidWitness(format!(
            "{ell} already divides t*s of the witness being reduced"
        )));
    }
    HypWitness::normalized(
        &w.eta / &ell_big,
        &w.t * BigInt::from(ell),
        &w.s * BigInt::from(ell),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    /// A common prime divisor of `f(1)` and `f'(1)` does not divide
    /// `eta * (t*q + s)`.
    EscapedCommonPrime { prime: BigUint },
    /// `gcd(eta, t*q + s) = 1` but the class is not cyclic.
    CyclicityContradiction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessViolation {
    pub q: BigUint,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub checked: usize,
    /// Samples where `f(1) <= 0` (no group to speak of); the divisor check
    /// still ran but the cyclicity implication was skipped.
    pub skipped_nonpositive: usize,
    pub violations: Vec<WitnessViolation>,
}

impl WitnessReport {
    pub fn verified(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a witness against concrete field sizes. For each sample `q`:
/// (i) every common prime divisor of `f(1)` and `f'(1)` must divide
/// `eta * (t*q + s)`, and (ii) if `gcd(eta, t*q + s) = 1` the class must
/// be cyclic. An empty violation list means the witness survived the
/// sample.
pub fn verify_witness(
    coeffs: &[i64],
    witness: &HypWitness,
    samples: &[FieldSize],
) -> WitnessReport {
    let g = coeffs.len();
    let outcomes: Vec<(BigUint, bool, Vec<ViolationKind>)> = samples
        .par_iter()
        .map(|field| {
            let class = IsogenyClass::from_i64(g, field, coeffs)
                .expect("coefficient count matches g");
            let n = class.point_count();
            let dn = class.derivative_at_one();
            let j = witness.linear_form_at(field.q());
            let control = BigInt::from(witness.eta().clone()) * &j;
            let mut kinds = Vec::new();

            // (i) strip every prime shared with the control value; any
            // leftover common divisor escaped the witness.
            let mut shared = n.magnitude().gcd(dn.magnitude());
            if shared.is_zero() {
                // f(1) = f'(1) = 0: every prime is common, so the control
                // value must vanish too.
                if !control.is_zero() {
                    kinds.push(ViolationKind::EscapedCommonPrime {
                        prime: BigUint::from(2u32),
                    });
                }
            } else {
                loop {
                    let d = shared.gcd(control.magnitude());
                    if d.is_one() || shared.is_one() {
                        break;
                    }
                    shared /= d;
                }
                if !shared.is_one() {
                    let escaped = arith::factorize_unsigned(shared)
                        .expect("nonzero")
                        .primes()
                        .next()
                        .cloned()
                        .expect("nontrivial leftover has a prime divisor");
                    kinds.push(ViolationKind::EscapedCommonPrime { prime: escaped });
                }
            }

            // (ii) coprime control forces cyclicity.
            let skipped = !n.is_positive();
            if !skipped {
                let control_gcd = witness.eta().gcd(j.magnitude());
                if control_gcd.is_one() {
                    let verdict = class.cyclicity().expect("positive point count");
                    if !verdict.cyclic {
                        kinds.push(ViolationKind::CyclicityContradiction);
                    }
                }
            }
            (field.q().clone(), skipped, kinds)
        })
        .collect();

    let mut report = WitnessReport {
        checked: outcomes.len(),
        skipped_nonpositive: 0,
        violations: Vec::new(),
    };
    for (q, skipped, kinds) in outcomes {
        if skipped {
            report.skipped_nonpositive += 1;
        }
        for kind in kinds {
            report.violations.push(WitnessViolation { q: q.clone(), kind });
        }
    }
    report
}
