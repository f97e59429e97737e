//! Cyclic-density estimators and their closed-form lower bounds.
//!
//! Three exact rational estimators are tracked: the cumulative fraction of
//! cyclic classes over `F_p^i` with a fixed coefficient prefix and free
//! last coefficient (`density_over_extensions`), and the fraction of field
//! sizes at which one fixed coefficient vector stays cyclic, either over
//! primes (`density_over_primes`) or over powers of one prime
//! (`density_over_powers`).
//!
//! The attached bounds are asymptotic (liminf) statements, not finite-n
//! truths; estimates carry them for inspection and the acceptance suite
//! only asserts them where finite computations are expected to comply.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{self, v_ell};
use crate::enumerate::admissible_and_cyclic_values;
use crate::hyp::HypWitness;
use crate::validity::{validate, Mode};
use crate::weil::{control_value, FieldSize, IsogenyClass};
use crate::{Error, Result};

/// One step of a density series: per-index counts plus the running totals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesPoint {
    /// The extension degree `i`, or the prime itself for prime sweeps.
    pub index: u64,
    /// Cyclic classes contributed at this index.
    pub hits: u64,
    /// Valid classes contributed at this index.
    pub members: u64,
    pub cum_hits: u64,
    pub cum_members: u64,
}

impl SeriesPoint {
    /// The running ratio, once the denominator is nonempty.
    pub fn value(&self) -> Option<BigRational> {
        (self.cum_members > 0).then(|| {
            BigRational::new(
                BigInt::from(self.cum_hits),
                BigInt::from(self.cum_members),
            )
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate {
    pub numerator: u64,
    pub denominator: u64,
    pub series: Vec<SeriesPoint>,
    /// Closed-form lower bound when one applies (asymptotic, attached for
    /// inspection only).
    pub bound: Option<f64>,
    pub mode: Mode,
}

impl DensityEstimate {
    /// Exact value in `[0, 1]`; `None` when no valid class was seen.
    pub fn value(&self) -> Option<BigRational> {
        (self.denominator > 0).then(|| {
            BigRational::new(
                BigInt::from(self.numerator),
                BigInt::from(self.denominator),
            )
        })
    }

    pub fn value_f64(&self) -> Option<f64> {
        self.value().and_then(|v| v.to_f64())
    }

    fn from_series(series: Vec<SeriesPoint>, bound: Option<f64>, mode: Mode) -> Self {
        let (numerator, denominator) = series
            .last()
            .map_or((0, 0), |p| (p.cum_hits, p.cum_members));
        DensityEstimate {
            numerator,
            denominator,
            series,
            bound,
            mode,
        }
    }
}

/// Validity and cyclicity of one fully specified coefficient vector over
/// one field: the building block of the prime/power sweeps.
pub fn membership(coeffs: &[i64], field: &FieldSize, mode: Mode) -> Result<(bool, bool)> {
    let g = coeffs.len();
    if g == 0 || g > 2 {
        return Err(Error::UnsupportedDimension {
            g,
            reason: "density sweeps need the exact membership tests of g <= 2",
        });
    }
    let class = IsogenyClass::from_i64(g, field, coeffs)?;
    if !validate(&class, mode).valid {
        return Ok((false, false));
    }
    Ok((true, class.cyclicity()?.cyclic))
}

/// Window sizes over one field for a fixed prefix: `(valid, cyclic)`.
pub fn extension_counts(
    g: usize,
    prefix: &[i64],
    field: &FieldSize,
    mode: Mode,
) -> Result<(u64, u64)> {
    let (all, cyclic) = admissible_and_cyclic_values(g, prefix, field, mode)?;
    Ok((all.len() as u64, cyclic.len() as u64))
}

/// Cumulative cyclic fraction over `i = 1..=n` of the windows of free last
/// coefficients over `F_p^i`, for the fixed prefix `(a_1..a_(g-1))`. The
/// closed-form bound from [`extension_density_bound`] is attached when it
/// is defined.
pub fn density_over_extensions(
    p: u64,
    prefix: &[i64],
    n: u32,
    mode: Mode,
) -> Result<DensityEstimate> {
    let g = prefix.len() + 1;
    if g > 2 {
        return Err(Error::UnsupportedDimension {
            g,
            reason: "density sweeps need the exact membership tests of g <= 2",
        });
    }
    if n == 0 {
        return Err(Error::InvalidInput("need at least one extension".into()));
    }
    let counts: Vec<(u64, u64)> = (1..=n)
        .map(|i| extension_counts(g, prefix, &FieldSize::new(p, i)?, mode))
        .collect::<Result<_>>()?;
    let mut series = Vec::with_capacity(n as usize);
    let (mut cum_hits, mut cum_members) = (0u64, 0u64);
    for (i, (members, hits)) in counts.into_iter().enumerate() {
        cum_hits += hits;
        cum_members += members;
        series.push(SeriesPoint {
            index: i as u64 + 1,
            hits,
            members,
            cum_hits,
            cum_members,
        });
    }
    let bound = extension_density_bound(p, g, prefix).ok();
    Ok(DensityEstimate::from_series(series, bound, mode))
}

/// Closed-form asymptotic lower bound for [`density_over_extensions`]:
/// `1 - p/(p-1) * [xi * (1 - p^(-g/2)) + p^(-g/2)]`, where `xi` is the
/// square-divisor density of the primes dividing the control value
/// `g*f(1) - f'(1)` at `x = p`. May be negative (vacuous) for small `p`;
/// rejects a zero control value, whose prime support is undefined.
pub fn extension_density_bound(p: u64, g: usize, prefix: &[i64]) -> Result<f64> {
    if !arith::is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let prefix: Vec<BigInt> = prefix.iter().map(|&c| BigInt::from(c)).collect();
    let h = control_value(g, &BigInt::from(p), &prefix);
    if h.is_zero() {
        return Err(Error::InvalidInput(
            "control value g*f(1) - f'(1) is zero; its prime support is undefined".into(),
        ));
    }
    let support: Vec<u64> = arith::factorize(&h)?
        .primes()
        .map(|q| {
            q.to_u64()
                .ok_or_else(|| Error::InvalidInput("prime divisor exceeds u64".into()))
        })
        .collect::<Result<_>>()?;
    let xi = arith::square_divisor_density(&support)?
        .to_f64()
        .expect("rational in [0,1]");
    let p_half_g = (p as f64).powi(g as i32).sqrt();
    let inv = 1.0 / p_half_g;
    Ok(1.0 - (p as f64) / (p as f64 - 1.0) * (xi * (1.0 - inv) + inv))
}

/// Fraction of primes `ell <= n_max` at which the fixed vector defines a
/// cyclic class, among those where it defines a class at all. Series
/// indices are the primes themselves.
pub fn density_over_primes(coeffs: &[i64], n_max: u64, mode: Mode) -> Result<DensityEstimate> {
    let primes = arith::primes_up_to(n_max);
    let memberships: Vec<(u64, (bool, bool))> = primes
        .par_iter()
        .map(|&ell| {
            let field = FieldSize::new(ell, 1)?;
            Ok((ell, membership(coeffs, &field, mode)?))
        })
        .collect::<Result<_>>()?;
    let mut series = Vec::new();
    let (mut cum_hits, mut cum_members) = (0u64, 0u64);
    for (ell, (valid, cyclic)) in memberships {
        let members = valid as u64;
        let hits = cyclic as u64;
        cum_hits += hits;
        cum_members += members;
        series.push(SeriesPoint {
            index: ell,
            hits,
            members,
            cum_hits,
            cum_members,
        });
    }
    Ok(DensityEstimate::from_series(series, None, mode))
}

/// Fraction of exponents `i <= n` at which the fixed vector defines a
/// cyclic class over `F_p^i`, among those where it defines a class.
pub fn density_over_powers(
    p: u64,
    coeffs: &[i64],
    n: u32,
    mode: Mode,
) -> Result<DensityEstimate> {
    if n == 0 {
        return Err(Error::InvalidInput("need at least one exponent".into()));
    }
    let memberships: Vec<(bool, bool)> = (1..=n)
        .map(|i| membership(coeffs, &FieldSize::new(p, i)?, mode))
        .collect::<Result<_>>()?;
    let mut series = Vec::new();
    let (mut cum_hits, mut cum_members) = (0u64, 0u64);
    for (i, (valid, cyclic)) in memberships.into_iter().enumerate() {
        let members = valid as u64;
        let hits = cyclic as u64;
        cum_hits += hits;
        cum_members += members;
        series.push(SeriesPoint {
            index: i as u64 + 1,
            hits,
            members,
            cum_hits,
            cum_members,
        });
    }
    Ok(DensityEstimate::from_series(series, None, mode))
}

/// The witness lower bound `prod (ell-2)/(ell-1)` over primes dividing
/// `eta` but not `t*s`. Zero exactly when 2 contributes a factor. Rejects
/// the degenerate `eta = 0`.
pub fn witness_density_bound(w: &HypWitness) -> Result<BigRational> {
    if w.eta().is_zero() {
        return Err(Error::InvalidWitness(
            "eta = 0 has undefined prime support".into(),
        ));
    }
    let ts = w.t() * w.s();
    let mut bound = BigRational::one();
    for ell in arith::factorize_unsigned(w.eta().clone())?.primes() {
        // Every prime divides t*s = 0, so the exclusion then empties the product.
        let divides_ts = ts.is_zero() || (ts.magnitude() % ell).is_zero();
        if divides_ts {
            continue;
        }
        let ell = BigInt::from(ell.clone());
        bound *= BigRational::new(&ell - 2, &ell - 1);
    }
    Ok(bound)
}

/// Hypothesis checklist for applying the witness bound to a power sweep
/// `density_over_powers(p, coeffs, ..)`: `p` odd, `p` prime to the last
/// coefficient, and `p` generating the units of `Z/eta`.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessBoundHypotheses {
    pub p_odd: bool,
    pub p_coprime_last: bool,
    pub p_generates_units: bool,
    pub applicable: bool,
    pub bound: Option<BigRational>,
}

pub fn witness_bound_hypotheses(
    coeffs: &[i64],
    p: u64,
    w: &HypWitness,
) -> Result<WitnessBoundHypotheses> {
    if !arith::is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let p_odd = p > 2;
    let last = coeffs
        .last()
        .ok_or_else(|| Error::InvalidInput("empty coefficient vector".into()))?;
    let p_coprime_last = v_ell(&BigInt::from(*last), p) == Some(0);
    let p_generates_units = if w.eta().is_zero() {
        false
    } else if !BigUint::from(p).gcd(w.eta()).is_one() {
        false
    } else {
        arith::is_primitive_root(p, w.eta())?
    };
    let applicable = p_odd && p_coprime_last && p_generates_units;
    Ok(WitnessBoundHypotheses {
        p_odd,
        p_coprime_last,
        p_generates_units,
        applicable,
        bound: witness_density_bound(w).ok(),
    })
}
