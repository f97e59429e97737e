//! Which coefficient vectors define an isogeny class: exact tests for
//! curves (Waterhouse's admissible-trace conditions) and surfaces (Rück's
//! theorem, with p-adic square and root subchecks, or the ordinary sieve),
//! and a necessary-only numeric root-modulus test for higher dimension.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{self, v_ell};
use crate::poly::IntPoly;
use crate::weil::{FieldSize, IsogenyClass};
use crate::{Error, Result};

/// Which membership notion a surface check uses. The full set of surface
/// classes is not exactly characterized here, so every enumeration and
/// density below carries one of these labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// Rück's conditions: endomorphism algebra is a field.
    RueckField,
    /// Rück's condition 1 bounds plus `p` not dividing the middle
    /// coefficient.
    Ordinary,
    /// Union of the two.
    #[default]
    Either,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::RueckField => "rueck-field",
            Mode::Ordinary => "ordinary",
            Mode::Either => "either",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rueck-field" | "rueck" => Ok(Mode::RueckField),
            "ordinary" => Ok(Mode::Ordinary),
            "either" => Ok(Mode::Either),
            other => Err(Error::InvalidInput(format!(
                "unknown mode {other:?}; expected rueck-field, ordinary or either"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certainty {
    Exact,
    NecessaryOnly,
}

impl fmt::Display for Certainty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certainty::Exact => "exact",
            Certainty::NecessaryOnly => "necessary-only",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidityVerdict {
    pub valid: bool,
    pub certainty: Certainty,
    pub reason: String,
    pub ordinary: bool,
}

/// Which of Rück's third-condition cases applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case3 {
    A,
    B,
    C,
    None,
}

impl fmt::Display for Case3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case3::A => "3a",
            Case3::B => "3b",
            Case3::C => "3c",
            Case3::None => "none",
        })
    }
}

/// Per-condition verdicts for a surface pair `(a, b)` under Rück's theorem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RueckReport {
    /// `|a| < 4*sqrt(q)` and `2|a|sqrt(q) - 2q < b < a^2/4 + 2q`.
    pub bounds_ok: bool,
    /// `a^2 - 4b + 8q`.
    pub delta: BigInt,
    pub delta_nonsquare: bool,
    /// First of the three subcases that holds, in the order 3a, 3b, 3c.
    pub case3: Case3,
    pub case3_ok: bool,
    pub valid: bool,
}

/// Ordinariness via the middle Weil coefficient being prime to `p`.
pub fn is_ordinary(class: &IsogenyClass) -> bool {
    v_ell(class.middle_coefficient(), class.field().p()) == Some(0)
}

/// Waterhouse's conditions for a curve coefficient `a` (the trace is `-a`;
/// the conditions are symmetric in the sign).
pub fn validate_curve(field: &FieldSize, a: &BigInt) -> ValidityVerdict {
    let p = field.p();
    let r = field.r();
    let q = field.q_bigint();
    let ordinary = v_ell(a, p) == Some(0);
    let within_bound = a * a <= 4 * &q;
    let branch: Option<&'static str> = if !within_bound {
        None
    } else if ordinary {
        Some("ordinary: gcd(a, p) = 1")
    } else if r % 2 == 0 {
        let sqrt_q = BigInt::from(field.sqrt_q().expect("r even").clone());
        if *a.magnitude() == *(2 * &sqrt_q).magnitude() {
            Some("supersingular: a = ±2√q with r even")
        } else if *a.magnitude() == *sqrt_q.magnitude() && p % 3 != 1 {
            Some("supersingular: a = ±√q, r even, p ≢ 1 mod 3")
        } else if a.is_zero() && p % 4 != 1 {
            Some("supersingular: a = 0, r even, p ≢ 1 mod 4")
        } else {
            None
        }
    } else {
        // r odd
        if a.is_zero() {
            Some("supersingular: a = 0 with r odd")
        } else if (p == 2 || p == 3)
            && *a.magnitude() == BigInt::from(p).pow((r + 1) / 2).magnitude().clone()
        {
            Some("supersingular: a = ±p^((r+1)/2), r odd, p ∈ {2,3}")
        } else {
            None
        }
    };
    match branch {
        Some(reason) => ValidityVerdict {
            valid: true,
            certainty: Certainty::Exact,
            reason: reason.to_string(),
            ordinary,
        },
        None => ValidityVerdict {
            valid: false,
            certainty: Certainty::Exact,
            reason: if within_bound {
                "no Waterhouse branch applies".to_string()
            } else {
                "a^2 > 4q violates the Weil bound".to_string()
            },
            ordinary,
        },
    }
}

/// Whether `z` is a square in the `p`-adic integers: even valuation and a
/// unit part that is a quadratic residue mod `p` (or `1 mod 8` for `p=2`).
/// Zero counts as a square.
pub fn is_padic_square(z: &BigInt, p: u64) -> bool {
    if z.is_zero() {
        return true;
    }
    let v = v_ell(z, p).expect("nonzero");
    if v % 2 != 0 {
        return false;
    }
    let unit = z / BigInt::from(p).pow(v);
    if p == 2 {
        unit.mod_floor(&BigInt::from(8)) == BigInt::one()
    } else {
        let residue = unit
            .mod_floor(&BigInt::from(p))
            .to_u64()
            .expect("residue fits u64");
        arith::pow_mod(residue, (p - 1) / 2, p) == 1
    }
}

/// Precision exponent `K` used by the `p`-adic root search: one more than
/// the `p`-valuation of the discriminant of the squarefree part. If a
/// monic squarefree polynomial has no root in `Z_p`, its values on `Z_p`
/// have valuation at most `v_p(disc)`, so a root mod `p^K` certifies a
/// true root and absence certifies there is none.
pub fn padic_root_precision(f: &IntPoly, p: u64) -> u32 {
    let sf = f.squarefree_part();
    let disc = sf.discriminant();
    v_ell(&disc, p).unwrap_or(0) + 1
}

/// Whether the monic integer polynomial `f` has a root in the `p`-adic
/// integers, decided by exhaustive residue search mod `p^K` (digit-by-digit
/// lifting) on the squarefree part, with `K` from [`padic_root_precision`].
pub fn poly_has_padic_root(f: &IntPoly, p: u64) -> bool {
    assert_eq!(
        f.leading(),
        Some(&BigInt::one()),
        "p-adic root search expects a monic polynomial"
    );
    let sf = f.squarefree_part();
    if sf.degree() == Some(0) {
        return false;
    }
    let precision = padic_root_precision(f, p);
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut residues: Vec<BigInt> = (0..p)
        .map(BigInt::from)
        .filter(|x| sf.eval(x).mod_floor(&pb).is_zero())
        .collect();
    for _ in 1..precision {
        let next = &modulus * &pb;
        let mut lifted = Vec::new();
        for r in &residues {
            for c in 0..p {
                let x = r + BigInt::from(c) * &modulus;
                if sf.eval(&x).mod_floor(&next).is_zero() {
                    lifted.push(x);
                }
            }
        }
        residues = lifted;
        if residues.is_empty() {
            return false;
        }
        modulus = next;
    }
    !residues.is_empty()
}

/// [`poly_has_padic_root`] applied to the Weil polynomial of a class at its
/// own characteristic.
pub fn has_padic_root(class: &IsogenyClass) -> bool {
    poly_has_padic_root(&class.weil_polynomial(), class.field().p())
}

fn v_at_least_half(v: Option<u32>, r: u32) -> bool {
    v.map_or(true, |v| 2 * v >= r)
}

fn v_at_least(v: Option<u32>, r: u32) -> bool {
    v.map_or(true, |v| v >= r)
}

/// Rück/ordinary membership for a surface coefficient pair `(a, b)`.
///
/// `rueck-field` checks Rück's three conditions exactly as stated (strict
/// bounds, integer-nonsquare discriminant, and one of the three p-adic
/// cases). `ordinary` checks the condition-1 bounds plus `p` not dividing
/// `b`. `either` is their union.
pub fn validate_surface(
    field: &FieldSize,
    a: &BigInt,
    b: &BigInt,
    mode: Mode,
) -> (ValidityVerdict, RueckReport) {
    let p = field.p();
    let r = field.r();
    let q = field.q_bigint();

    // Condition 1 with sqrt(q) eliminated: |a| < 4√q  ⟺  a² < 16q;
    // 2|a|√q - 2q < b  ⟺  b + 2q > 0 and (b+2q)² > 4a²q;
    // b < a²/4 + 2q  ⟺  Δ = a² - 4b + 8q > 0.
    let a2 = a * a;
    let b_plus_2q = b + 2 * &q;
    let delta = &a2 - 4 * b + 8 * &q;
    let bounds_ok = a2 < 16 * &q
        && b_plus_2q.is_positive()
        && &b_plus_2q * &b_plus_2q > 4 * &a2 * &q
        && delta.is_positive();

    let delta_nonsquare = !arith::is_perfect_square(&delta);

    let va = v_ell(a, p);
    let vb = v_ell(b, p);
    let ordinary = vb == Some(0);

    let case3a = va == Some(0) && v_at_least_half(vb, r) && {
        let d = &b_plus_2q * &b_plus_2q - 4 * &q * &a2;
        !is_padic_square(&d, p)
    };
    let case3 = if case3a {
        Case3::A
    } else if ordinary {
        Case3::B
    } else if v_at_least_half(va, r) && v_at_least(vb, r) {
        let f = IntPoly::new(crate::weil::palindromic_coeffs(
            2,
            &q,
            &[a.clone(), b.clone()],
        ));
        if poly_has_padic_root(&f, p) {
            Case3::None
        } else {
            Case3::C
        }
    } else {
        Case3::None
    };
    let case3_ok = case3 != Case3::None;

    let rueck_valid = bounds_ok && delta_nonsquare && case3_ok;
    let report = RueckReport {
        bounds_ok,
        delta,
        delta_nonsquare,
        case3,
        case3_ok,
        valid: rueck_valid,
    };

    let ordinary_valid = bounds_ok && ordinary;
    let (valid, reason) = match mode {
        Mode::RueckField => (
            rueck_valid,
            if rueck_valid {
                format!("Rück conditions hold (case {})", report.case3)
            } else if !bounds_ok {
                "Rück condition 1 bounds fail".to_string()
            } else if !delta_nonsquare {
                "Δ = a² - 4b + 8q is a perfect square".to_string()
            } else {
                "no Rück case-3 branch applies".to_string()
            },
        ),
        Mode::Ordinary => (
            ordinary_valid,
            if ordinary_valid {
                "condition-1 bounds hold and p ∤ b".to_string()
            } else if !bounds_ok {
                "condition-1 bounds fail".to_string()
            } else {
                "p divides b".to_string()
            },
        ),
        Mode::Either => (
            rueck_valid || ordinary_valid,
            if rueck_valid {
                format!("Rück conditions hold (case {})", report.case3)
            } else if ordinary_valid {
                "ordinary: condition-1 bounds hold and p ∤ b".to_string()
            } else {
                "neither Rück-field nor ordinary membership".to_string()
            },
        ),
    };
    (
        ValidityVerdict {
            valid,
            certainty: Certainty::Exact,
            reason,
            ordinary,
        },
        report,
    )
}

/// Relative tolerance for the numeric root-modulus check above dimension 2.
const ROOT_MODULUS_TOLERANCE: f64 = 1e-9;

/// Validity dispatch: exact for `g <= 2`, necessary-only (all complex
/// roots on `|t| = sqrt(q)`) above that.
pub fn validate(class: &IsogenyClass, mode: Mode) -> ValidityVerdict {
    match class.g() {
        1 => validate_curve(class.field(), &class.coeffs()[0]),
        2 => validate_surface(class.field(), &class.coeffs()[0], &class.coeffs()[1], mode).0,
        _ => {
            let sqrt_q = class.field().q_f64().sqrt();
            let roots = class.weil_polynomial().complex_roots();
            let worst = roots
                .iter()
                .map(|z| (z.norm() - sqrt_q).abs() / sqrt_q)
                .fold(0.0f64, f64::max);
            let valid = !roots.is_empty() && worst <= ROOT_MODULUS_TOLERANCE;
            ValidityVerdict {
                valid,
                certainty: Certainty::NecessaryOnly,
                reason: format!(
                    "largest relative deviation of a root modulus from √q: {worst:.3e}"
                ),
                ordinary: is_ordinary(class),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn field(p: u64, r: u32) -> FieldSize {
        FieldSize::new(p, r).unwrap()
    }

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn ordinariness_examples() {
        let c = IsogenyClass::from_i64(2, &field(23, 3), &[438, 72293]).unwrap();
        assert!(is_ordinary(&c));
        let c = IsogenyClass::from_i64(2, &field(2, 2), &[5, 13]).unwrap();
        assert!(is_ordinary(&c));
        let c = IsogenyClass::from_i64(1, &field(3, 2), &[-6]).unwrap();
        assert!(!is_ordinary(&c));
    }

    #[test]
    fn curve_validity_examples() {
        let v = validate_curve(&field(5, 1), &big(-1));
        assert!(v.valid && v.ordinary);
        let v = validate_curve(&field(3, 2), &big(-6));
        assert!(v.valid && !v.ordinary);
        let v = validate_curve(&field(5, 1), &big(5));
        assert!(!v.valid);
        // Supersingular branches.
        assert!(validate_curve(&field(5, 1), &big(0)).valid); // r odd, a = 0
        assert!(validate_curve(&field(2, 3), &big(4)).valid); // ±p^((r+1)/2)
        assert!(!validate_curve(&field(5, 1), &big(-5)).valid); // p | a, no branch
        assert!(validate_curve(&field(3, 2), &big(3)).valid); // ±√q, p ≢ 1 mod 3
        assert!(!validate_curve(&field(7, 2), &big(7)).valid); // p ≡ 1 mod 3
        assert!(!validate_curve(&field(5, 2), &big(0)).valid); // p ≡ 1 mod 4
    }

    #[test]
    fn padic_square_examples() {
        assert!(is_padic_square(&big(25), 5));
        assert!(!is_padic_square(&big(5), 5));
        assert!(is_padic_square(&big(17), 2));
        assert!(is_padic_square(&big(0), 7));
        assert!(is_padic_square(&big(-4), 5)); // -1 is a square mod 5
        assert!(!is_padic_square(&big(-1), 2)); // -1 ≡ 7 mod 8
        assert!(!is_padic_square(&big(8), 2));
        assert!(is_padic_square(&big(16), 2));
    }

    #[test]
    fn padic_square_brute_force_agreement() {
        // z is a square in Z_p iff it is a square mod p^k for k past the
        // valuation; search with enough precision to be decisive.
        for p in [2u64, 3, 5] {
            for z in -100i64..=100 {
                let z = big(z);
                let k = v_ell(&z, p).unwrap_or(0) + 3;
                let modulus = BigInt::from(p).pow(k);
                let target = z.mod_floor(&modulus);
                let brute = (0..p.pow(k))
                    .any(|x| (big(x as i64) * big(x as i64)).mod_floor(&modulus) == target);
                assert_eq!(is_padic_square(&z, p), brute, "z={z} p={p}");
            }
        }
    }

    #[test]
    fn padic_root_examples() {
        // t^2 - t + 5 factors as t(t-1) mod 5 and the t ≡ 0 branch lifts:
        // f(30) = 875 = 5^3·7, and in fact a true 5-adic root exists (the
        // Newton polygon has slopes 0 and -1, both integral).
        let f = IntPoly::new(vec![big(5), big(-1), big(1)]);
        assert!(poly_has_padic_root(&f, 5));

        // (t-3)^2 has the integer root 3.
        let f = IntPoly::new(vec![big(9), big(-6), big(1)]);
        assert!(poly_has_padic_root(&f, 3));

        // The q=4 extremal surface polynomial has no 2-adic root.
        let f = IntPoly::new(vec![big(16), big(20), big(13), big(5), big(1)]);
        assert!(!poly_has_padic_root(&f, 2));

        // t^2 - 5 over Z_5: odd valuation, no root.
        let f = IntPoly::new(vec![big(-5), big(0), big(1)]);
        assert!(!poly_has_padic_root(&f, 5));

        // t^2 + 1 over Z_5 has a root (5 ≡ 1 mod 4), not over Z_3.
        let f = IntPoly::new(vec![big(1), big(0), big(1)]);
        assert!(poly_has_padic_root(&f, 5));
        assert!(!poly_has_padic_root(&f, 3));
    }

    #[test]
    fn surface_validity_examples() {
        let f4 = field(2, 2);
        let (v, rep) = validate_surface(&f4, &big(5), &big(13), Mode::RueckField);
        assert!(v.valid);
        assert_eq!(rep.case3, Case3::B);
        assert_eq!(rep.delta, big(5));
        assert!(rep.delta_nonsquare);

        let (v, rep) = validate_surface(&f4, &big(5), &big(14), Mode::RueckField);
        assert!(!v.valid);
        assert_eq!(rep.delta, big(1));
        assert!(!rep.delta_nonsquare);

        let (v, _) = validate_surface(&field(5, 1), &big(-4), &big(11), Mode::Ordinary);
        assert!(v.valid && v.ordinary);
    }

    #[test]
    fn surface_case3c_branch() {
        // (0, 0) over F_3: v_3(a), v_3(b) infinite, f = t^4 + 9 has no
        // 3-adic root (fractional valuation would be needed), so 3c holds.
        let (v, rep) = validate_surface(&field(3, 1), &big(0), &big(0), Mode::RueckField);
        assert!(v.valid);
        assert_eq!(rep.case3, Case3::C);
        assert!(!v.ordinary);
        // ... but the ordinary sieve rejects it.
        let (v, _) = validate_surface(&field(3, 1), &big(0), &big(0), Mode::Ordinary);
        assert!(!v.valid);
        // Either-mode accepts.
        let (v, _) = validate_surface(&field(3, 1), &big(0), &big(0), Mode::Either);
        assert!(v.valid);
    }

    #[test]
    fn dispatch_and_dimension_three() {
        // Dispatch agrees with the direct curve check.
        for a in -4i64..=4 {
            let class = IsogenyClass::from_i64(1, &field(5, 1), &[a]).unwrap();
            assert_eq!(
                validate(&class, Mode::Either).valid,
                validate_curve(&field(5, 1), &big(a)).valid
            );
        }

        // Product of three curve classes: all roots on |t| = √5.
        let e = IsogenyClass::from_i64(1, &field(5, 1), &[-1]).unwrap();
        let e2 = IsogenyClass::from_i64(1, &field(5, 1), &[1]).unwrap();
        let e3 = IsogenyClass::from_i64(1, &field(5, 1), &[2]).unwrap();
        let threefold = e.product(&e2).unwrap().product(&e3).unwrap();
        let v = validate(&threefold, Mode::Either);
        assert!(v.valid);
        assert_eq!(v.certainty, Certainty::NecessaryOnly);

        // Perturbing a coefficient moves a root off the circle.
        let mut coeffs: Vec<BigInt> = threefold.coeffs().to_vec();
        coeffs[2] += 1;
        let perturbed = IsogenyClass::new(3, 5, 1, coeffs).unwrap();
        assert!(!validate(&perturbed, Mode::Either).valid);
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("rueck-field".parse::<Mode>().unwrap(), Mode::RueckField);
        assert_eq!("ordinary".parse::<Mode>().unwrap(), Mode::Ordinary);
        assert_eq!("either".parse::<Mode>().unwrap(), Mode::Either);
        assert!("both".parse::<Mode>().is_err());
        assert_eq!(Mode::RueckField.to_string(), "rueck-field");
    }
}
