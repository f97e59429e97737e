//! Weil polynomials of isogeny classes: construction from the short
//! coefficient vector, evaluation at 1 (the number of rational points),
//! products of classes over the same field, and the cyclicity criterion
//! `gcd(f(1)/rad(f(1)), f'(1)) = 1`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::poly::IntPoly;
use crate::{Error, Result};

/// A finite field size `q = p^r`, with the integral square root of `q`
/// carried along whenever `r` is even.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSize {
    p: u64,
    r: u32,
    q: BigUint,
    sqrt_q: Option<BigUint>,
}

impl FieldSize {
    pub fn new(p: u64, r: u32) -> Result<Self> {
        if !arith::is_prime_u64(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        if r == 0 {
            return Err(Error::InvalidInput("field degree must be positive".into()));
        }
        let q = BigUint::from(p).pow(r);
        let sqrt_q = (r % 2 == 0).then(|| BigUint::from(p).pow(r / 2));
        Ok(FieldSize { p, r, q, sqrt_q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> &BigUint {
        &self.q
    }

    pub fn q_bigint(&self) -> BigInt {
        BigInt::from(self.q.clone())
    }

    pub fn q_i128(&self) -> Option<i128> {
        self.q.to_i128()
    }

    pub fn q_f64(&self) -> f64 {
        self.q.to_f64().unwrap_or(f64::INFINITY)
    }

    /// Present exactly when `r` is even.
    pub fn sqrt_q(&self) -> Option<&BigUint> {
        self.sqrt_q.as_ref()
    }
}

impl fmt::Display for FieldSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{} (q={})", self.p, self.r, self.q)
        }
    }
}

/// All prime powers `q <= limit`, sorted by `q`.
pub fn prime_powers_up_to(limit: u64) -> Vec<FieldSize> {
    let mut out = Vec::new();
    for p in arith::primes_up_to(limit) {
        let mut q = p as u128;
        let mut r = 1u32;
        while q <= limit as u128 {
            out.push(FieldSize::new(p, r).expect("sieve primes are prime"));
            q *= p as u128;
            r += 1;
        }
    }
    out.sort_by(|a, b| a.q.cmp(&b.q));
    out
}

/// Full ascending coefficient list (length `2g+1`) of the palindromic
/// polynomial `t^2g + a_1 t^(2g-1) + ... + a_g t^g + a_(g-1) x t^(g-1) +
/// ... + a_1 x^(g-1) t + x^g`, where `coeffs = (a_1..a_g)`. `x` need not be
/// a prime power here; [`control_value`] evaluates it at arbitrary points.
pub(crate) fn palindromic_coeffs(g: usize, x: &BigInt, coeffs: &[BigInt]) -> Vec<BigInt> {
    debug_assert_eq!(coeffs.len(), g);
    let mut full = vec![BigInt::zero(); 2 * g + 1];
    full[2 * g] = BigInt::one();
    for (i, a) in coeffs.iter().enumerate() {
        full[2 * g - (i + 1)] = a.clone();
    }
    let mut xpow = BigInt::one();
    for j in 1..=g {
        xpow *= x;
        // a_(g-j) with a_0 = 1
        let a = if j == g {
            BigInt::one()
        } else {
            coeffs[g - j - 1].clone()
        };
        full[g - j] = a * &xpow;
    }
    full
}

/// An isogeny class of `g`-dimensional abelian varieties over `F_q`,
/// identified by the short coefficient vector `(a_1..a_g)` of its Weil
/// polynomial. Construction performs no validity judgment; see the
/// `validity` module for that.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsogenyClass {
    g: usize,
    field: FieldSize,
    coeffs: Vec<BigInt>,
    full: Vec<BigInt>,
}

impl IsogenyClass {
    pub fn new(g: usize, p: u64, r: u32, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != g {
            return Err(Error::CoefficientCount {
                expected: g,
                got: coeffs.len(),
            });
        }
        Self::from_field(FieldSize::new(p, r)?, coeffs)
    }

    pub fn from_field(field: FieldSize, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::UnsupportedDimension {
                g: 0,
                reason: "dimension must be at least 1",
            });
        }
        let g = coeffs.len();
        let full = palindromic_coeffs(g, &field.q_bigint(), &coeffs);
        Ok(IsogenyClass {
            g,
            field,
            coeffs,
            full,
        })
    }

    /// Convenience constructor from machine-sized coefficients.
    pub fn from_i64(g: usize, field: &FieldSize, coeffs: &[i64]) -> Result<Self> {
        if coeffs.len() != g {
            return Err(Error::CoefficientCount {
                expected: g,
                got: coeffs.len(),
            });
        }
        Self::from_field(field.clone(), coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn g(&self) -> usize {
        self.g
    }

    pub fn field(&self) -> &FieldSize {
        &self.field
    }

    /// The short coefficient vector `(a_1..a_g)`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Ascending coefficients of the full degree-`2g` Weil polynomial.
    pub fn full_coeffs(&self) -> &[BigInt] {
        &self.full
    }

    /// The middle coefficient `a_g`.
    pub fn middle_coefficient(&self) -> &BigInt {
        &self.coeffs[self.g - 1]
    }

    pub fn weil_polynomial(&self) -> IntPoly {
        IntPoly::new(self.full.clone())
    }

    /// `f(1)`: the common number of rational points of the varieties in
    /// the class.
    pub fn point_count(&self) -> BigInt {
        self.full.iter().sum()
    }

    /// `f'(1)`.
    pub fn derivative_at_one(&self) -> BigInt {
        self.full
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .sum()
    }

    /// The cyclicity criterion: the class is cyclic exactly when
    /// `f(1)/rad(f(1))` and `f'(1)` are coprime. A point count of 1 is the
    /// trivial (cyclic) group; a nonpositive point count signals an invalid
    /// class and is rejected.
    pub fn cyclicity(&self) -> Result<CyclicityVerdict> {
        let order = self.point_count();
        if !order.is_positive() {
            return Err(Error::InvalidClass(format!(
                "point count {order} is not positive"
            )));
        }
        let derivative = self.derivative_at_one();
        let order_cofactor = arith::radical_cofactor(&order)?;
        // gcd(x, 0) = x, so f'(1) = 0 is cyclic only for squarefree order.
        let witness_gcd = order_cofactor.gcd(derivative.magnitude());
        let cyclic = witness_gcd.is_one();
        Ok(CyclicityVerdict {
            order,
            derivative,
            order_cofactor,
            witness_gcd,
            cyclic,
        })
    }

    /// Product class over the same field; the Weil polynomial is the
    /// polynomial product and the dimension adds.
    pub fn product(&self, other: &IsogenyClass) -> Result<IsogenyClass> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let product = self.weil_polynomial().mul(&other.weil_polynomial());
        let g = self.g + other.g;
        let full = product.coeffs();
        debug_assert_eq!(full.len(), 2 * g + 1);
        let coeffs: Vec<BigInt> = (1..=g).map(|i| full[2 * g - i].clone()).collect();
        let class = IsogenyClass::from_field(self.field.clone(), coeffs)?;
        debug_assert_eq!(class.full_coeffs(), product.coeffs());
        Ok(class)
    }
}

impl fmt::Display for IsogenyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.full.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.magnitude();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag != &BigUint::one() || k == 0 {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The verdict of the cyclicity criterion for one class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicityVerdict {
    /// `f(1)`, the number of rational points.
    pub order: BigInt,
    /// `f'(1)`.
    pub derivative: BigInt,
    /// `f(1)` divided by its radical.
    pub order_cofactor: BigUint,
    /// `gcd(order_cofactor, |f'(1)|)`; the class is cyclic iff this is 1.
    pub witness_gcd: BigUint,
    pub cyclic: bool,
}

/// `g*f(1) - f'(1)` for the palindromic polynomial with coefficient prefix
/// `(a_1..a_(g-1))` over the (arbitrary, not necessarily prime-power) base
/// value `x`. The free last coefficient cancels, so the value is
/// independent of it; only primes dividing this value can divide `f(1)`
/// and `f'(1)` simultaneously as the last coefficient varies.
pub fn control_value(g: usize, x: &BigInt, prefix: &[BigInt]) -> BigInt {
    assert!(g >= 1, "dimension must be positive");
    assert_eq!(prefix.len(), g - 1, "prefix must have g-1 coefficients");
    control_value_with_tail(g, x, prefix, &BigInt::zero())
}

pub(crate) fn control_value_with_tail(
    g: usize,
    x: &BigInt,
    prefix: &[BigInt],
    tail: &BigInt,
) -> BigInt {
    let mut coeffs = prefix.to_vec();
    coeffs.push(tail.clone());
    let full = palindromic_coeffs(g, x, &coeffs);
    let f1: BigInt = full.iter().sum();
    let df1: BigInt = full
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigInt::from(k))
        .sum();
    BigInt::from(g as u64) * f1 - df1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(g: usize, p: u64, r: u32, coeffs: &[i64]) -> IsogenyClass {
        let field = FieldSize::new(p, r).unwrap();
        IsogenyClass::from_i64(g, &field, coeffs).unwrap()
    }

    #[test]
    fn field_size_basics() {
        let f = FieldSize::new(23, 3).unwrap();
        assert_eq!(f.q(), &BigUint::from(12167u32));
        assert_eq!(f.sqrt_q(), None);
        let f = FieldSize::new(3, 4).unwrap();
        assert_eq!(f.sqrt_q(), Some(&BigUint::from(9u32)));
        assert!(FieldSize::new(4, 1).is_err());
        assert!(FieldSize::new(5, 0).is_err());
    }

    #[test]
    fn full_coefficients_follow_the_palindromic_shape() {
        let c = class(1, 5, 1, &[-1]);
        assert_eq!(
            c.full_coeffs(),
            &[BigInt::from(5), BigInt::from(-1), BigInt::from(1)]
        );
        let c = class(2, 2, 2, &[5, 13]);
        assert_eq!(
            c.full_coeffs(),
            &[16, 20, 13, 5, 1].map(BigInt::from)
        );
        let c = class(2, 23, 3, &[438, 72293]);
        assert_eq!(
            c.full_coeffs(),
            &[
                BigInt::from(23i64.pow(6)),
                BigInt::from(438i64 * 23i64.pow(3)),
                BigInt::from(72293),
                BigInt::from(438),
                BigInt::from(1)
            ]
        );
    }

    #[test]
    fn point_counts() {
        assert_eq!(
            class(2, 23, 3, &[438, 72293]).point_count(),
            BigInt::from(153437767i64)
        );
        assert_eq!(class(1, 5, 1, &[-1]).point_count(), BigInt::from(5));
        assert_eq!(class(2, 2, 2, &[5, 13]).point_count(), BigInt::from(55));
    }

    #[test]
    fn derivatives_at_one() {
        assert_eq!(
            class(2, 23, 3, &[438, 72293]).derivative_at_one(),
            BigInt::from(5475050i64)
        );
        // g=1: f'(1) = 2 + a
        for a in -4i64..=4 {
            assert_eq!(
                class(1, 5, 1, &[a]).derivative_at_one(),
                BigInt::from(2 + a)
            );
        }
        assert_eq!(class(2, 5, 1, &[-4, 11]).derivative_at_one(), BigInt::from(-6));
    }

    #[test]
    fn cyclicity_examples() {
        let v = class(2, 23, 3, &[438, 72293]).cyclicity().unwrap();
        assert!(!v.cyclic);
        assert!((&v.witness_gcd % 7u32).is_zero());
        assert!((v.order.magnitude() % 49u32).is_zero());
        assert!((v.derivative.magnitude() % 7u32).is_zero());

        let v = class(2, 2, 2, &[5, 13]).cyclicity().unwrap();
        assert!(v.cyclic);
        assert!(v.order_cofactor.is_one());

        let v = class(1, 5, 2, &[-8]).cyclicity().unwrap();
        assert_eq!(v.order, BigInt::from(18));
        assert_eq!(v.witness_gcd, BigUint::from(3u32));
        assert!(!v.cyclic);
    }

    #[test]
    fn trivial_group_is_cyclic() {
        // Over F_4 the squared-maximal trace gives f(1) = 1.
        let v = class(1, 2, 2, &[-4]).cyclicity().unwrap();
        assert_eq!(v.order, BigInt::one());
        assert!(v.cyclic);
    }

    #[test]
    fn product_classes() {
        let e1 = class(1, 3, 2, &[-5]);
        let e2 = class(1, 3, 2, &[-4]);
        let p = e1.product(&e2).unwrap();
        assert_eq!(p.g(), 2);
        assert_eq!(p.point_count(), BigInt::from(30));
        assert_eq!(p.derivative_at_one(), BigInt::from(-28));

        let emax = class(1, 3, 2, &[-6]);
        let sq = emax.product(&emax).unwrap();
        assert_eq!(sq.point_count(), BigInt::from(16));

        assert_eq!(
            p.point_count(),
            e1.point_count() * e2.point_count()
        );

        let other_field = class(1, 5, 1, &[-1]);
        assert_eq!(e1.product(&other_field), Err(Error::FieldMismatch));
    }

    #[test]
    fn control_values() {
        assert_eq!(control_value(1, &BigInt::from(7), &[]), BigInt::from(6));
        assert_eq!(
            control_value(2, &BigInt::from(5), &[BigInt::from(-4)]),
            BigInt::from(32)
        );
        // Independence of the omitted coefficient.
        for z in [0i64, 1, 17] {
            assert_eq!(
                control_value_with_tail(
                    2,
                    &BigInt::from(11),
                    &[BigInt::from(3)],
                    &BigInt::from(z)
                ),
                control_value(2, &BigInt::from(11), &[BigInt::from(3)])
            );
        }
    }

    #[test]
    fn prime_power_listing() {
        let qs = prime_powers_up_to(32);
        let values: Vec<u64> = qs
            .iter()
            .map(|f| f.q().to_u64().unwrap())
            .collect();
        assert_eq!(
            values,
            vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32]
        );
    }

    #[test]
    fn display_renders_polynomials() {
        let c = class(1, 5, 1, &[-1]);
        assert_eq!(c.to_string(), "t^2 - t + 5");
        let c = class(2, 2, 2, &[5, 13]);
        assert_eq!(c.to_string(), "t^4 + 5t^3 + 13t^2 + 20t + 16");
    }
}
