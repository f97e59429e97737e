//! Dense integer polynomials: just enough machinery for Weil polynomials —
//! evaluation, products, squarefree parts, discriminants and numeric roots.
//!
//! Coefficients are stored in ascending order of degree (`coeffs[i]` is the
//! coefficient of `t^i`); the zero polynomial is the empty vector.

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        IntPoly::new(coeffs)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Gcd of the coefficient magnitudes; 0 for the zero polynomial.
    pub fn content(&self) -> BigUint {
        self.coeffs
            .iter()
            .fold(BigUint::zero(), |acc, c| acc.gcd(c.magnitude()))
    }

    /// Content-free copy with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let content = BigInt::from(self.content());
        let mut coeffs: Vec<BigInt> = self.coeffs.iter().map(|c| c / &content).collect();
        if coeffs.last().unwrap().is_negative() {
            for c in &mut coeffs {
                *c = -&*c;
            }
        }
        IntPoly::new(coeffs)
    }

    /// The squarefree polynomial with the same complex roots: the primitive
    /// part of `f / gcd(f, f')`. Monic input gives monic output.
    pub fn squarefree_part(&self) -> IntPoly {
        if self.degree().map_or(true, |d| d == 0) {
            return self.primitive_part();
        }
        let g = poly_gcd(self, &self.derivative());
        if g.degree() == Some(0) {
            return self.primitive_part();
        }
        let (q, r) = rational_div_rem(&to_rational(self), &to_rational(&g));
        debug_assert!(r.iter().all(|c| c.is_zero()));
        from_rational(&q).primitive_part()
    }

    /// `(-1)^(n(n-1)/2) * Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> BigInt {
        let n = match self.degree() {
            None | Some(0) => return BigInt::zero(),
            Some(1) => return BigInt::one(),
            Some(n) => n,
        };
        let res = resultant(self, &self.derivative());
        let signed = if (n * (n - 1) / 2) % 2 == 0 { res } else { -res };
        let (q, r) = signed.div_rem(self.leading().unwrap());
        debug_assert!(r.is_zero());
        q
    }

    /// Numeric roots (of the squarefree part, so multiplicities collapse to
    /// simple roots and the iteration keeps full accuracy).
    pub fn complex_roots(&self) -> Vec<Complex64> {
        let sf = self.squarefree_part();
        let coeffs: Vec<f64> = sf
            .coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::MAX))
            .collect();
        durand_kerner(&coeffs)
    }
}

fn to_rational(f: &IntPoly) -> Vec<BigRational> {
    f.coeffs
        .iter()
        .map(|c| BigRational::from(c.clone()))
        .collect()
}

fn from_rational(f: &[BigRational]) -> IntPoly {
    // Clear denominators, then reduce content.
    let mut lcm = BigInt::one();
    for c in f {
        lcm = lcm.lcm(c.denom());
    }
    let coeffs = f
        .iter()
        .map(|c| (c * BigRational::from(lcm.clone())).to_integer())
        .collect();
    IntPoly::new(coeffs)
}

fn trim(f: &mut Vec<BigRational>) {
    while f.last().map_or(false, |c| c.is_zero()) {
        f.pop();
    }
}

/// Euclidean division over the rationals: returns `(q, r)` with
/// `a = q*b + r` and `deg r < deg b`.
fn rational_div_rem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    assert!(!b.is_empty(), "division by zero polynomial");
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let factor = r.last().unwrap() / &lead;
        q[shift] = factor.clone();
        for (i, c) in b.iter().enumerate() {
            let delta = c * &factor;
            r[shift + i] -= delta;
        }
        trim(&mut r);
        if r.len() <= shift {
            // quotient term eliminated the leading block; keep reducing
            continue;
        }
    }
    (q, r)
}

/// Primitive gcd with positive leading coefficient (Euclid over Q, then
/// denominators cleared). Returns a degree-0 unit when coprime.
pub fn poly_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut x = to_rational(a);
    let mut y = to_rational(b);
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = rational_div_rem(&x, &y);
        x = y;
        y = r;
    }
    if x.is_empty() {
        IntPoly::zero()
    } else {
        from_rational(&x).primitive_part()
    }
}

/// Resultant of two integer polynomials via fraction-free (Bareiss)
/// elimination of the Sylvester matrix.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> BigInt {
    let (n, m) = match (f.degree(), g.degree()) {
        (Some(n), Some(m)) if n > 0 || m > 0 => (n, m),
        (Some(_), Some(_)) => return BigInt::one(), // two constants
        _ => return BigInt::zero(),
    };
    if n == 0 {
        return f.coeffs[0].pow(m as u32);
    }
    if m == 0 {
        return g.coeffs[0].pow(n as u32);
    }
    let size = n + m;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for row in 0..m {
        for (k, c) in f.coeffs.iter().rev().enumerate() {
            mat[row][row + k] = c.clone();
        }
    }
    for row in 0..n {
        for (k, c) in g.coeffs.iter().rev().enumerate() {
            mat[m + row][row + k] = c.clone();
        }
    }
    bareiss_determinant(mat)
}

fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero());
                m[i][j] = q;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Durand–Kerner iteration for all complex roots of a polynomial with the
/// given ascending real coefficients. Intended for squarefree inputs of
/// small degree; roots of Weil polynomials sit on a circle, so the initial
/// guesses are spread on the circle of radius `|c0|^(1/n)`.
pub fn durand_kerner(coeffs: &[f64]) -> Vec<Complex64> {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.last().map_or(false, |x| *x == 0.0) {
        c.pop();
    }
    let n = match c.len().checked_sub(1) {
        None | Some(0) => return Vec::new(),
        Some(n) => n,
    };
    let lead = c[n];
    let monic: Vec<f64> = c.iter().map(|x| x / lead).collect();
    let radius = monic[0].abs().powf(1.0 / n as f64).max(0.5)
        + 1e-3 * (1.0 + monic.iter().map(|x| x.abs()).fold(0.0, f64::max)).ln();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for coeff in monic.iter().rev() {
            acc = acc * z + coeff;
        }
        acc
    };
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.7;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    for _ in 0..1000 {
        let mut shift = 0.0f64;
        for k in 0..n {
            let zk = roots[k];
            let mut denom = Complex64::new(1.0, 0.0);
            for (j, &zj) in roots.iter().enumerate() {
                if j != k {
                    denom *= zk - zj;
                }
            }
            if denom.norm() == 0.0 {
                continue;
            }
            let delta = eval(zk) / denom;
            roots[k] = zk - delta;
            shift = shift.max(delta.norm() / (1.0 + zk.norm()));
        }
        if shift < 1e-14 {
            break;
        }
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> IntPoly {
        IntPoly::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn eval_and_derivative() {
        let f = poly(&[5, -1, 1]); // t^2 - t + 5
        assert_eq!(f.eval(&BigInt::from(1)), BigInt::from(5));
        assert_eq!(f.eval(&BigInt::from(3)), BigInt::from(11));
        assert_eq!(f.derivative(), poly(&[-1, 2]));
    }

    #[test]
    fn product() {
        let f = poly(&[9, -5, 1]);
        let g = poly(&[9, -4, 1]);
        let h = f.mul(&g);
        assert_eq!(h, poly(&[81, -81, 38, -9, 1]));
        assert_eq!(
            h.eval(&BigInt::from(1)),
            f.eval(&BigInt::from(1)) * g.eval(&BigInt::from(1))
        );
    }

    #[test]
    fn gcd_and_squarefree() {
        let f = poly(&[9, -6, 1]); // (t-3)^2
        let g = poly(&[-3, 1]);
        assert_eq!(poly_gcd(&f, &f.derivative()), g);
        assert_eq!(f.squarefree_part(), g);

        let cube = poly(&[5, -1, 1]);
        let f = cube.mul(&cube).mul(&cube);
        assert_eq!(f.squarefree_part(), cube);

        let already = poly(&[5, -1, 1]);
        assert_eq!(already.squarefree_part(), already);
    }

    #[test]
    fn discriminants() {
        assert_eq!(poly(&[5, -1, 1]).discriminant(), BigInt::from(-19));
        assert_eq!(poly(&[9, -6, 1]).discriminant(), BigInt::from(0));
        // x^3 - 1: disc = -27
        assert_eq!(poly(&[-1, 0, 0, 1]).discriminant(), BigInt::from(-27));
        // x^2 + x + 1: disc = -3
        assert_eq!(poly(&[1, 1, 1]).discriminant(), BigInt::from(-3));
    }

    #[test]
    fn resultant_of_coprime_is_nonzero() {
        let f = poly(&[9, -5, 1]);
        let g = poly(&[9, -4, 1]);
        assert!(!resultant(&f, &g).is_zero());
        let shared = f.mul(&g);
        assert!(resultant(&shared, &f).is_zero());
    }

    #[test]
    fn complex_roots_on_circle() {
        // t^2 - t + 5 has roots of modulus sqrt(5).
        let f = poly(&[5, -1, 1]);
        let roots = f.complex_roots();
        assert_eq!(roots.len(), 2);
        for r in roots {
            assert!((r.norm() - 5.0f64.sqrt()).abs() < 1e-10);
        }
        // Repeated roots still come out exactly: ((t-3)^2)^2 -> root 3.
        let f = poly(&[9, -6, 1]).mul(&poly(&[9, -6, 1]));
        let roots = f.complex_roots();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - Complex64::new(3.0, 0.0)).norm() < 1e-10);
    }
}
