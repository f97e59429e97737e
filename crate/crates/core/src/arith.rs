//! Exact integer and rational utilities: primality, factorization,
//! radicals, valuations, the inclusion–exclusion square-divisor counts and
//! the unit-translate density of residue rings.
//!
//! Everything here is a pure function of its inputs. Factorization uses
//! trial division by a cached prime table up to 10^6 followed by Brent's
//! variant of Pollard rho with deterministic Miller–Rabin primality
//! testing; all desk-scale inputs factor in milliseconds.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

fn trial_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_DIVISION_BOUND))
}

/// All primes `<= n` by a plain sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
    }
    primes
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for `u64` (the 12-witness set is exact for
/// every 64-bit integer).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller–Rabin for arbitrary-precision integers. Exact below 2^64 (it
/// delegates to [`is_prime_u64`]); above that the fixed 20-prime witness
/// set is proven complete past 3.3·10^24, far beyond the 128-bit inputs
/// this crate targets.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let witnesses = [
        2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    ];
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if n.is_even() {
        return false;
    }
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in witnesses {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rho_u64(n: u64) -> u64 {
    // Brent's cycle variant; n must be odd, composite and > 1.
    debug_assert!(n > 1 && n % 2 == 1);
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let mut saved = 2u64;
        let mut count = 0u32;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            let diff = x.abs_diff(y);
            if diff == 0 {
                d = n; // cycle without factor; retry with another c
                break;
            }
            saved = mul_mod(saved, diff, n);
            count += 1;
            if count == 64 {
                d = saved.gcd(&n);
                saved = 1;
                count = 0;
            }
        }
        if d == 1 {
            d = saved.gcd(&n);
        }
        if d != n && d != 1 {
            return d;
        }
    }
    unreachable!()
}

fn rho_biguint(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    for c in 1u64.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        loop {
            x = f(&x);
            y = f(&f(&y));
            if x == y {
                break; // cycle without factor; retry
            }
            let diff = if x > y { &x - &y } else { &y - &x };
            let d = diff.gcd(n);
            if d != one {
                if &d == n {
                    break;
                }
                return d;
            }
        }
    }
    unreachable!()
}

fn factor_u64_into(mut n: u64, out: &mut Vec<(BigUint, u32)>) {
    for &p in trial_primes() {
        if p.checked_mul(p).map_or(true, |pp| pp > n) {
            break;
        }
        if n % p == 0 {
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((BigUint::from(p), e));
        }
    }
    if n > 1 {
        if is_prime_u64(n) {
            out.push((BigUint::from(n), 1));
        } else {
            // Composite leftover above the trial bound: split with rho.
            let d = rho_u64(n);
            factor_u64_into(d, out);
            factor_u64_into(n / d, out);
        }
    }
}

fn factor_biguint_into(n: BigUint, out: &mut Vec<(BigUint, u32)>) {
    if let Some(small) = n.to_u64() {
        if small > 1 {
            factor_u64_into(small, out);
        }
        return;
    }
    let mut n = n;
    for &p in trial_primes() {
        if (&n % p).is_zero() {
            let mut e = 0u32;
            while (&n % p).is_zero() {
                n /= p;
                e += 1;
            }
            out.push((BigUint::from(p), e));
            if let Some(small) = n.to_u64() {
                if small > 1 {
                    factor_u64_into(small, out);
                }
                return;
            }
        }
    }
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push((n, 1));
        return;
    }
    let d = rho_biguint(&n);
    let q = &n / &d;
    factor_biguint_into(d, out);
    factor_biguint_into(q, out);
}

/// Prime factorization of `|n|` as a sorted multiset of `(prime, exponent)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    entries: Vec<(BigUint, u32)>,
}

impl Factorization {
    pub fn entries(&self) -> &[(BigUint, u32)] {
        &self.entries
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.entries.iter().map(|(p, _)| p)
    }

    /// Reconstructs `|n|`.
    pub fn value(&self) -> BigUint {
        self.entries
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// Product of the distinct prime divisors; 1 for the empty factorization.
    pub fn radical(&self) -> BigUint {
        self.entries
            .iter()
            .fold(BigUint::one(), |acc, (p, _)| acc * p)
    }

    /// Euler totient of the factored value.
    pub fn phi(&self) -> BigUint {
        self.entries.iter().fold(BigUint::one(), |acc, (p, e)| {
            acc * (p - 1u32) * p.pow(e - 1)
        })
    }

    pub fn exponent_of(&self, prime: &BigUint) -> u32 {
        self.entries
            .iter()
            .find(|(p, _)| p == prime)
            .map_or(0, |(_, e)| *e)
    }
}

/// Factors `|n|`; rejects zero.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    factorize_unsigned(n.magnitude().clone())
}

/// Factors a nonzero magnitude.
pub fn factorize_unsigned(n: BigUint) -> Result<Factorization> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut entries = Vec::new();
    factor_biguint_into(n, &mut entries);
    entries.sort_by(|(p, _), (q, _)| p.cmp(q));
    Ok(Factorization { entries })
}

/// Product of the distinct primes dividing `|n|`; `radical(±1) = 1`.
pub fn radical(n: &BigInt) -> Result<BigUint> {
    Ok(factorize(n)?.radical())
}

/// `|n|` divided by its radical. Equals 1 exactly when `n` is squarefree;
/// a prime divides this cofactor exactly when its square divides `n`.
pub fn radical_cofactor(n: &BigInt) -> Result<BigUint> {
    let f = factorize(n)?;
    Ok(f.value() / f.radical())
}

/// The `ell`-adic valuation of `n`, or `None` for `n = 0` (conventionally
/// infinite).
pub fn v_ell(n: &BigInt, ell: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let mut m = n.magnitude().clone();
    let mut v = 0u32;
    while (&m % ell).is_zero() {
        m /= ell;
        v += 1;
    }
    Some(v)
}

fn check_prime_set(zs: &[u64]) -> Result<Vec<u64>> {
    let mut sorted = zs.to_vec();
    sorted.sort_unstable();
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::InvalidInput(format!(
                "duplicate prime {} in set",
                pair[0]
            )));
        }
    }
    for &z in &sorted {
        if !is_prime_u64(z) {
            return Err(Error::NotPrime(z.to_string()));
        }
    }
    Ok(sorted)
}

/// Density of integers divisible by `x^2` for some `x` in the prime set:
/// the exact rational `1 - prod (1 - 1/x^2)`. Empty set gives 0.
pub fn square_divisor_density(zs: &[u64]) -> Result<BigRational> {
    let zs = check_prime_set(zs)?;
    let mut prod = BigRational::one();
    for z in zs {
        let z2 = BigInt::from(z) * BigInt::from(z);
        prod *= BigRational::one() - BigRational::new(BigInt::one(), z2);
    }
    Ok(BigRational::one() - prod)
}

/// Inclusion–exclusion upper bound, with ceilings, for how many integers in
/// a window of length `n` are divisible by `x^2` for some `x` in the prime
/// set: `sum_i (-1)^(i+1) sum_(|R|=i) ceil(n / prod_R x^2)`.
pub fn square_divisor_count_bound(n: u64, zs: &[u64]) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    let zs = check_prime_set(zs)?;
    if zs.len() > 20 {
        return Err(Error::InvalidInput(
            "prime set too large for subset enumeration".into(),
        ));
    }
    let mut total: i128 = 0;
    for mask in 1u32..(1 << zs.len()) {
        let mut prod: u128 = 1;
        for (i, &z) in zs.iter().enumerate() {
            if mask & (1 << i) != 0 {
                prod = prod.saturating_mul(z as u128).saturating_mul(z as u128);
            }
        }
        let ceil = (n as u128).div_ceil(prod) as i128;
        if mask.count_ones() % 2 == 1 {
            total += ceil;
        } else {
            total -= ceil;
        }
    }
    u64::try_from(total).map_err(|_| Error::InvalidInput("negative subset sum".into()))
}

/// Whether the prime `ell` divides both arithmetic progressions
/// `x0 + dx*i` and `y0 + dy*i` at a common index. Requires `ell` not to
/// divide `dx`; the answer then only depends on the single congruence
/// `dx*y0 = dy*x0 (mod ell)`.
pub fn progressions_share_prime(x0: i64, dx: i64, y0: i64, dy: i64, ell: u64) -> Result<bool> {
    if !is_prime_u64(ell) {
        return Err(Error::NotPrime(ell.to_string()));
    }
    let m = ell as i128;
    if (dx as i128).rem_euclid(m) == 0 {
        return Err(Error::PrimeDividesStep { ell });
    }
    let lhs = (dx as i128) * (y0 as i128);
    let rhs = (dy as i128) * (x0 as i128);
    Ok((lhs - rhs).rem_euclid(m) == 0)
}

/// Fraction of units `x` of `Z/nZ` for which `t*x + s` is again a unit:
/// the exact rational `prod (ell-2)/(ell-1)` over primes `ell | n` that do
/// not divide `t*s`. Requires `gcd(t, s, n) = 1`.
pub fn unit_translate_density(t: i64, s: i64, n: u64) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    let g = t.unsigned_abs().gcd(&s.unsigned_abs()).gcd(&n);
    if g != 1 {
        return Err(Error::NotCoprime {
            what: "(t, s, n)",
            gcd: g.to_string(),
        });
    }
    let ts = t as i128 * s as i128;
    let factorization = factorize(&BigInt::from(n))?;
    let mut density = BigRational::one();
    for p in factorization.primes() {
        let ell = p.to_i128().expect("prime divisor of a u64 fits i128");
        if ts.rem_euclid(ell) != 0 {
            density *= BigRational::new(BigInt::from(ell - 2), BigInt::from(ell - 1));
        }
    }
    Ok(density)
}

/// Whether the prime `p` generates the unit group of `Z/nZ`. Returns
/// `false` (rather than erroring) when that group is not cyclic, since no
/// element can generate it; rejects `gcd(p, n) > 1`.
pub fn is_primitive_root(p: u64, n: &BigUint) -> Result<bool> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if n.is_zero() {
        return Err(Error::InvalidInput("modulus must be positive".into()));
    }
    let pb = BigUint::from(p);
    let g = pb.gcd(n);
    if !g.is_one() {
        return Err(Error::NotCoprime {
            what: "(p, n)",
            gcd: g.to_string(),
        });
    }
    if n.is_one() {
        return Ok(true);
    }
    let phi = factorize_unsigned(n.clone())?.phi();
    let phi_factors = factorize_unsigned(phi.clone())?;
    for ell in phi_factors.primes() {
        let e = &phi / ell;
        if pb.modpow(&e, n).is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `z` is the square of an integer; negative inputs give `false`.
pub fn is_perfect_square(z: &BigInt) -> bool {
    if z.is_negative() {
        return false;
    }
    let m = z.magnitude();
    let r = m.sqrt();
    &(&r * &r) == m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn radical_basics() {
        assert_eq!(radical(&big(12)).unwrap(), BigUint::from(6u32));
        assert_eq!(radical(&big(1)).unwrap(), BigUint::from(1u32));
        assert_eq!(radical(&big(-18)).unwrap(), BigUint::from(6u32));
        assert_eq!(radical(&big(0)), Err(Error::ZeroInput));
    }

    #[test]
    fn radical_cofactor_basics() {
        assert_eq!(radical_cofactor(&big(12)).unwrap(), BigUint::from(2u32));
        assert_eq!(radical_cofactor(&big(18)).unwrap(), BigUint::from(3u32));
        assert_eq!(radical_cofactor(&big(55)).unwrap(), BigUint::from(1u32));
        assert_eq!(radical_cofactor(&big(0)), Err(Error::ZeroInput));
    }

    #[test]
    fn factorization_reconstructs() {
        for n in [2i64, 97, 1 << 20, 600851475143, 1_000_003 * 999_983] {
            let f = factorize(&big(n)).unwrap();
            assert_eq!(f.value(), BigUint::from(n as u64));
            for w in f.entries().windows(2) {
                assert!(w[0].0 < w[1].0);
            }
        }
    }

    #[test]
    fn factorization_large_semiprime() {
        // Two 17-digit-ish primes: exercises the rho path beyond the sieve.
        let p = BigUint::from(2_147_483_659u64);
        let q = BigUint::from(2_147_483_693u64);
        let f = factorize_unsigned(&p * &q).unwrap();
        assert_eq!(f.entries().len(), 2);
        assert_eq!(f.value(), &p * &q);
    }

    #[test]
    fn square_density_examples() {
        assert_eq!(
            square_divisor_density(&[]).unwrap(),
            BigRational::from(BigInt::from(0))
        );
        assert_eq!(
            square_divisor_density(&[2]).unwrap(),
            BigRational::new(big(1), big(4))
        );
        assert_eq!(
            square_divisor_density(&[2, 3]).unwrap(),
            BigRational::new(big(1), big(3))
        );
        assert!(square_divisor_density(&[4]).is_err());
        assert!(square_divisor_density(&[2, 2]).is_err());
    }

    #[test]
    fn square_density_inclusion_exclusion_oracle() {
        // Count m <= 36 divisible by 4 or 9 directly: 9 + 4 - 1 = 12 of 36.
        let count = (1..=36).filter(|m| m % 4 == 0 || m % 9 == 0).count();
        assert_eq!(
            square_divisor_density(&[2, 3]).unwrap(),
            BigRational::new(big(count as i64), big(36))
        );
    }

    #[test]
    fn square_count_bound_examples() {
        assert_eq!(square_divisor_count_bound(100, &[2]).unwrap(), 25);
        assert_eq!(square_divisor_count_bound(10, &[2, 3]).unwrap(), 4);
        assert_eq!(square_divisor_count_bound(1, &[]).unwrap(), 0);
        assert!(square_divisor_count_bound(0, &[2]).is_err());
    }

    #[test]
    fn progressions_share_prime_examples() {
        assert_eq!(progressions_share_prime(3, 5, 1, 2, 7).unwrap(), false);
        assert_eq!(progressions_share_prime(0, 1, 0, 1, 5).unwrap(), true);
        assert_eq!(progressions_share_prime(1, 2, 3, 2, 3).unwrap(), false);
        assert!(matches!(
            progressions_share_prime(1, 10, 3, 2, 5),
            Err(Error::PrimeDividesStep { ell: 5 })
        ));
        assert!(progressions_share_prime(1, 1, 1, 1, 6).is_err());
    }

    #[test]
    fn unit_translate_density_examples() {
        assert_eq!(
            unit_translate_density(1, 1, 15).unwrap(),
            BigRational::new(big(3), big(8))
        );
        assert_eq!(
            unit_translate_density(2, 1, 4).unwrap(),
            BigRational::one()
        );
        assert_eq!(
            unit_translate_density(1, 1, 2).unwrap(),
            BigRational::zero()
        );
        assert!(unit_translate_density(3, 6, 9).is_err());
    }

    #[test]
    fn primitive_root_examples() {
        let n49 = BigUint::from(49u32);
        assert_eq!(is_primitive_root(5, &n49).unwrap(), true);
        assert_eq!(is_primitive_root(3, &n49).unwrap(), true);
        assert!(matches!(
            is_primitive_root(7, &n49),
            Err(Error::NotCoprime { .. })
        ));
        // (Z/75)* is not cyclic, so nothing generates it.
        assert_eq!(is_primitive_root(2, &BigUint::from(75u32)).unwrap(), false);
    }

    #[test]
    fn primitive_root_matches_brute_order() {
        // Independent check: multiplicative order by direct iteration.
        for n in 3u64..60 {
            for p in [2u64, 3, 5, 7, 11, 13] {
                if p.gcd(&n) != 1 {
                    continue;
                }
                let phi = (1..n).filter(|x| x.gcd(&n) == 1).count() as u64;
                let mut acc = 1u64;
                let mut order = 0u64;
                for i in 1..=phi {
                    acc = acc * p % n;
                    if acc == 1 {
                        order = i;
                        break;
                    }
                }
                let expected = order == phi;
                assert_eq!(
                    is_primitive_root(p, &BigUint::from(n)).unwrap(),
                    expected,
                    "p={p} n={n}"
                );
            }
        }
    }

    #[test]
    fn perfect_square_examples() {
        assert!(!is_perfect_square(&big(5)));
        assert!(is_perfect_square(&big(0)));
        assert!(is_perfect_square(&big(1)));
        assert!(is_perfect_square(&big(144)));
        assert!(!is_perfect_square(&big(-4)));
    }

    #[test]
    fn v_ell_examples() {
        assert_eq!(v_ell(&big(48), 2), Some(4));
        assert_eq!(v_ell(&big(-45), 3), Some(2));
        assert_eq!(v_ell(&big(7), 5), Some(0));
        assert_eq!(v_ell(&big(0), 3), None);
    }

    #[test]
    fn prime_tests() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(65537));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(3215031751)); // strong pseudoprime to bases 2,3,5,7
        let primes = primes_up_to(100);
        assert_eq!(primes.len(), 25);
        assert_eq!(primes.last(), Some(&97));
    }
}
