//! Exhaustive enumeration of the admissible values of the last Weil
//! coefficient for a fixed prefix: the window of integers completing the
//! prefix to a valid class, and its cyclic subset. Exact for dimensions 1
//! and 2, where exact membership tests exist.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::validity::{validate_curve, validate_surface, Mode};
use crate::weil::{FieldSize, IsogenyClass};
use crate::{Error, Result};

/// A sorted window of admissible last coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumWindow {
    values: Vec<i64>,
}

impl EnumWindow {
    fn new(mut values: Vec<i64>) -> Self {
        values.sort_unstable();
        EnumWindow { values }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> Option<i64> {
        self.values.first().copied()
    }

    pub fn max(&self) -> Option<i64> {
        self.values.last().copied()
    }

    /// Window length `max - min`; 0 when fewer than two values.
    pub fn span(&self) -> u64 {
        match (self.min(), self.max()) {
            (Some(lo), Some(hi)) => (hi - lo) as u64,
            _ => 0,
        }
    }

    pub fn contains(&self, z: i64) -> bool {
        self.values.binary_search(&z).is_ok()
    }
}

fn q_as_i128(field: &FieldSize) -> Result<i128> {
    field
        .q_i128()
        .filter(|q| *q < i128::MAX / 64)
        .ok_or_else(|| Error::InvalidInput("q too large for exhaustive enumeration".into()))
}

fn candidate_range(g: usize, prefix: &[i64], field: &FieldSize) -> Result<(i64, i64)> {
    let q = q_as_i128(field)?;
    let (lo, hi) = match g {
        1 => {
            // Weil bound: z^2 <= 4q.
            let bound = BigInt::from(4 * q).sqrt().to_i128().expect("sqrt fits");
            (-bound, bound)
        }
        2 => {
            let a = prefix[0] as i128;
            if a * a >= 16 * q {
                return Ok((1, 0)); // empty
            }
            // 2|a|√q - 2q < b  ⟺  b >= isqrt(4a²q) + 1 - 2q;
            // b < a²/4 + 2q    ⟺  b <= floor((a² + 8q - 1) / 4).
            let s = BigInt::from(4 * a * a * q)
                .sqrt()
                .to_i128()
                .expect("sqrt fits");
            (s + 1 - 2 * q, (a * a + 8 * q - 1).div_euclid(4))
        }
        g => {
            return Err(Error::UnsupportedDimension {
                g,
                reason: "no exact membership test above dimension 2",
            })
        }
    };
    let lo = i64::try_from(lo)
        .map_err(|_| Error::InvalidInput("enumeration window exceeds i64".into()))?;
    let hi = i64::try_from(hi)
        .map_err(|_| Error::InvalidInput("enumeration window exceeds i64".into()))?;
    Ok((lo, hi))
}

fn check_prefix(g: usize, prefix: &[i64]) -> Result<()> {
    if g == 0 || prefix.len() + 1 != g {
        return Err(Error::CoefficientCount {
            expected: g.saturating_sub(1),
            got: prefix.len(),
        });
    }
    Ok(())
}

fn is_admissible(g: usize, prefix: &[i64], field: &FieldSize, mode: Mode, z: i64) -> bool {
    match g {
        1 => validate_curve(field, &BigInt::from(z)).valid,
        _ => {
            validate_surface(field, &BigInt::from(prefix[0]), &BigInt::from(z), mode)
                .0
                .valid
        }
    }
}

/// All integers completing `prefix` to a valid class over `field`, found by
/// exhaustive scan of the finite interval allowed by the Weil bound (g=1)
/// or Rück's condition-1 bounds (g=2).
pub fn admissible_values(
    g: usize,
    prefix: &[i64],
    field: &FieldSize,
    mode: Mode,
) -> Result<EnumWindow> {
    check_prefix(g, prefix)?;
    let (lo, hi) = candidate_range(g, prefix, field)?;
    let values: Vec<i64> = (lo..=hi)
        .into_par_iter()
        .filter(|&z| is_admissible(g, prefix, field, mode, z))
        .collect();
    Ok(EnumWindow::new(values))
}

/// [`admissible_values`] filtered by the cyclicity criterion.
pub fn cyclic_values(g: usize, prefix: &[i64], field: &FieldSize, mode: Mode) -> Result<EnumWindow> {
    Ok(admissible_and_cyclic_values(g, prefix, field, mode)?.1)
}

/// One pass producing both the admissible window and its cyclic subset.
pub fn admissible_and_cyclic_values(
    g: usize,
    prefix: &[i64],
    field: &FieldSize,
    mode: Mode,
) -> Result<(EnumWindow, EnumWindow)> {
    let all = admissible_values(g, prefix, field, mode)?;
    let cyclic: Vec<i64> = all
        .values()
        .par_iter()
        .copied()
        .filter(|&z| {
            let mut coeffs = prefix.to_vec();
            coeffs.push(z);
            let class = IsogenyClass::from_i64(g, field, &coeffs)
                .expect("prefix length checked");
            class
                .cyclicity()
                .expect("valid classes have positive point count")
                .cyclic
        })
        .collect();
    Ok((all, EnumWindow::new(cyclic)))
}
