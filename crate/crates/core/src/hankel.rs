//! Hankel operators `H_B = P₋ B P₊` of Laurent polynomial symbols.
//!
//! In the bases `{t^j}_{j≥0}` and `{t^{−i−1}}_{i≥0}` the operator has block
//! entries `c_{−(i+j+1)}`, so a symbol with `kmin = −r` yields a Hankel
//! matrix supported in the leading `r×r` blocks. Every truncation `N ≥ r`
//! therefore carries the whole operator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::trigpoly::LaurentMatrixPoly;

/// Extra blocks added to `|kmin|` by [`default_truncation`].
pub const TRUNCATION_PAD: usize = 8;

/// Singular values below this fraction of the largest are treated as zero
/// when listing the nonzero spectrum of `H_B H_B*`.
const RANK_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HankelSpectrum {
    pub truncation: usize,
    /// Nonincreasing singular values of the truncated block Hankel matrix.
    pub singvals: Vec<f64>,
    /// The truncation covers the full support of the operator.
    pub exact: bool,
}

impl HankelSpectrum {
    pub fn norm(&self) -> f64 {
        self.singvals.first().copied().unwrap_or(0.0)
    }

    /// Spectrum of `H_B H_B*`: `0` followed by the nonzero squared singular
    /// values in nonincreasing order.
    pub fn sq_spectrum(&self) -> Vec<f64> {
        let top = self.norm();
        let mut out = vec![0.0];
        out.extend(
            self.singvals
                .iter()
                .filter(|&&s| s > RANK_TOL * top.max(f64::MIN_POSITIVE))
                .map(|s| s * s),
        );
        out
    }
}

/// `|kmin| + 8`
pub fn default_truncation(b: &LaurentMatrixPoly) -> usize {
    b.kmin().unsigned_abs() as usize + TRUNCATION_PAD
}

/// Block `(i, j)` is `c_{−(i+j+1)}` for `0 ≤ i, j < n`.
pub fn hankel_matrix(b: &LaurentMatrixPoly, n: usize) -> CMat {
    let (r, c) = b.shape();
    let mut h = linalg::zeros(n * r, n * c);
    for i in 0..n {
        for j in 0..n {
            let k = -((i + j + 1) as i64);
            if let Some(m) = b.coeff_ref(k) {
                h.view_mut((i * r, j * c), (r, c)).copy_from(m);
            }
        }
    }
    h
}

pub fn hankel_norm(b: &LaurentMatrixPoly, n: usize) -> f64 {
    hankel_sq_spectrum(b, n).norm()
}

pub fn hankel_sq_spectrum(b: &LaurentMatrixPoly, n: usize) -> HankelSpectrum {
    let n = n.max(1);
    let exact = n as i64 >= -b.kmin();
    HankelSpectrum {
        truncation: n,
        singvals: linalg::singular_values(&hankel_matrix(b, n)),
        exact,
    }
}

/// `dist(b, H^∞)` for a scalar polynomial, which equals `‖H_b‖`.
pub fn nehari_distance(b: &LaurentMatrixPoly) -> Result<f64> {
    if b.shape() != (1, 1) {
        return Err(Error::Shape(format!(
            "Nehari distance needs a scalar symbol, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    Ok(hankel_norm(b, b.kmin().unsigned_abs() as usize))
}

/// Essential spectrum of `H_B H_B*` for a Laurent polynomial `B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EssSpectrum {
    pub points: Vec<f64>,
    pub justification: String,
}

pub fn ess_spectrum_note(_b: &LaurentMatrixPoly) -> EssSpectrum {
    EssSpectrum {
        points: vec![0.0],
        justification: "finite-rank Hankel operator".into(),
    }
}
