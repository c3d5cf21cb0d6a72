//! Matrix-valued Laurent polynomials on the unit circle.
//!
//! A [`LaurentMatrixPoly`] stores dense coefficients `c_k` for
//! `k ∈ [kmin, kmax]` with `kmin ≤ 0 ≤ kmax`. A [`GridSample`] holds values at
//! the roots of unity `t_j = exp(2πij/N)`; the two are connected by FFTs
//! ([`LaurentMatrixPoly::eval_grid`], [`from_grid`]).

use std::f64::consts::PI;

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, C64};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SymbolFile", into = "SymbolFile")]
pub struct LaurentMatrixPoly {
    rows: usize,
    cols: usize,
    kmin: i64,
    coeffs: Vec<CMat>,
}

impl LaurentMatrixPoly {
    /// Coefficients are listed for `k = kmin, kmin + 1, …`. The band is
    /// widened with zeros so that it always contains `k = 0`, then trimmed.
    pub fn new(rows: usize, cols: usize, kmin: i64, coeffs: Vec<CMat>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape("symbol must have at least one row and column".into()));
        }
        for (i, m) in coeffs.iter().enumerate() {
            if m.shape() != (rows, cols) {
                return Err(Error::Shape(format!(
                    "coefficient at k = {} is {}x{}, expected {rows}x{cols}",
                    kmin + i as i64,
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        let mut p = Self {
            rows,
            cols,
            kmin,
            coeffs,
        };
        p.normalize_band();
        Ok(p)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            kmin: 0,
            coeffs: vec![linalg::zeros(rows, cols)],
        }
    }

    pub fn constant(m: CMat) -> Self {
        Self::monomial(0, m)
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(linalg::eye(n))
    }

    /// `m · t^k`
    pub fn monomial(k: i64, m: CMat) -> Self {
        let (rows, cols) = m.shape();
        let mut p = Self {
            rows,
            cols,
            kmin: k,
            coeffs: vec![m],
        };
        p.normalize_band();
        p
    }

    /// Scalar (1×1) symbol from coefficients starting at `kmin`.
    pub fn scalar(kmin: i64, coeffs: &[C64]) -> Self {
        let coeffs = coeffs.iter().map(|&z| CMat::from_element(1, 1, z)).collect();
        Self::new(1, 1, kmin, coeffs).expect("1x1 coefficients")
    }

    /// Assembles a symbol entry by entry from scalar symbols.
    pub fn from_entries(entries: &[Vec<LaurentMatrixPoly>]) -> Result<Self> {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        if rows == 0 || cols == 0 || entries.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged entry table".into()));
        }
        let kmin = entries.iter().flatten().map(|e| e.kmin).min().unwrap_or(0);
        let kmax = entries.iter().flatten().map(|e| e.kmax()).max().unwrap_or(0);
        let mut coeffs = vec![linalg::zeros(rows, cols); (kmax - kmin + 1) as usize];
        for (i, row) in entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if e.shape() != (1, 1) {
                    return Err(Error::Shape(format!("entry ({i},{j}) is not scalar")));
                }
                for k in e.kmin..=e.kmax() {
                    coeffs[(k - kmin) as usize][(i, j)] = e.coeff(k)[(0, 0)];
                }
            }
        }
        Self::new(rows, cols, kmin, coeffs)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn kmin(&self) -> i64 {
        self.kmin
    }

    pub fn kmax(&self) -> i64 {
        self.kmin + self.coeffs.len() as i64 - 1
    }

    /// Number of stored coefficients, `kmax − kmin + 1`.
    pub fn bandwidth(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[CMat] {
        &self.coeffs
    }

    pub fn coeff_ref(&self, k: i64) -> Option<&CMat> {
        if k < self.kmin || k > self.kmax() {
            None
        } else {
            Some(&self.coeffs[(k - self.kmin) as usize])
        }
    }

    /// Coefficient at `k`, zero outside the band.
    pub fn coeff(&self, k: i64) -> CMat {
        self.coeff_ref(k)
            .cloned()
            .unwrap_or_else(|| linalg::zeros(self.rows, self.cols))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|m| m.iter().all(|z| *z == C64::new(0.0, 0.0)))
    }

    /// Widens the band to contain 0 and drops exactly-zero extreme
    /// coefficients.
    fn normalize_band(&mut self) {
        let zero = |m: &CMat| m.iter().all(|z| *z == C64::new(0.0, 0.0));
        if self.coeffs.is_empty() {
            self.kmin = 0;
            self.coeffs.push(linalg::zeros(self.rows, self.cols));
        }
        if self.kmin > 0 {
            let pad = self.kmin as usize;
            let mut c = vec![linalg::zeros(self.rows, self.cols); pad];
            c.append(&mut self.coeffs);
            self.coeffs = c;
            self.kmin = 0;
        }
        while self.kmax() < 0 {
            self.coeffs.push(linalg::zeros(self.rows, self.cols));
        }
        while self.kmax() > 0 && zero(self.coeffs.last().unwrap()) {
            self.coeffs.pop();
        }
        while self.kmin < 0 && zero(&self.coeffs[0]) {
            self.coeffs.remove(0);
            self.kmin += 1;
        }
    }

    /// Direct evaluation `Σ c_k t^k`.
    pub fn eval(&self, t: C64) -> CMat {
        let mut acc = linalg::zeros(self.rows, self.cols);
        for (i, m) in self.coeffs.iter().enumerate() {
            let k = self.kmin + i as i64;
            acc += m * t.powi(k as i32);
        }
        acc
    }

    /// Values at the `npoints` roots of unity, one FFT per matrix entry.
    pub fn eval_grid(&self, npoints: usize) -> Result<GridSample> {
        check_grid(npoints, self.bandwidth())?;
        let mut planner = FftPlanner::<f64>::new();
        let fft = planner.plan_fft_inverse(npoints);
        let mut values = vec![linalg::zeros(self.rows, self.cols); npoints];
        let mut buf = vec![C64::new(0.0, 0.0); npoints];
        for r in 0..self.rows {
            for col in 0..self.cols {
                buf.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
                for (i, m) in self.coeffs.iter().enumerate() {
                    let k = self.kmin + i as i64;
                    buf[k.rem_euclid(npoints as i64) as usize] += m[(r, col)];
                }
                fft.process(&mut buf);
                for (v, z) in values.iter_mut().zip(&buf) {
                    v[(r, col)] = *z;
                }
            }
        }
        Ok(GridSample { values })
    }

    /// Coefficient convolution.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let kmin = self.kmin + other.kmin;
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![linalg::zeros(self.rows, other.cols); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(self.rows, other.cols, kmin, coeffs)
    }

    /// The symbol `t ↦ f(t)*` on the circle: coefficient `k` becomes
    /// `c_{−k}*`.
    pub fn adjoint_symbol(&self) -> Self {
        let coeffs = self.coeffs.iter().rev().map(|m| m.adjoint()).collect();
        Self::new(self.cols, self.rows, -self.kmax(), coeffs).expect("shape preserved")
    }

    /// Keeps `k ≥ 0`. Constants go to this side.
    pub fn project_plus(&self) -> Self {
        let coeffs = (0..=self.kmax()).map(|k| self.coeff(k)).collect();
        Self::new(self.rows, self.cols, 0, coeffs).expect("shape preserved")
    }

    /// Keeps `k ≤ −1`.
    pub fn project_minus(&self) -> Self {
        if self.kmin >= 0 {
            return Self::zeros(self.rows, self.cols);
        }
        let coeffs = (self.kmin..0).map(|k| self.coeff(k)).collect();
        Self::new(self.rows, self.cols, self.kmin, coeffs).expect("shape preserved")
    }

    fn combine(&self, other: &Self, sign: f64) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::Shape(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let kmin = self.kmin.min(other.kmin);
        let kmax = self.kmax().max(other.kmax());
        let coeffs = (kmin..=kmax)
            .map(|k| self.coeff(k) + other.coeff(k) * C64::new(sign, 0.0))
            .collect();
        Self::new(self.rows, self.cols, kmin, coeffs)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1.0)
    }

    pub fn scale(&self, z: C64) -> Self {
        let coeffs = self.coeffs.iter().map(|m| m * z).collect();
        Self::new(self.rows, self.cols, self.kmin, coeffs).expect("shape preserved")
    }

    /// `t^m · f`
    pub fn shift(&self, m: i64) -> Self {
        Self::new(self.rows, self.cols, self.kmin + m, self.coeffs.clone()).expect("shape preserved")
    }

    /// Scalar symbol at entry `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> Self {
        let coeffs: Vec<C64> = self.coeffs.iter().map(|m| m[(i, j)]).collect();
        Self::scalar(self.kmin, &coeffs)
    }

    /// Largest Frobenius norm of a coefficient difference over the union band.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let kmin = self.kmin.min(other.kmin);
        let kmax = self.kmax().max(other.kmax());
        (kmin..=kmax)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.shape() == other.shape() && self.max_coeff_diff(other) <= tol
    }

    /// Squared Frobenius norm of all coefficients.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|m| m.norm_squared()).sum()
    }

    /// Largest Frobenius norm among coefficients with `k < 0`.
    pub fn max_negative_coeff(&self) -> f64 {
        (self.kmin..0).map(|k| self.coeff(k).norm()).fold(0.0, f64::max)
    }
}

/// Grid size for a symbol of the given bandwidth: four times the bandwidth
/// rounded up to a power of two, never below 256.
pub fn default_grid_size(bandwidth: usize) -> usize {
    (4 * bandwidth).next_power_of_two().max(256)
}

pub fn is_power_of_two(n: usize) -> bool {
    n > 0 && n & (n - 1) == 0
}

fn check_grid(npoints: usize, bandwidth: usize) -> Result<()> {
    if !is_power_of_two(npoints) {
        return Err(Error::NotPowerOfTwo(npoints));
    }
    if npoints < bandwidth {
        return Err(Error::GridTooSmall {
            npoints,
            required: bandwidth.next_power_of_two(),
        });
    }
    Ok(())
}

/// `exp(2πij/N)`
pub fn node(j: usize, npoints: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * j as f64 / npoints as f64)
}

/// Matrix values at the roots of unity `t_j = exp(2πij/N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSample {
    values: Vec<CMat>,
}

impl GridSample {
    pub fn new(values: Vec<CMat>) -> Result<Self> {
        if !is_power_of_two(values.len()) {
            return Err(Error::NotPowerOfTwo(values.len()));
        }
        let shape = values[0].shape();
        if let Some(j) = values.iter().position(|v| v.shape() != shape) {
            return Err(Error::Shape(format!("grid value {j} has a different shape")));
        }
        Ok(Self { values })
    }

    pub fn npoints(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[CMat] {
        &self.values
    }

    pub fn into_values(self) -> Vec<CMat> {
        self.values
    }

    pub fn shape(&self) -> (usize, usize) {
        self.values[0].shape()
    }

    pub fn node(&self, j: usize) -> C64 {
        node(j, self.npoints())
    }

    pub fn map(&self, f: impl Fn(&CMat) -> CMat) -> Self {
        Self {
            values: self.values.iter().map(f).collect(),
        }
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.npoints() != other.npoints() || self.shape().1 != other.shape().0 {
            return Err(Error::Shape("grid product with incompatible grids".into()));
        }
        Ok(Self {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    /// Largest Frobenius distance between corresponding values.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Pointwise inverses together with the worst condition number seen.
pub fn inverse_on_grid(s: &GridSample) -> Result<(GridSample, f64)> {
    let (r, c) = s.shape();
    if r != c {
        return Err(Error::Shape(format!("cannot invert {r}x{c} values")));
    }
    let mut worst = 1.0f64;
    let mut values = Vec::with_capacity(s.npoints());
    for (j, v) in s.values().iter().enumerate() {
        let k = linalg::cond(v);
        if !(k <= 1e12) {
            return Err(Error::SingularSymbol { node: j, cond: k });
        }
        worst = worst.max(k);
        values.push(v.clone().try_inverse().ok_or(Error::SingularSymbol { node: j, cond: k })?);
    }
    Ok((GridSample { values }, worst))
}

/// A band-limited expansion recovered from grid values.
#[derive(Clone, Debug)]
pub struct Truncated {
    pub poly: LaurentMatrixPoly,
    /// Squared Frobenius mass of the Fourier coefficients outside the band.
    pub discarded_energy: f64,
}

/// Inverse transform of grid values, truncated to `[kmin, kmax]`.
pub fn from_grid(s: &GridSample, kmin: i64, kmax: i64) -> Result<Truncated> {
    let n = s.npoints();
    if kmin > kmax || (kmax - kmin + 1) as usize > n {
        return Err(Error::GridTooSmall {
            npoints: n,
            required: ((kmax - kmin + 1).max(1) as usize).next_power_of_two(),
        });
    }
    let (rows, cols) = s.shape();
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft_forward(n);
    let mut coeffs = vec![linalg::zeros(rows, cols); (kmax - kmin + 1) as usize];
    let mut in_band = vec![false; n];
    for k in kmin..=kmax {
        in_band[k.rem_euclid(n as i64) as usize] = true;
    }
    let scale = 1.0 / n as f64;
    let mut discarded = 0.0;
    let mut buf = vec![C64::new(0.0, 0.0); n];
    for r in 0..rows {
        for col in 0..cols {
            for (b, v) in buf.iter_mut().zip(s.values()) {
                *b = v[(r, col)];
            }
            fft.process(&mut buf);
            for (m, z) in buf.iter().enumerate() {
                if !in_band[m] {
                    discarded += (z * scale).norm_sqr();
                }
            }
            for k in kmin..=kmax {
                coeffs[(k - kmin) as usize][(r, col)] = buf[k.rem_euclid(n as i64) as usize] * scale;
            }
        }
    }
    Ok(Truncated {
        poly: LaurentMatrixPoly::new(rows, cols, kmin, coeffs)?,
        discarded_energy: discarded,
    })
}

/// Winding number of `det` around the grid.
pub fn det_winding(s: &GridSample) -> Result<i64> {
    let (r, c) = s.shape();
    if r != c {
        return Err(Error::Shape(format!("determinant of {r}x{c} values")));
    }
    let dets: Vec<C64> = s.values().iter().map(|v| v.determinant()).collect();
    winding_of_values(&dets, 1e-10)
}

/// Winding number of a closed sampled curve of nonzero complex values.
pub fn winding_of_values(values: &[C64], min_abs: f64) -> Result<i64> {
    if let Some((j, z)) = values.iter().enumerate().find(|(_, z)| !(z.norm() > min_abs)) {
        return Err(Error::WindingUndefined {
            node: j,
            value: z.norm(),
        });
    }
    let n = values.len();
    let mut total = 0.0;
    for j in 0..n {
        let step = (values[(j + 1) % n] / values[j]).arg();
        if step.abs() >= PI / 2.0 {
            return Err(Error::GridTooCoarse { node: j, jump: step });
        }
        total += step;
    }
    let turns = total / (2.0 * PI);
    let w = turns.round();
    if (turns - w).abs() > 1e-6 {
        return Err(Error::NonIntegralWinding { turns });
    }
    Ok(w as i64)
}

/// On-disk form: `{"rows", "cols", "kmin", "kmax", "coeffs"}` with
/// `coeffs[k][row][col] = [re, im]` for `k = kmin..=kmax`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolFile {
    rows: usize,
    cols: usize,
    kmin: i64,
    kmax: i64,
    coeffs: Vec<Vec<Vec<[f64; 2]>>>,
}

impl TryFrom<SymbolFile> for LaurentMatrixPoly {
    type Error = Error;

    fn try_from(f: SymbolFile) -> Result<Self> {
        if f.kmax < f.kmin {
            return Err(Error::Format(format!("kmax {} < kmin {}", f.kmax, f.kmin)));
        }
        let expected = (f.kmax - f.kmin + 1) as usize;
        if f.coeffs.len() != expected {
            return Err(Error::Format(format!(
                "coeffs has {} entries, expected {expected} for k = {}..={}",
                f.coeffs.len(),
                f.kmin,
                f.kmax
            )));
        }
        let mut coeffs = Vec::with_capacity(expected);
        for (i, m) in f.coeffs.iter().enumerate() {
            if m.len() != f.rows {
                return Err(Error::Format(format!(
                    "coeffs[{i}] has {} rows, expected {}",
                    m.len(),
                    f.rows
                )));
            }
            if let Some(r) = m.iter().position(|row| row.len() != f.cols) {
                return Err(Error::Format(format!(
                    "coeffs[{i}][{r}] has {} columns, expected {}",
                    m[r].len(),
                    f.cols
                )));
            }
            coeffs.push(CMat::from_fn(f.rows, f.cols, |r, c| C64::new(m[r][c][0], m[r][c][1])));
        }
        LaurentMatrixPoly::new(f.rows, f.cols, f.kmin, coeffs).map_err(|e| Error::Format(e.to_string()))
    }
}

impl From<LaurentMatrixPoly> for SymbolFile {
    fn from(p: LaurentMatrixPoly) -> Self {
        let coeffs = p
            .coeffs
            .iter()
            .map(|m| {
                (0..p.rows)
                    .map(|r| (0..p.cols).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
                    .collect()
            })
            .collect();
        SymbolFile {
            rows: p.rows,
            cols: p.cols,
            kmin: p.kmin,
            kmax: p.kmax(),
            coeffs,
        }
    }
}
