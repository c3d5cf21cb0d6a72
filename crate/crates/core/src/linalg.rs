//! Small dense helpers over `nalgebra` complex matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn zeros(rows: usize, cols: usize) -> CMat {
    CMat::zeros(rows, cols)
}

pub fn eye(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Builds a matrix from row slices.
pub fn from_rows(rows: &[&[C64]]) -> CMat {
    let nr = rows.len();
    let nc = rows.first().map_or(0, |r| r.len());
    CMat::from_fn(nr, nc, |i, j| rows[i][j])
}

pub fn from_real_rows(rows: &[&[f64]]) -> CMat {
    let nr = rows.len();
    let nc = rows.first().map_or(0, |r| r.len());
    CMat::from_fn(nr, nc, |i, j| c(rows[i][j], 0.0))
}

pub fn diag(entries: &[C64]) -> CMat {
    let n = entries.len();
    CMat::from_fn(n, n, |i, j| if i == j { entries[i] } else { C64::new(0.0, 0.0) })
}

/// `(M + M*) / 2`
pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()).scale(0.5)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending with
/// matching eigenvector columns. Only the Hermitian part of `m` is used.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let h = hermitian_part(m);
    let n = h.nrows();
    if n == 1 {
        return (vec![h[(0, 0)].re], eye(1));
    }
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    (values, vectors)
}

/// Ascending eigenvalues of the Hermitian part of `m`.
pub fn eigvalsh(m: &CMat) -> Vec<f64> {
    let h = hermitian_part(m);
    match h.nrows() {
        1 => vec![h[(0, 0)].re],
        2 => {
            let (a, d, b) = (h[(0, 0)].re, h[(1, 1)].re, h[(0, 1)]);
            let mid = 0.5 * (a + d);
            let rad = (0.5 * (a - d)).hypot(b.norm());
            vec![mid - rad, mid + rad]
        }
        _ => {
            let mut v: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
            v.sort_by(f64::total_cmp);
            v
        }
    }
}

pub fn lambda_min(m: &CMat) -> f64 {
    eigvalsh(m)[0]
}

pub fn lambda_max(m: &CMat) -> f64 {
    *eigvalsh(m).last().expect("non-empty matrix")
}

/// Singular values in nonincreasing order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// 2-norm condition number; infinite for exactly singular input.
pub fn cond(m: &CMat) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}

pub fn spectral_norm(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Principal square root of a Hermitian positive definite matrix and its
/// inverse. A non-positive eigenvalue is an error; nothing is clamped.
pub fn sqrt_pd(m: &CMat, node: usize) -> Result<(CMat, CMat)> {
    let (vals, vecs) = eigh(m);
    if vals[0] <= 0.0 {
        return Err(Error::NotPositiveDefinite {
            node,
            lambda_min: vals[0],
        });
    }
    let root = diag(&vals.iter().map(|v| c(v.sqrt(), 0.0)).collect::<Vec<_>>());
    let inv_root = diag(&vals.iter().map(|v| c(1.0 / v.sqrt(), 0.0)).collect::<Vec<_>>());
    let sqrt = &vecs * root * vecs.adjoint();
    let inv_sqrt = &vecs * inv_root * vecs.adjoint();
    Ok((sqrt, inv_sqrt))
}

/// Places `blocks[i][j]` into a single matrix. Every block row must share a
/// height and every block column a width.
pub fn block(blocks: &[Vec<&CMat>]) -> CMat {
    let heights: Vec<usize> = blocks.iter().map(|r| r[0].nrows()).collect();
    let widths: Vec<usize> = blocks[0].iter().map(|b| b.ncols()).collect();
    let mut out = zeros(heights.iter().sum(), widths.iter().sum());
    let mut r0 = 0;
    for (i, row) in blocks.iter().enumerate() {
        let mut c0 = 0;
        for (j, b) in row.iter().enumerate() {
            out.view_mut((r0, c0), (heights[i], widths[j])).copy_from(*b);
            c0 += widths[j];
        }
        r0 += heights[i];
    }
    out
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    use std::f64::consts::PI;
    let mut x = a.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}
