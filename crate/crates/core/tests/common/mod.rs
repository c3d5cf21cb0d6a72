#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use whc::linalg::{self, c, CMat, C64};
use whc::{BlockSymbol, LaurentMatrixPoly};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_c64(r: &mut impl Rng) -> C64 {
    c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
}

pub fn rand_mat(r: &mut impl Rng, rows: usize, cols: usize) -> CMat {
    CMat::from_fn(rows, cols, |_, _| rand_c64(r))
}

pub fn rand_poly(r: &mut impl Rng, rows: usize, cols: usize, kmin: i64, kmax: i64) -> LaurentMatrixPoly {
    let coeffs = (kmin..=kmax).map(|_| rand_mat(r, rows, cols)).collect();
    LaurentMatrixPoly::new(rows, cols, kmin, coeffs).unwrap()
}

/// Hermitian positive definite with spectrum in `[0.1, 1.1]`-ish.
pub fn rand_hpd(r: &mut impl Rng, n: usize) -> CMat {
    let p = rand_mat(r, n, n);
    let h = &p * p.adjoint();
    let top = linalg::lambda_max(&h).max(1e-12);
    h / c(top, 0.0) + linalg::eye(n) * c(0.1, 0.0)
}

pub fn hermitian_symbol(p: &LaurentMatrixPoly) -> LaurentMatrixPoly {
    p.add(&p.adjoint_symbol()).unwrap().scale(c(0.5, 0.0))
}

/// `[[A, B*], [B, D]]` with `A = P P* + 0.1 I`, `P` analytic of degree
/// `band / 2`, and random `B`, `D`.
pub fn rand_block(r: &mut impl Rng, m: usize, k: usize, band: usize) -> BlockSymbol {
    let half = (band / 2) as i64;
    let p = rand_poly(r, m, m, 0, half);
    let pp = p.multiply(&p.adjoint_symbol()).unwrap();
    let a = hermitian_symbol(&pp).add(&LaurentMatrixPoly::identity(m).scale(c(0.1, 0.0))).unwrap();
    let b = rand_poly(r, k, m, -half, half);
    let d = rand_poly(r, k, k, -half, half);
    BlockSymbol::new(a, b, d).unwrap()
}

pub fn sc(kmin: i64, v: &[f64]) -> LaurentMatrixPoly {
    LaurentMatrixPoly::scalar(kmin, &v.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
}

/// `A = 1`, `B = t⁻¹`, `D = 1 + γ`.
pub fn gamma_family(gamma: f64) -> BlockSymbol {
    BlockSymbol::new(sc(0, &[1.0]), sc(-1, &[1.0]), sc(0, &[1.0 + gamma])).unwrap()
}

/// The assembled family symbol `[[1, t], [t⁻¹, 1 + γ]]`.
pub fn gamma_symbol(gamma: f64) -> LaurentMatrixPoly {
    gamma_family(gamma).assemble()
}

pub fn max_rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}
