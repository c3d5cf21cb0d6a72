//! The block symbol `G = [[A, B*], [B, D]]` and the Schur complement
//! `Γ = D − B A⁻¹ B*` of its positive definite `(1,1)` block.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::trigpoly::LaurentMatrixPoly;

/// Coefficientwise tolerance for `A(t)* = A(t)`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Default lower bound `δ₀` for `λ_min(A)` on the grid.
pub const DEFAULT_DELTA0: f64 = 1e-8;

/// `A` is `m×m` Hermitian-valued, `B` is `k×m`, `D` is `k×k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlockFile", into = "BlockFile")]
pub struct BlockSymbol {
    a: LaurentMatrixPoly,
    b: LaurentMatrixPoly,
    d: LaurentMatrixPoly,
}

impl BlockSymbol {
    pub fn new(a: LaurentMatrixPoly, b: LaurentMatrixPoly, d: LaurentMatrixPoly) -> Result<Self> {
        let m = a.rows();
        let k = d.rows();
        if !a.is_square() || !d.is_square() || b.shape() != (k, m) {
            return Err(Error::Shape(format!(
                "blocks A {:?}, B {:?}, D {:?} do not fit [[A, B*], [B, D]]",
                a.shape(),
                b.shape(),
                d.shape()
            )));
        }
        let adj = a.adjoint_symbol();
        for k in a.kmin().min(adj.kmin())..=a.kmax().max(adj.kmax()) {
            let deviation = (a.coeff(k) - adj.coeff(k)).norm();
            if deviation > HERMITIAN_TOL {
                return Err(Error::NotHermitian { k, deviation });
            }
        }
        Ok(Self { a, b, d })
    }

    pub fn a(&self) -> &LaurentMatrixPoly {
        &self.a
    }

    pub fn b(&self) -> &LaurentMatrixPoly {
        &self.b
    }

    pub fn d(&self) -> &LaurentMatrixPoly {
        &self.d
    }

    /// Size `m` of the `A` block.
    pub fn m(&self) -> usize {
        self.a.rows()
    }

    /// Size `k` of the `D` block.
    pub fn k(&self) -> usize {
        self.d.rows()
    }

    /// Whether `A = I` coefficientwise.
    pub fn a_is_identity(&self, tol: f64) -> bool {
        self.a.approx_eq(&LaurentMatrixPoly::identity(self.m()), tol)
    }

    /// Full `(m+k)×(m+k)` symbol.
    pub fn assemble(&self) -> LaurentMatrixPoly {
        let bstar = self.b.adjoint_symbol();
        let polys = [&self.a, &bstar, &self.b, &self.d];
        let kmin = polys.iter().map(|p| p.kmin()).min().unwrap();
        let kmax = polys.iter().map(|p| p.kmax()).max().unwrap();
        let coeffs = (kmin..=kmax)
            .map(|k| {
                let (a, bs, b, d) = (self.a.coeff(k), bstar.coeff(k), self.b.coeff(k), self.d.coeff(k));
                linalg::block(&[vec![&a, &bs], vec![&b, &d]])
            })
            .collect();
        let n = self.m() + self.k();
        LaurentMatrixPoly::new(n, n, kmin, coeffs).expect("blocks fit")
    }

    /// Grid size covering every block and the assembled symbol.
    pub fn bandwidth(&self) -> usize {
        let lo = self.a.kmin().min(self.b.kmin()).min(self.d.kmin()).min(-self.b.kmax());
        let hi = self.a.kmax().max(self.b.kmax()).max(self.d.kmax()).max(-self.b.kmin());
        (hi - lo + 1) as usize
    }
}

/// Pointwise Schur complements on a grid.
#[derive(Clone, Debug)]
pub struct SchurGrid {
    pub npoints: usize,
    pub gammas: Vec<CMat>,
    /// Smallest eigenvalue of `A(t_j)` over the grid.
    pub deltamin: f64,
}

struct NodeBlocks {
    a: Vec<CMat>,
    b: Vec<CMat>,
    d: Vec<CMat>,
}

fn sample(bs: &BlockSymbol, npoints: usize) -> Result<NodeBlocks> {
    Ok(NodeBlocks {
        a: bs.a.eval_grid(npoints)?.into_values(),
        b: bs.b.eval_grid(npoints)?.into_values(),
        d: bs.d.eval_grid(npoints)?.into_values(),
    })
}

pub fn schur_on_grid(bs: &BlockSymbol, npoints: usize) -> Result<SchurGrid> {
    schur_on_grid_with(bs, npoints, DEFAULT_DELTA0)
}

pub fn schur_on_grid_with(bs: &BlockSymbol, npoints: usize, delta0: f64) -> Result<SchurGrid> {
    let s = sample(bs, npoints)?;
    let mut deltamin = f64::INFINITY;
    let mut gammas = Vec::with_capacity(npoints);
    for j in 0..npoints {
        let lmin = linalg::lambda_min(&s.a[j]);
        if !(lmin >= delta0) {
            return Err(Error::NotPositiveDefinite {
                node: j,
                lambda_min: lmin,
            });
        }
        deltamin = deltamin.min(lmin);
        let chol = linalg::hermitian_part(&s.a[j])
            .cholesky()
            .ok_or(Error::NotPositiveDefinite {
                node: j,
                lambda_min: lmin,
            })?;
        // A⁻¹ B*
        let ainv_bstar = chol.solve(&s.b[j].adjoint());
        gammas.push(&s.d[j] - &s.b[j] * ainv_bstar);
    }
    Ok(SchurGrid {
        npoints,
        gammas,
        deltamin,
    })
}

/// Largest Frobenius residual of `G = L · diag(I, Γ) · L*` over the grid,
/// with `L = [[A^{1/2}, 0], [B A^{−1/2}, I]]`.
pub fn congruence_check(bs: &BlockSymbol, npoints: usize) -> Result<f64> {
    let schur = schur_on_grid(bs, npoints)?;
    let s = sample(bs, npoints)?;
    let g = bs.assemble().eval_grid(npoints)?;
    let (m, k) = (bs.m(), bs.k());
    let zero_mk = linalg::zeros(m, k);
    let zero_km = linalg::zeros(k, m);
    let eye_m = linalg::eye(m);
    let eye_k = linalg::eye(k);
    let mut worst = 0.0f64;
    for j in 0..npoints {
        let (root, inv_root) = linalg::sqrt_pd(&s.a[j], j)?;
        let lower = &s.b[j] * inv_root;
        let l = linalg::block(&[vec![&root, &zero_mk], vec![&lower, &eye_k]]);
        let mid = linalg::block(&[vec![&eye_m, &zero_mk], vec![&zero_km, &schur.gammas[j]]]);
        let r = (&g.values()[j] - &l * mid * l.adjoint()).norm();
        worst = worst.max(r);
    }
    Ok(worst)
}

/// `diag(I_m, Γ)` at one node.
pub fn diag_identity_gamma(m: usize, gamma: &CMat) -> CMat {
    let k = gamma.nrows();
    linalg::block(&[
        vec![&linalg::eye(m), &linalg::zeros(m, k)],
        vec![&linalg::zeros(k, m), gamma],
    ])
}

#[derive(Serialize, Deserialize)]
struct BlockFile {
    #[serde(rename = "A")]
    a: LaurentMatrixPoly,
    #[serde(rename = "B")]
    b: LaurentMatrixPoly,
    #[serde(rename = "D")]
    d: LaurentMatrixPoly,
}

impl TryFrom<BlockFile> for BlockSymbol {
    type Error = Error;

    fn try_from(f: BlockFile) -> Result<Self> {
        BlockSymbol::new(f.a, f.b, f.d)
    }
}

impl From<BlockSymbol> for BlockFile {
    fn from(bs: BlockSymbol) -> Self {
        BlockFile {
            a: bs.a,
            b: bs.b,
            d: bs.d,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, from_real_rows};

    fn sc(kmin: i64, v: &[f64]) -> LaurentMatrixPoly {
        LaurentMatrixPoly::scalar(kmin, &v.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
    }

    #[test]
    fn assemble_examples() {
        let bs = BlockSymbol::new(sc(0, &[1.0]), sc(0, &[0.0]), sc(0, &[5.0])).unwrap();
        assert!(bs
            .assemble()
            .approx_eq(&LaurentMatrixPoly::constant(from_real_rows(&[&[1.0, 0.0], &[0.0, 5.0]])), 0.0));

        let gamma = 2.0;
        let bs = BlockSymbol::new(sc(0, &[1.0]), sc(-1, &[1.0]), sc(0, &[1.0 + gamma])).unwrap();
        let g = bs.assemble();
        assert_eq!(g.coeff(1), from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]));
        assert_eq!(g.coeff(-1), from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]));
        assert_eq!(g.coeff(0), from_real_rows(&[&[1.0, 0.0], &[0.0, 3.0]]));

        let bs = BlockSymbol::new(sc(0, &[2.0]), sc(0, &[1.0]), sc(0, &[1.0])).unwrap();
        assert!(bs
            .assemble()
            .approx_eq(&LaurentMatrixPoly::constant(from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]])), 0.0));
    }

    #[test]
    fn schur_examples() {
        // A = I, scalar b, d: Γ = d − |b|²
        let b = LaurentMatrixPoly::scalar(-1, &[c(1.0, 1.0), c(0.5, 0.0)]);
        let d = sc(0, &[4.0]);
        let bs = BlockSymbol::new(sc(0, &[1.0]), b.clone(), d.clone()).unwrap();
        let sg = schur_on_grid(&bs, 16).unwrap();
        for (j, g) in sg.gammas.iter().enumerate() {
            let t = crate::trigpoly::node(j, 16);
            let want = d.eval(t)[(0, 0)] - b.eval(t)[(0, 0)].norm_sqr();
            assert!((g[(0, 0)] - want).norm() < 1e-12);
        }
        let bs = BlockSymbol::new(sc(0, &[2.0]), sc(0, &[1.0]), sc(0, &[1.0])).unwrap();
        let sg = schur_on_grid(&bs, 8).unwrap();
        assert!(sg.gammas.iter().all(|g| (g[(0, 0)] - c(0.5, 0.0)).norm() < 1e-15));
        assert_eq!(sg.deltamin, 2.0);
    }

    #[test]
    fn schur_zero_b_is_d() {
        let d = LaurentMatrixPoly::scalar(-1, &[c(0.0, 1.0), c(3.0, 0.0), c(1.0, 0.0)]);
        let bs = BlockSymbol::new(sc(0, &[1.0]), sc(0, &[0.0]), d.clone()).unwrap();
        let sg = schur_on_grid(&bs, 8).unwrap();
        let dg = d.eval_grid(8).unwrap();
        for (g, want) in sg.gammas.iter().zip(dg.values()) {
            assert_eq!(g, want);
        }
        assert_eq!(congruence_check(&bs, 8).unwrap(), 0.0);
    }

    #[test]
    fn congruence_small_example() {
        let bs = BlockSymbol::new(sc(0, &[2.0]), sc(0, &[1.0]), sc(0, &[1.0])).unwrap();
        assert!(congruence_check(&bs, 8).unwrap() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian_a() {
        let a = sc(0, &[1.0, 0.5]);
        let err = BlockSymbol::new(a, sc(0, &[0.0]), sc(0, &[1.0])).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn rejects_indefinite_a_naming_node() {
        // A(t) = 1 + 0.6(t + t⁻¹) dips to −0.2 at t = −1.
        let a = sc(-1, &[0.6, 1.0, 0.6]);
        let bs = BlockSymbol::new(a, sc(0, &[0.0]), sc(0, &[1.0])).unwrap();
        match schur_on_grid(&bs, 8) {
            Err(Error::NotPositiveDefinite { node, .. }) => assert!((3..=5).contains(&node)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn shape_mismatch() {
        let err = BlockSymbol::new(sc(0, &[1.0]), LaurentMatrixPoly::identity(2), sc(0, &[1.0])).unwrap_err();
        assert!(matches!(err, Error::Shape(_)));
    }
}
