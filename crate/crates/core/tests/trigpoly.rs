mod common;

use common::*;
use proptest::prelude::*;
use whc::linalg::{self, c};
use whc::trigpoly::{det_winding, from_grid, inverse_on_grid};
use whc::LaurentMatrixPoly;

fn parseval_gap(p: &LaurentMatrixPoly, n: usize) -> f64 {
    let grid = p.eval_grid(n).unwrap();
    let mean: f64 = grid.values().iter().map(|v| v.norm_squared()).sum::<f64>() / n as f64;
    (mean - p.energy()).abs() / p.energy().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parseval(seed in any::<u64>(), rows in 1usize..4, cols in 1usize..4, lo in -6i64..=0, hi in 0i64..=6) {
        let mut r = rng(seed);
        let p = rand_poly(&mut r, rows, cols, lo, hi);
        let n = [16, 32, 64][(seed % 3) as usize];
        prop_assert!(parseval_gap(&p, n) <= 1e-12);
    }

    #[test]
    fn multiply_is_associative(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let f = rand_poly(&mut r, n, n, -3, 2);
        let g = rand_poly(&mut r, n, n, -1, 3);
        let h = rand_poly(&mut r, n, n, -2, 2);
        let left = f.multiply(&g).unwrap().multiply(&h).unwrap();
        let right = f.multiply(&g.multiply(&h).unwrap()).unwrap();
        prop_assert!(left.max_coeff_diff(&right) <= 1e-12 * left.energy().sqrt().max(1.0));
    }

    #[test]
    fn adjoint_is_an_involution(seed in any::<u64>(), rows in 1usize..4, cols in 1usize..4) {
        let mut r = rng(seed);
        let p = rand_poly(&mut r, rows, cols, -4, 3);
        prop_assert_eq!(p.adjoint_symbol().adjoint_symbol(), p);
    }

    #[test]
    fn projections(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = rand_poly(&mut r, 2, 3, -5, 5);
        prop_assert_eq!(p.project_plus().project_plus(), p.project_plus());
        prop_assert!(p.project_minus().project_plus().is_zero());
        prop_assert!(p.project_plus().project_minus().is_zero());
        prop_assert_eq!(p.project_plus().add(&p.project_minus()).unwrap(), p);
    }

    #[test]
    fn winding_is_additive(seed in any::<u64>(), m1 in -3i64..=3, m2 in -3i64..=3) {
        // Near-constant factors times monomials are invertible on the grid.
        let mut r = rng(seed);
        let n = 2;
        let small = |r: &mut rand_chacha::ChaCha8Rng| rand_poly(r, n, n, -2, 2).scale(c(0.1, 0.0));
        let f = LaurentMatrixPoly::identity(n).add(&small(&mut r)).unwrap().shift(m1);
        let h = LaurentMatrixPoly::monomial(0, linalg::diag(&[c(1.0, 0.0), c(0.0, 1.0)]))
            .add(&small(&mut r)).unwrap().shift(m2);
        let wf = det_winding(&f.eval_grid(256).unwrap()).unwrap();
        let wh = det_winding(&h.eval_grid(256).unwrap()).unwrap();
        let wfh = det_winding(&f.multiply(&h).unwrap().eval_grid(256).unwrap()).unwrap();
        prop_assert_eq!(wf, n as i64 * m1);
        prop_assert_eq!(wfh, wf + wh);
    }

    #[test]
    fn grid_round_trip(seed in any::<u64>(), lo in -5i64..=0, hi in 0i64..=5) {
        let mut r = rng(seed);
        let p = rand_poly(&mut r, 2, 2, lo, hi);
        let back = from_grid(&p.eval_grid(32).unwrap(), lo, hi).unwrap();
        prop_assert!(back.poly.max_coeff_diff(&p) <= 1e-13);
        prop_assert!(back.discarded_energy <= 1e-24);
    }

    #[test]
    fn shift_and_eval_commute(seed in any::<u64>(), m in -4i64..=4, theta in 0.0f64..std::f64::consts::TAU) {
        let mut r = rng(seed);
        let p = rand_poly(&mut r, 2, 2, -2, 2);
        let t = whc::C64::from_polar(1.0, theta);
        let lhs = p.shift(m).eval(t);
        let rhs = p.eval(t) * t.powi(m as i32);
        prop_assert!((lhs - rhs).norm() <= 1e-12);
    }
}

#[test]
fn grid_inverse_matches_symbol_inverse() {
    // (I + 0.3 t E12)^{-1} = I − 0.3 t E12 exactly.
    let e = linalg::from_real_rows(&[&[0.0, 0.3], &[0.0, 0.0]]);
    let p = LaurentMatrixPoly::identity(2).add(&LaurentMatrixPoly::monomial(1, e.clone())).unwrap();
    let inv = LaurentMatrixPoly::identity(2).sub(&LaurentMatrixPoly::monomial(1, e)).unwrap();
    let (grid, cond) = inverse_on_grid(&p.eval_grid(16).unwrap()).unwrap();
    assert!(cond < 2.0);
    assert!(from_grid(&grid, 0, 1).unwrap().poly.max_coeff_diff(&inv) < 1e-14);
}

#[test]
fn json_file_round_trip_is_bit_exact() {
    let mut r = rng(11);
    let p = rand_poly(&mut r, 2, 3, -3, 2);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    whc::report::write_symbol(&path, &p).unwrap();
    let back: LaurentMatrixPoly = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back, p);
}

#[test]
fn json_rejects_inconsistent_band() {
    let text = r#"{"rows":1,"cols":1,"kmin":-1,"kmax":1,"coeffs":[[[[1.0,0.0]]],[[[2.0,0.0]]]]}"#;
    let err = serde_json::from_str::<LaurentMatrixPoly>(text).unwrap_err().to_string();
    assert!(err.contains("coeffs"), "{err}");
}
