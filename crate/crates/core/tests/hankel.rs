mod common;

use common::*;
use proptest::prelude::*;
use whc::hankel::{hankel_matrix, hankel_norm, hankel_sq_spectrum, nehari_distance};
use whc::linalg;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn norm_grows_then_freezes(seed in any::<u64>(), r in 1i64..6, rows in 1usize..3, cols in 1usize..3) {
        let mut g = rng(seed);
        let b = rand_poly(&mut g, rows, cols, -r, 3);
        let mut prev = 0.0;
        for n in 1..=(r as usize) {
            let h = hankel_norm(&b, n);
            prop_assert!(h >= prev - 1e-12);
            prev = h;
        }
        for n in [r as usize + 1, 2 * r as usize + 3] {
            prop_assert!((hankel_norm(&b, n) - prev).abs() <= 1e-12);
        }
        prop_assert!(hankel_sq_spectrum(&b, r as usize).exact);
    }

    #[test]
    fn norm_bounded_by_symbol_sup(seed in any::<u64>(), r in 1i64..5) {
        let mut g = rng(seed);
        let b = rand_poly(&mut g, 2, 2, -r, r);
        let sup = b.eval_grid(256).unwrap().values().iter().map(linalg::spectral_norm).fold(0.0, f64::max);
        // A 256-node sup of a degree-≤5 polynomial is within a hair of the true sup.
        prop_assert!(hankel_norm(&b, r as usize) <= sup * (1.0 + 1e-3));
    }

    #[test]
    fn shift_embeds(seed in any::<u64>(), n in 2usize..8) {
        // Block (i, j+1) of H_{t⁻¹B} is block (i, j) of H_B.
        let mut g = rng(seed);
        let b = rand_poly(&mut g, 2, 1, -3, 2);
        let (r, c) = b.shape();
        let shifted = hankel_matrix(&b.shift(-1), n);
        let embedded = shifted.view((0, c), ((n - 1) * r, (n - 1) * c)).into_owned();
        prop_assert_eq!(embedded, hankel_matrix(&b, n - 1));
        // The new first column carries c_0, …, c_{−(n−1)} of B.
        for i in 0..n {
            prop_assert_eq!(shifted.view((i * r, 0), (r, c)).into_owned(), b.coeff(-(i as i64)));
        }
    }
}

#[test]
fn two_tap_symbol() {
    let b = sc(-2, &[1.0, 2.0]);
    let r2 = 2f64.sqrt();
    for n in [2, 8, 16] {
        let s = hankel_sq_spectrum(&b, n);
        assert!((s.norm() - (r2 + 1.0)).abs() < 1e-10);
        assert!((s.singvals[1] - (r2 - 1.0)).abs() < 1e-10);
        let sq = s.sq_spectrum();
        assert_eq!(sq.len(), 3);
        assert!((sq[1] - (3.0 + 2.0 * r2)).abs() < 1e-10);
    }
    assert!((nehari_distance(&b).unwrap() - (r2 + 1.0)).abs() < 1e-10);
}

#[test]
fn analytic_symbols_have_zero_hankel() {
    let b = sc(0, &[1.0, -2.0, 0.5]);
    assert_eq!(hankel_norm(&b, 5), 0.0);
    assert_eq!(hankel_sq_spectrum(&b, 5).sq_spectrum(), vec![0.0]);
}
