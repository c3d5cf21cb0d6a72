mod common;

use std::f64::consts::PI;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use whc::linalg::{self, c, CMat, C64};
use whc::numrange::{min_sector, nr_boundary, ray_check, ray_disjoint, support, symbol_winding, winding_of_sectors};
use whc::{Error, LaurentMatrixPoly};

fn rayleigh(r: &mut impl Rng, m: &CMat) -> C64 {
    let n = m.nrows();
    let x = nalgebra::DVector::from_fn(n, |_, _| rand_c64(r));
    let x = &x / c(x.norm(), 0.0);
    (x.adjoint() * m * &x)[(0, 0)]
}

/// Matrix whose numerical range sits in a cone around `phi`.
fn rotated_pd(r: &mut impl Rng, n: usize, phi: f64, spread: f64) -> CMat {
    let h = rand_hpd(r, n);
    let k = rand_mat(r, n, n);
    let skew = (&k - k.adjoint()) * c(0.5 * spread, 0.0);
    (h + skew) * C64::from_polar(1.0, phi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rayleigh_quotients_stay_inside(seed in any::<u64>(), n in 1usize..5) {
        let mut r = rng(seed);
        let m = rand_mat(&mut r, n, n);
        let b = nr_boundary(&m, 128);
        for _ in 0..500 {
            let z = rayleigh(&mut r, &m);
            prop_assert!(b.outer_contains(z, 1e-8));
        }
    }

    #[test]
    fn boundary_points_attain_support(seed in any::<u64>(), n in 1usize..4) {
        let mut r = rng(seed);
        let m = rand_mat(&mut r, n, n);
        let b = nr_boundary(&m, 64);
        for u in 0..64 {
            let z = b.bndpoints[u];
            let e = C64::from_polar(1.0, -b.theta(u));
            prop_assert!(((e * z).re - b.support[u]).abs() <= 1e-10);
        }
    }

    #[test]
    fn positive_ray_never_narrows_the_sector(seed in any::<u64>(), n in 1usize..4, phi in -3.1f64..3.1) {
        let mut r = rng(seed);
        let m = rotated_pd(&mut r, n, phi, 0.3);
        if let (Ok(plain), Ok(with)) = (min_sector(&m, false), min_sector(&m, true)) {
            prop_assert!(with.opening() >= plain.opening() - 1e-12);
            // The flagged sector contains the plain one.
            let lo = linalg::wrap_angle(plain.bisector - plain.halfangle - with.bisector);
            let hi = linalg::wrap_angle(plain.bisector + plain.halfangle - with.bisector);
            prop_assert!(lo >= -with.halfangle - 1e-9 && hi <= with.halfangle + 1e-9);
        }
    }

    #[test]
    fn ray_disjoint_gives_a_flagged_sector(seed in any::<u64>(), n in 1usize..4, phi in -3.1f64..3.1) {
        let mut r = rng(seed);
        let m = rotated_pd(&mut r, n, phi, 0.5);
        if ray_disjoint(&m) {
            let s = min_sector(&m, true).unwrap();
            prop_assert!(s.opening() < PI);
            prop_assert!(s.contains(c(1.0, 0.0)));
        }
    }

    #[test]
    fn winding_of_monomial_times_pd(seed in any::<u64>(), m in -3i64..=3, n in 1usize..4) {
        let mut r = rng(seed);
        let g = LaurentMatrixPoly::monomial(m, rand_hpd(&mut r, n));
        prop_assert_eq!(symbol_winding(&g, 256).unwrap().winding, m);
    }
}

#[test]
fn nilpotent_disk() {
    let m = linalg::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
    for u in 0..256 {
        let theta = 2.0 * PI * u as f64 / 256.0;
        assert!((support(&m, theta) - 1.0).abs() < 1e-10);
    }
    assert!(matches!(min_sector(&m, false), Err(Error::VertexInRange { .. })));
}

#[test]
fn ray_distance_is_reported() {
    let m = linalg::diag(&[c(1.0, 1.0), c(1.0, -1.0)]);
    let rc = ray_check(&m, 256);
    assert!(rc.disjoint);
    assert!((rc.distance - 1.0).abs() < 1e-9, "{rc:?}");
    let touching = linalg::diag(&[c(1.0, 0.0), c(-1.0, 0.0)]);
    assert!(!ray_disjoint(&touching));
}

#[test]
fn winding_of_sectors_is_additive_over_concatenation() {
    let b: Vec<f64> = (0..64).map(|j| linalg::wrap_angle(2.0 * PI * j as f64 / 64.0 * 2.0)).collect();
    assert_eq!(winding_of_sectors(&b).unwrap().winding, 2);
    let rev: Vec<f64> = b.iter().rev().copied().collect();
    assert_eq!(winding_of_sectors(&rev).unwrap().winding, -2);
}
