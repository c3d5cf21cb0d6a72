//! Numerical range of a matrix: support function, boundary polygon, the
//! minimal sector with vertex at the origin, and the negative-ray test.

use std::f64::consts::PI;

use whc::linalg::{c, from_rows};
use whc::numrange::{min_sector, nr_boundary, ray_check, zero_in_nr};

fn main() {
    let m = from_rows(&[
        &[c(2.0, 1.0), c(0.5, 0.0)],
        &[c(0.0, 0.3), c(1.0, -0.5)],
    ]);
    let b = nr_boundary(&m, 16);
    println!("{:>8} {:>10} {:>22}", "theta", "h(theta)", "boundary point");
    for u in 0..b.ndirs {
        let z = b.bndpoints[u];
        println!("{:8.4} {:10.6} {:10.6} {:+10.6}i", b.theta(u), b.support[u], z.re, z.im);
    }

    println!("0 in W(M): {}", zero_in_nr(&m));
    let plain = min_sector(&m, false).expect("sectorial");
    let with_ray = min_sector(&m, true).expect("sectorial with the positive ray");
    println!(
        "minimal sector: bisector {:.4}, opening {:.4} ({:.1}°)",
        plain.bisector,
        plain.opening(),
        plain.opening() * 180.0 / PI
    );
    println!("sector covering the positive ray: opening {:.4}", with_ray.opening());
    println!("{:?}", ray_check(&m, 256));

    let nilpotent = from_rows(&[&[c(0.0, 0.0), c(2.0, 0.0)], &[c(0.0, 0.0), c(0.0, 0.0)]]);
    println!("nilpotent: 0 in W = {}, h = {:.12}", zero_in_nr(&nilpotent), nr_boundary(&nilpotent, 32).support[5]);
}
