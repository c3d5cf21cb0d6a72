//! Hankel matrices of anti-analytic parts, their singular values and the
//! distance to bounded analytic functions.

use whc::hankel::{hankel_matrix, hankel_sq_spectrum, nehari_distance};
use whc::linalg::c;
use whc::LaurentMatrixPoly;

fn main() -> whc::Result<()> {
    // B = 2t⁻¹ + t⁻² + 5 + t
    let b = LaurentMatrixPoly::scalar(-2, &[c(1.0, 0.0), c(2.0, 0.0), c(5.0, 0.0), c(1.0, 0.0)]);
    println!("H_B, 3 blocks:\n{}", hankel_matrix(&b, 3));
    for n in [1, 2, 8, 16] {
        let s = hankel_sq_spectrum(&b, n);
        println!("N = {n:2}: exact {:5}, singular values {:?}", s.exact, &s.singvals[..s.singvals.len().min(3)]);
    }
    let s = hankel_sq_spectrum(&b, 2);
    println!("σ(H_B H_B*) = {:?}", s.sq_spectrum());
    println!("dist(B, H∞) = {:.15} (√2 + 1 = {:.15})", nehari_distance(&b)?, 2f64.sqrt() + 1.0);
    Ok(())
}
