//! Partial indices from kernel dimensions of shifted finite sections.

use whc::factorize::{kernel_dimension, partial_indices_estimate, FactorOptions};
use whc::linalg::{c, from_real_rows};
use whc::LaurentMatrixPoly;

fn main() -> whc::Result<()> {
    let opts = FactorOptions::default();
    let s = |k: i64, x: f64| LaurentMatrixPoly::scalar(k, &[c(x, 0.0)]);
    let z = || LaurentMatrixPoly::zeros(1, 1);

    let cases = [
        ("t·I₂", LaurentMatrixPoly::identity(2).shift(1)),
        ("diag(t², t⁻¹)", LaurentMatrixPoly::from_entries(&[vec![s(2, 1.0), z()], vec![z(), s(-1, 1.0)]])?),
        ("[[1, t], [t⁻¹, 0]]", LaurentMatrixPoly::from_entries(&[vec![s(0, 1.0), s(1, 1.0)], vec![s(-1, 1.0), z()]])?),
        (
            "t²(I + 0.2H)",
            LaurentMatrixPoly::monomial(2, from_real_rows(&[&[1.3, 0.1], &[0.1, 1.1]])),
        ),
    ];
    for (name, g) in &cases {
        let p = partial_indices_estimate(g, &opts)?;
        println!(
            "{name:<20} κ = {:?}, total {}, λ = {}, η = {}, det winding {}",
            p.partial, p.total, p.lambda_count, p.eta_count, p.det_winding
        );
        let nus: Vec<String> = p.profile.iter().map(|(s, nu)| format!("ν({s})={nu}")).collect();
        println!("{:<20} {}", "", nus.join(" "));
    }
    // The kernel profile is what the estimator reads.
    let g = &cases[1].1;
    for t in [8, 16, 32] {
        println!("T = {t:2}: ν(0) = {}", kernel_dimension(g, 0, t, opts.kernel_rel));
    }
    Ok(())
}
