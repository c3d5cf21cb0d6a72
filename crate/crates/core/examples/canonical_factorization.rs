//! Canonical factorization `G = G₊ G₋` by finite sections, with the
//! condition profile that signals when no canonical factorization exists.

use whc::factorize::{canonical_factorize, condprofile, factorize, FactorOptions};
use whc::linalg::c;
use whc::LaurentMatrixPoly;

fn family(gamma: f64) -> whc::Result<LaurentMatrixPoly> {
    let s = |k: i64, x: f64| LaurentMatrixPoly::scalar(k, &[c(x, 0.0)]);
    LaurentMatrixPoly::from_entries(&[vec![s(0, 1.0), s(1, 1.0)], vec![s(-1, 1.0), s(0, 1.0 + gamma)]])
}

fn main() -> whc::Result<()> {
    let opts = FactorOptions::default();
    let g = family(2.0)?;
    let f = canonical_factorize(&g, &opts)?;
    let gp = f.gplus.as_ref().unwrap();
    let gm = f.gminus.as_ref().unwrap();
    println!("γ = 2: residual {:.2e}, G₊ band [{}, {}], G₋ band [{}, {}]", f.residual.unwrap(), gp.kmin(), gp.kmax(), gm.kmin(), gm.kmax());
    println!("G₊(0) =\n{}G₋ coefficient of t⁻¹ =\n{}", gp.coeff(0), gm.coeff(-1));

    println!("{:>7}  {:>28}  status", "γ", "cond at T/2, T, 2T");
    for gamma in [2.0, -0.5, -0.75, -0.9, -1.0, -1.1, -1.25, -1.5] {
        let g = family(gamma)?;
        let profile = condprofile(&g, opts.trunc);
        let r = factorize(&g, &opts)?;
        let cells: Vec<String> = profile.iter().map(|x| format!("{x:8.2e}")).collect();
        println!("{gamma:>7}  {:>28}  {:?} {:?}", cells.join(" "), r.status, r.partial.unwrap_or_default());
    }
    Ok(())
}
