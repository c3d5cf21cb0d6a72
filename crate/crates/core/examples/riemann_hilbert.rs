//! Riemann–Hilbert problem `φ⁺ = G φ⁻ + g` through the canonical
//! factorization, with an independent residual check.

use whc::factorize::{solve_rh, FactorOptions};
use whc::linalg::c;
use whc::LaurentMatrixPoly;

fn main() -> whc::Result<()> {
    let s = |k: i64, x: f64| LaurentMatrixPoly::scalar(k, &[c(x, 0.0)]);
    let g = LaurentMatrixPoly::from_entries(&[vec![s(0, 1.0), s(1, 1.0)], vec![s(-1, 1.0), s(0, 3.0)]])?;
    let rhs = LaurentMatrixPoly::from_entries(&[
        vec![LaurentMatrixPoly::scalar(-2, &[c(0.5, 0.0), c(0.0, 1.0), c(1.0, 0.0)])],
        vec![s(1, -2.0)],
    ])?;
    let sol = solve_rh(&g, &rhs, &FactorOptions::default())?;
    println!("residual on the doubled grid: {:.2e}", sol.residual);
    println!("φ⁺ band [{}, {}], φ⁻ band [{}, {}]", sol.phiplus.kmin(), sol.phiplus.kmax(), sol.phiminus.kmin(), sol.phiminus.kmax());

    let t = c(0.6f64.cos(), 0.6f64.sin());
    let lhs = sol.phiplus.eval(t);
    let rhs_t = g.eval(t) * sol.phiminus.eval(t) + rhs.eval(t);
    println!("at t = e^{{0.6i}}: |φ⁺ − Gφ⁻ − g| = {:.2e}", (lhs - rhs_t).norm());

    let id = LaurentMatrixPoly::identity(2);
    let sol = solve_rh(&id, &rhs, &FactorOptions::default())?;
    println!("G = I: φ⁺ − φ⁻ − g = {:.2e}", sol.phiplus.sub(&sol.phiminus)?.max_coeff_diff(&rhs));
    Ok(())
}
