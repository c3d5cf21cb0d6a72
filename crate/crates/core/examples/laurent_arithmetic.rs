//! Laurent matrix polynomials: products, adjoints, projections, grid
//! sampling and the winding number of the determinant.

use whc::linalg::{c, from_real_rows};
use whc::trigpoly::{det_winding, from_grid};
use whc::LaurentMatrixPoly;

fn main() -> whc::Result<()> {
    // G(t) = [[1, t], [t⁻¹, 3]]
    let g = LaurentMatrixPoly::from_entries(&[
        vec![LaurentMatrixPoly::scalar(0, &[c(1.0, 0.0)]), LaurentMatrixPoly::scalar(1, &[c(1.0, 0.0)])],
        vec![LaurentMatrixPoly::scalar(-1, &[c(1.0, 0.0)]), LaurentMatrixPoly::scalar(0, &[c(3.0, 0.0)])],
    ])?;
    println!("G: band [{}, {}], {}x{}", g.kmin(), g.kmax(), g.rows(), g.cols());

    let gg = g.multiply(&g.adjoint_symbol())?;
    println!("G G*: band [{}, {}], energy {:.6}", gg.kmin(), gg.kmax(), gg.energy());
    println!("P+ G G*: band [{}, {}]", gg.project_plus().kmin(), gg.project_plus().kmax());

    let grid = g.eval_grid(64)?;
    let back = from_grid(&grid, g.kmin(), g.kmax())?;
    println!("grid round trip error {:.2e}", back.poly.max_coeff_diff(&g));
    println!("ind det G = {}", det_winding(&grid)?);

    let h = LaurentMatrixPoly::monomial(1, from_real_rows(&[&[2.0, 0.0], &[1.0, 1.0]]));
    println!("ind det (t H) = {}", det_winding(&h.eval_grid(64)?)?);
    println!("ind det (G · t H) = {}", det_winding(&g.multiply(&h)?.eval_grid(64)?)?);

    println!("{}", serde_json::to_string(&g).expect("serializable"));
    Ok(())
}
