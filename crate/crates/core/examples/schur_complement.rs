//! Block symbols `[[A, B*], [B, D]]`: the Schur complement on a grid and
//! the congruence `G = L diag(I, Γ) L*` that ties their numerical ranges.

use whc::blockstruct::{congruence_check, diag_identity_gamma, schur_on_grid};
use whc::linalg::c;
use whc::numrange::min_sector;
use whc::{BlockSymbol, LaurentMatrixPoly};

fn main() -> whc::Result<()> {
    // A = 2 + (t + t⁻¹)/2 > 0, B = t⁻¹, D = 3 + i.
    let a = LaurentMatrixPoly::scalar(-1, &[c(0.5, 0.0), c(2.0, 0.0), c(0.5, 0.0)]);
    let b = LaurentMatrixPoly::scalar(-1, &[c(1.0, 0.0)]);
    let d = LaurentMatrixPoly::scalar(0, &[c(3.0, 1.0)]);
    let bs = BlockSymbol::new(a, b, d)?;

    let schur = schur_on_grid(&bs, 8)?;
    println!("min eigenvalue of A on the grid: {:.6}", schur.deltamin);
    let g = bs.assemble().eval_grid(8)?;
    for (j, gamma) in schur.gammas.iter().enumerate() {
        let full = min_sector(&g.values()[j], false)?;
        let reduced = min_sector(&diag_identity_gamma(bs.m(), gamma), false)?;
        println!(
            "node {j}: Γ = {:.6}{:+.6}i, sector of G {:.6}/{:.6}, of diag(I, Γ) {:.6}/{:.6}",
            gamma[(0, 0)].re,
            gamma[(0, 0)].im,
            full.bisector,
            full.halfangle,
            reduced.bisector,
            reduced.halfangle
        );
    }
    println!("congruence residual on 256 nodes: {:.2e}", congruence_check(&bs, 256)?);
    Ok(())
}
