//! Finite-section Wiener–Hopf factorization on the unit circle.
//!
//! For `G = G₊ G₋` with `G₋(∞) = I`, the function `Ψ = G₋⁻¹ − I` has only
//! negative Fourier modes and `G (I + Ψ) = G₊` has none. Truncating `Ψ` to
//! the modes `−1, …, −T` turns `P₋(G (I + Ψ)) = 0` into a block Toeplitz
//! system
//!
//! ```text
//! Σ_{l=1..T} G_{l−i} Ψ_{−l} = −G_{−i},   i = 1..T,
//! ```
//!
//! whose matrix is the `T`-th finite section of `φ ↦ P₋(Gφ)` on the
//! negative modes. Its kernel consists of the homogeneous solutions of
//! `φ⁺ = G φ⁻`, so the same operator, shifted by `t^{−s}` and sectioned
//! rectangularly, also yields the partial indices: with
//! `ν(s) = dim ker = Σ_j max(κ_j − s, 0)` the second difference
//! `ν(s−1) − 2ν(s) + ν(s+1)` counts the indices equal to `s`.

use serde::{Deserialize, Serialize};

use crate::certify::{Certificate, Claim};
use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::trigpoly::{self, from_grid, inverse_on_grid, LaurentMatrixPoly};

#[derive(Clone, Debug, PartialEq)]
pub struct FactorOptions {
    /// Working truncation `T` (number of negative modes kept in `Ψ`).
    pub trunc: usize,
    /// Residual and tail tolerance.
    pub tol: f64,
    /// Grid size; `None` derives it from `trunc` and the symbol bandwidth.
    pub npoints: Option<usize>,
    /// Finite sections above this condition number count as singular.
    pub cond_max: f64,
    /// Relative singular value threshold for numerical kernels.
    pub kernel_rel: f64,
    /// Extra shifts on each side of `det_winding / n`.
    pub shifts_window: i64,
    /// Truncation doublings allowed when the residual misses `tol`.
    pub max_refinements: usize,
}

impl Default for FactorOptions {
    fn default() -> Self {
        Self {
            trunc: 32,
            tol: 1e-8,
            npoints: None,
            cond_max: 1e10,
            kernel_rel: 1e-8,
            shifts_window: 3,
            max_refinements: 2,
        }
    }
}

impl FactorOptions {
    fn grid_for(&self, g: &LaurentMatrixPoly, trunc: usize) -> usize {
        let auto = trigpoly::default_grid_size(trunc + g.bandwidth());
        self.npoints.map_or(auto, |n| n.max(auto))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorStatus {
    Canonical,
    NotCanonical,
    NonConvergent,
    Unstable,
    Singular,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationResult {
    pub status: FactorStatus,
    pub gplus: Option<LaurentMatrixPoly>,
    pub gminus: Option<LaurentMatrixPoly>,
    /// `max_j ‖G(t_j) − G₊(t_j) G₋(t_j)‖_F`
    pub residual: Option<f64>,
    /// Partial indices in nonincreasing order.
    pub partial: Option<Vec<i64>>,
    pub total: Option<i64>,
    pub lambda_count: Option<i64>,
    pub eta_count: Option<i64>,
    /// Condition numbers of the square sections at `T/2`, `T`, `2T`.
    pub condprofile: Vec<f64>,
    pub trunc: usize,
    /// Root-sum-square of coefficients outside the declared bands of `G₊`, `G₋`.
    pub tail_plus: Option<f64>,
    pub tail_minus: Option<f64>,
    pub diagnostics: Vec<String>,
}

impl FactorizationResult {
    pub fn is_canonical(&self) -> bool {
        self.status == FactorStatus::Canonical
    }
}

/// Square block section: block `(i, l)` is `G_{l−i}`, `i, l = 1..T`.
pub fn square_section(g: &LaurentMatrixPoly, trunc: usize) -> CMat {
    section(g, trunc, trunc)
}

/// Rectangular section covering every mode `Gφ` reaches for `φ` supported
/// on `−1, …, −T`.
pub fn rect_section(g: &LaurentMatrixPoly, trunc: usize) -> CMat {
    let extra = g.kmin().min(0).unsigned_abs() as usize;
    section(g, trunc + extra, trunc)
}

fn section(g: &LaurentMatrixPoly, nrows: usize, ncols: usize) -> CMat {
    let (r, c) = g.shape();
    let mut m = linalg::zeros(nrows * r, ncols * c);
    for i in 0..nrows {
        for l in 0..ncols {
            if let Some(block) = g.coeff_ref(l as i64 - i as i64) {
                m.view_mut((i * r, l * c), (r, c)).copy_from(block);
            }
        }
    }
    m
}

pub fn condprofile(g: &LaurentMatrixPoly, trunc: usize) -> Vec<f64> {
    [trunc / 2, trunc, 2 * trunc]
        .iter()
        .map(|&t| linalg::cond(&square_section(g, t.max(1))))
        .collect()
}

struct Attempt {
    gplus: LaurentMatrixPoly,
    gminus: LaurentMatrixPoly,
    residual: f64,
    tail_plus: f64,
    tail_minus: f64,
    npoints: usize,
}

fn attempt(g: &LaurentMatrixPoly, trunc: usize, opts: &FactorOptions) -> Result<Attempt> {
    let n = g.rows();
    let t = trunc;
    let m = square_section(g, t);
    let mut rhs = linalg::zeros(t * n, n);
    for i in 0..t {
        rhs.view_mut((i * n, 0), (n, n)).copy_from(&(-g.coeff(-(i as i64) - 1)));
    }
    let psi = m.full_piv_lu().solve(&rhs).ok_or(Error::NotCanonical {
        condprofile: vec![f64::INFINITY],
    })?;
    // I + Ψ with Ψ_{−l} in rows of block l−1, stored from k = −T upward.
    let mut coeffs: Vec<CMat> = (0..t)
        .rev()
        .map(|l| psi.view((l * n, 0), (n, n)).into_owned())
        .collect();
    coeffs.push(linalg::eye(n));
    let ipsi = LaurentMatrixPoly::new(n, n, -(t as i64), coeffs)?;

    let prod = g.multiply(&ipsi)?;
    let gplus = prod.project_plus();
    let tail_plus = prod.project_minus().energy().sqrt();

    let npoints = opts.grid_for(g, t);
    let (ipsi_inv, _) = inverse_on_grid(&ipsi.eval_grid(npoints)?)?;
    let minus = from_grid(&ipsi_inv, -(t as i64), 0)?;
    let gminus = minus.poly;

    let gg = g.eval_grid(npoints)?;
    let fac = gplus.eval_grid(npoints)?.mul(&gminus.eval_grid(npoints)?)?;
    Ok(Attempt {
        residual: gg.max_diff(&fac),
        gplus,
        gminus,
        tail_plus,
        tail_minus: minus.discarded_energy.sqrt(),
        npoints,
    })
}

/// Canonical factorization `G = G₊ G₋` with `G₋(∞) = I`.
///
/// Fails with [`Error::NotCanonical`] when the square sections stay above
/// `cond_max`, when `det G` winds, or when a factor is not invertible
/// with zero determinant winding; with [`Error::NonConvergent`] when the
/// residual misses `tol` after the allowed refinements.
pub fn canonical_factorize(g: &LaurentMatrixPoly, opts: &FactorOptions) -> Result<FactorizationResult> {
    if !g.is_square() {
        return Err(Error::Shape(format!("cannot factorize a {}x{} symbol", g.rows(), g.cols())));
    }
    let n = g.rows();
    let grid = g.eval_grid(opts.grid_for(g, opts.trunc))?;
    inverse_on_grid(&grid)?;
    let winding = trigpoly::det_winding(&grid)?;

    let mut trunc = opts.trunc.max(2);
    let mut profile = condprofile(g, trunc);
    if winding != 0 {
        return Err(Error::NotCanonical { condprofile: profile });
    }
    if profile[1] > opts.cond_max {
        if profile[2] > opts.cond_max {
            return Err(Error::NotCanonical { condprofile: profile });
        }
        trunc *= 2;
        profile = condprofile(g, trunc);
    }

    let mut diagnostics = Vec::new();
    let mut refinements = 0;
    let att = loop {
        let att = attempt(g, trunc, opts).map_err(|e| match e {
            Error::NotCanonical { .. } => Error::NotCanonical {
                condprofile: profile.clone(),
            },
            e => e,
        })?;
        if att.residual <= opts.tol && att.tail_minus <= opts.tol {
            break att;
        }
        if refinements == opts.max_refinements {
            return Err(Error::NonConvergent {
                residual: att.residual,
                tol: opts.tol,
                condprofile: profile,
            });
        }
        diagnostics.push(format!(
            "residual {:e} at truncation {trunc}; refining",
            att.residual
        ));
        refinements += 1;
        trunc *= 2;
        profile = condprofile(g, trunc);
    };

    for (name, factor) in [("G+", &att.gplus), ("G-", &att.gminus)] {
        let fg = factor.eval_grid(att.npoints)?;
        let ok = inverse_on_grid(&fg).is_ok() && trigpoly::det_winding(&fg).ok() == Some(0);
        if !ok {
            diagnostics.push(format!("{name} is not invertible with zero winding"));
            return Err(Error::NotCanonical { condprofile: profile });
        }
    }

    Ok(FactorizationResult {
        status: FactorStatus::Canonical,
        gplus: Some(att.gplus),
        gminus: Some(att.gminus),
        residual: Some(att.residual),
        partial: Some(vec![0; n]),
        total: Some(0),
        lambda_count: Some(0),
        eta_count: Some(0),
        condprofile: profile,
        trunc,
        tail_plus: Some(att.tail_plus),
        tail_minus: Some(att.tail_minus),
        diagnostics,
    })
}

/// Whether a condition profile is bounded by `cond_max` and settles
/// (last two entries within 10 %).
pub fn profile_stabilizes(profile: &[f64], cond_max: f64) -> bool {
    let finite = profile.iter().all(|c| c.is_finite() && *c <= cond_max);
    finite
        && match profile {
            [.., a, b] => (b - a).abs() <= 0.1 * a,
            _ => true,
        }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartialIndices {
    /// Nonincreasing.
    pub partial: Vec<i64>,
    pub total: i64,
    /// `Σ max(κ_j, 0)`: independent solutions of the homogeneous problem.
    pub lambda_count: i64,
    /// `Σ max(−κ_j, 0)`: solvability conditions on the right-hand side.
    pub eta_count: i64,
    pub det_winding: i64,
    /// `(s, ν(s))` pairs at the working truncation.
    pub profile: Vec<(i64, usize)>,
    pub trunc: usize,
}

/// Numerical kernel dimension of the rectangular section of `t^{−s} G`.
pub fn kernel_dimension(g: &LaurentMatrixPoly, shift: i64, trunc: usize, rel: f64) -> usize {
    let sv = linalg::singular_values(&rect_section(&g.shift(-shift), trunc));
    let top = sv.first().copied().unwrap_or(0.0);
    sv.iter().filter(|&&s| !(s > rel * top)).count()
}

pub fn partial_indices_estimate(g: &LaurentMatrixPoly, opts: &FactorOptions) -> Result<PartialIndices> {
    if !g.is_square() {
        return Err(Error::Shape(format!("partial indices of a {}x{} symbol", g.rows(), g.cols())));
    }
    let n = g.rows();
    let trunc = opts.trunc.max(2);
    let grid = g.eval_grid(opts.grid_for(g, trunc))?;
    let winding = trigpoly::det_winding(&grid)?;
    let center = winding as f64 / n as f64;
    let lo = center.floor() as i64 - opts.shifts_window;
    let hi = center.ceil() as i64 + opts.shifts_window;

    let mut profile = Vec::new();
    for s in (lo - 1)..=(hi + 1) {
        let coarse = kernel_dimension(g, s, trunc, opts.kernel_rel);
        let fine = kernel_dimension(g, s, 2 * trunc, opts.kernel_rel);
        if coarse != fine {
            return Err(Error::Unstable {
                shift: s,
                trunc,
                coarse,
                fine,
            });
        }
        profile.push((s, coarse));
    }
    let nu = |s: i64| profile[(s - lo + 1) as usize].1 as i64;
    let mut partial = Vec::new();
    for s in lo..=hi {
        let count = nu(s - 1) - 2 * nu(s) + nu(s + 1);
        if count < 0 {
            return Err(Error::WindowTooNarrow {
                lo,
                hi,
                n,
                found: count,
            });
        }
        partial.extend(std::iter::repeat_n(s, count as usize));
    }
    if partial.len() != n {
        return Err(Error::WindowTooNarrow {
            lo,
            hi,
            n,
            found: partial.len() as i64,
        });
    }
    partial.sort_by(|a, b| b.cmp(a));
    let total: i64 = partial.iter().sum();
    if total != winding {
        return Err(Error::IndexMismatch { partial, winding });
    }
    let lambda_count = partial.iter().map(|&k| k.max(0)).sum();
    let eta_count = partial.iter().map(|&k| (-k).max(0)).sum();
    Ok(PartialIndices {
        partial,
        total,
        lambda_count,
        eta_count,
        det_winding: winding,
        profile,
        trunc,
    })
}

/// Canonical factorization when it exists, otherwise the partial-index
/// estimate with the reason the canonical attempt was rejected.
pub fn factorize(g: &LaurentMatrixPoly, opts: &FactorOptions) -> Result<FactorizationResult> {
    let err = match canonical_factorize(g, opts) {
        Ok(r) => return Ok(r),
        Err(e) => e,
    };
    let (status, condprofile) = match &err {
        Error::NotCanonical { condprofile } => (FactorStatus::NotCanonical, condprofile.clone()),
        Error::NonConvergent { condprofile, .. } => (FactorStatus::NonConvergent, condprofile.clone()),
        Error::SingularSymbol { .. } | Error::WindingUndefined { .. } => (FactorStatus::Singular, Vec::new()),
        _ => return Err(err),
    };
    let mut result = FactorizationResult {
        status,
        gplus: None,
        gminus: None,
        residual: None,
        partial: None,
        total: None,
        lambda_count: None,
        eta_count: None,
        condprofile,
        trunc: opts.trunc,
        tail_plus: None,
        tail_minus: None,
        diagnostics: vec![err.to_string()],
    };
    if status == FactorStatus::Singular {
        return Ok(result);
    }
    match partial_indices_estimate(g, opts) {
        Ok(p) => {
            if status == FactorStatus::NonConvergent && p.partial.iter().any(|&k| k != 0) {
                result.status = FactorStatus::NotCanonical;
            }
            result.total = Some(p.total);
            result.lambda_count = Some(p.lambda_count);
            result.eta_count = Some(p.eta_count);
            result.partial = Some(p.partial);
        }
        Err(e) => {
            result.status = FactorStatus::Unstable;
            result.diagnostics.push(e.to_string());
        }
    }
    Ok(result)
}

/// Solution of `φ⁺ = G φ⁻ + g` with `φ⁻(∞) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RHSolution {
    pub phiplus: LaurentMatrixPoly,
    pub phiminus: LaurentMatrixPoly,
    /// Largest node error of the boundary relation on a grid twice as fine
    /// as the one used to build the solution.
    pub residual: f64,
}

/// Solves the Riemann–Hilbert problem through the canonical factorization:
/// `φ⁺ = G₊ P₊(G₊⁻¹ g)`, `φ⁻ = −G₋⁻¹ P₋(G₊⁻¹ g)`.
pub fn solve_rh(g: &LaurentMatrixPoly, rhs: &LaurentMatrixPoly, opts: &FactorOptions) -> Result<RHSolution> {
    if rhs.rows() != g.rows() || rhs.cols() != 1 {
        return Err(Error::Shape(format!(
            "right-hand side is {}x{}, expected {}x1",
            rhs.rows(),
            rhs.cols(),
            g.rows()
        )));
    }
    let fac = canonical_factorize(g, opts)?;
    let gplus = fac.gplus.expect("canonical result carries factors");
    let gminus = fac.gminus.expect("canonical result carries factors");
    let npoints = opts
        .grid_for(g, fac.trunc)
        .max(trigpoly::default_grid_size(4 * rhs.bandwidth()));
    let half = (npoints / 4) as i64;

    let (gplus_inv, _) = inverse_on_grid(&gplus.eval_grid(npoints)?)?;
    let h = gplus_inv.mul(&rhs.eval_grid(npoints)?)?;
    let h = from_grid(&h, -half, half)?.poly;
    let hplus = h.project_plus();
    let hminus = h.project_minus();

    let phiplus = gplus.multiply(&hplus)?;
    let (gminus_inv, _) = inverse_on_grid(&gminus.eval_grid(npoints)?)?;
    let neg = gminus_inv.mul(&hminus.eval_grid(npoints)?)?;
    let phiminus = from_grid(&neg, -(npoints as i64) / 2, -1)?.poly.scale(linalg::c(-1.0, 0.0));

    let fine = 2 * npoints;
    let lhs = phiplus.eval_grid(fine)?;
    let right = g.eval_grid(fine)?.mul(&phiminus.eval_grid(fine)?)?;
    let gv = rhs.eval_grid(fine)?;
    let residual = lhs
        .values()
        .iter()
        .zip(right.values())
        .zip(gv.values())
        .map(|((p, q), r)| (p - q - r).norm())
        .fold(0.0, f64::max);
    if residual > opts.tol {
        return Err(Error::NonConvergent {
            residual,
            tol: opts.tol,
            condprofile: fac.condprofile,
        });
    }
    Ok(RHSolution {
        phiplus,
        phiminus,
        residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    Confirmed,
    Contradicted,
    Unverified,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimCheck {
    pub claim: Claim,
    pub status: ClaimStatus,
    pub note: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Concordance {
    pub checks: Vec<ClaimCheck>,
}

impl Concordance {
    pub fn all_confirmed(&self) -> bool {
        self.checks.iter().all(|c| c.status == ClaimStatus::Confirmed)
    }

    pub fn any_contradicted(&self) -> bool {
        self.checks.iter().any(|c| c.status == ClaimStatus::Contradicted)
    }
}

/// Checks each claim of `cert` against the numerical engine run on `g`.
pub fn verify_certificate(cert: &Certificate, g: &LaurentMatrixPoly, opts: &FactorOptions) -> Result<Concordance> {
    if cert.claims.is_empty() {
        return Ok(Concordance::default());
    }
    let grid = g.eval_grid(opts.grid_for(g, opts.trunc))?;
    let invertible = inverse_on_grid(&grid).is_ok();
    let winding = if invertible {
        trigpoly::det_winding(&grid).ok()
    } else {
        None
    };
    let estimate = if invertible {
        Some(partial_indices_estimate(g, opts))
    } else {
        None
    };
    let canonical = if invertible {
        Some(canonical_factorize(g, opts))
    } else {
        None
    };

    let check = |claim: Claim, status: ClaimStatus, note: String| ClaimCheck { claim, status, note };
    let mut checks = Vec::new();
    for &claim in &cert.claims {
        use ClaimStatus::*;
        let c = match claim {
            Claim::TotalIndexZero => match winding {
                Some(0) => check(claim, Confirmed, "det G has winding 0".into()),
                Some(w) => check(claim, Contradicted, format!("det G has winding {w}")),
                None => check(claim, Unverified, "winding of det G undefined".into()),
            },
            Claim::AllPartialIndicesZero | Claim::CanonicalAllP => {
                match (estimate.as_ref(), canonical.as_ref()) {
                    (Some(Ok(p)), Some(can)) => {
                        let zero = p.partial.iter().all(|&k| k == 0);
                        match (zero, can) {
                            (true, Ok(r)) => check(
                                claim,
                                Confirmed,
                                format!("partial indices {:?}, residual {:e}", p.partial, r.residual.unwrap_or(0.0)),
                            ),
                            (false, _) => check(claim, Contradicted, format!("partial indices {:?}", p.partial)),
                            (true, Err(e)) => check(claim, Unverified, format!("estimator zero, factorization: {e}")),
                        }
                    }
                    (Some(Err(e)), Some(Err(Error::NotCanonical { .. }))) => {
                        check(claim, Contradicted, format!("finite sections singular; estimator: {e}"))
                    }
                    (Some(Err(e)), _) => check(claim, Unverified, e.to_string()),
                    _ => check(claim, Contradicted, "G is singular on the grid".into()),
                }
            }
            Claim::NotCanonical => match estimate.as_ref() {
                Some(Ok(p)) if p.partial.iter().any(|&k| k != 0) => {
                    check(claim, Confirmed, format!("partial indices {:?}", p.partial))
                }
                Some(Ok(p)) => check(claim, Contradicted, format!("partial indices {:?}", p.partial)),
                Some(Err(e)) => check(claim, Unverified, e.to_string()),
                None => check(claim, Unverified, "G is singular on the grid".into()),
            },
            Claim::L2Factorable => match estimate.as_ref() {
                Some(Ok(p)) => check(claim, Confirmed, format!("invertible on T, partial indices {:?}", p.partial)),
                Some(Err(e)) => check(claim, Unverified, e.to_string()),
                None => check(claim, Contradicted, "G is singular on the grid".into()),
            },
            Claim::NotL2Factorable => {
                if invertible {
                    check(claim, Contradicted, "G is invertible on the grid".into())
                } else {
                    check(claim, Confirmed, "G is singular on the grid".into())
                }
            }
        };
        checks.push(c);
    }
    Ok(Concordance { checks })
}
