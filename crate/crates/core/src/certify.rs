//! Certificate producers for factorability criteria of block symbols.
//!
//! Each certifier checks a sufficient condition on the Schur complement
//! `Γ = D − B A⁻¹ B*` (or on `B` directly) at the nodes of a grid and
//! returns a [`Certificate`] with a verdict, the per-node margins it
//! measured and machine-readable [`Claim`]s about the partial indices.
//! The claims are what [`crate::factorize::verify_certificate`] checks.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::blockstruct::{self, BlockSymbol};
use crate::error::{Error, Result};
use crate::hankel;
use crate::linalg::{self, CMat, C64};
use crate::numrange;
use crate::trigpoly::{self, LaurentMatrixPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Theorem {
    /// Locally sectorial Schur complement, sectors containing the positive ray.
    Thcan,
    /// Same with a uniform opening below π for continuous `Γ`.
    Cocont,
    /// `W(Γ(t))` misses the closed negative ray.
    Thcir,
    /// `Re Γ + B₁B₁*` uniformly negative (`A = I`).
    Thneg,
    /// Scalar `D`, Hankel-distance bound (`A = I`, `k = 1`).
    Cok1,
    /// `D = BB* + γI`: spectrum of `H_B H_B*`.
    ExactGamma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inapplicable,
    Boundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Claim {
    #[serde(rename = "L2_factorable")]
    L2Factorable,
    #[serde(rename = "not_L2_factorable")]
    NotL2Factorable,
    #[serde(rename = "total_index=0")]
    TotalIndexZero,
    #[serde(rename = "all_partial_indices=0")]
    AllPartialIndicesZero,
    /// Canonical `L_p` factorization for every `p ∈ (1, ∞)`.
    #[serde(rename = "canonical_all_p")]
    CanonicalAllP,
    #[serde(rename = "not_canonical")]
    NotCanonical,
}

/// Which half of the negative-real-part criterion was exercised.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThnegSetting {
    /// `B − B₁` has negative Fourier coefficients: factorability only.
    Continuous,
    /// `B − B₁` analytic: partial indices vanish.
    Analytic,
}

/// Open interval `(plo, phi)` of exponents `p` with `1/plo + 1/phi = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PInterval {
    pub plo: f64,
    /// `+∞` when `alpha = 0` (serialized as `null`).
    pub phi: f64,
    pub alpha: f64,
}

impl PInterval {
    pub fn contains(&self, p: f64) -> bool {
        self.plo < p && p < self.phi
    }
}

/// `(2π/(2π − α), 2π/α)` for `0 ≤ α < π`.
pub fn p_interval(alpha: f64) -> Result<PInterval> {
    if !(0.0..PI).contains(&alpha) {
        return Err(Error::InvalidAngle(alpha));
    }
    let two_pi = 2.0 * PI;
    let phi = if alpha == 0.0 { f64::INFINITY } else { two_pi / alpha };
    Ok(PInterval {
        plo: two_pi / (two_pi - alpha),
        phi,
        alpha,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Details {
    pub npoints: Option<usize>,
    /// Sectoriality angle after the safety margin.
    pub alpha: Option<f64>,
    /// Per-node margins; all strictly positive on a pass.
    pub margins: Vec<f64>,
    pub failing_nodes: Vec<usize>,
    pub setting: Option<ThnegSetting>,
    /// Named scalar diagnostics (`deltamin`, `sup`, `dist_sq`, `gamma_re`, …).
    pub quantities: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub theorem: Theorem,
    pub verdict: Verdict,
    pub pinterval: Option<PInterval>,
    pub winding: Option<i64>,
    pub details: Details,
    pub claims: Vec<Claim>,
}

impl Certificate {
    fn new(theorem: Theorem) -> Self {
        Self {
            theorem,
            verdict: Verdict::Fail,
            pinterval: None,
            winding: None,
            details: Details::default(),
            claims: Vec::new(),
        }
    }

    fn inapplicable(theorem: Theorem, note: impl Into<String>) -> Self {
        let mut c = Self::new(theorem);
        c.verdict = Verdict::Inapplicable;
        c.details.notes.push(note.into());
        c
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn claims_canonical(&self) -> bool {
        self.claims.contains(&Claim::AllPartialIndicesZero)
    }

    fn quantity(&mut self, name: &str, value: f64) {
        self.details.quantities.insert(name.to_string(), value);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertifyOptions {
    /// Grid size; `None` picks [`trigpoly::default_grid_size`].
    pub npoints: Option<usize>,
    pub ndirs: usize,
    /// Added to the largest node opening before computing the `p` range.
    pub angle_margin: f64,
    /// Threshold for "uniformly negative".
    pub delta: f64,
    /// Lower bound for `λ_min(A)`.
    pub delta0: f64,
    /// Smallest admissible `|det G(t_j)|`.
    pub det_tol: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            npoints: None,
            ndirs: numrange::DEFAULT_NDIRS,
            angle_margin: 0.01,
            delta: 1e-8,
            delta0: blockstruct::DEFAULT_DELTA0,
            det_tol: 1e-10,
        }
    }
}

impl CertifyOptions {
    fn grid_for(&self, bs: &BlockSymbol) -> usize {
        self.npoints
            .unwrap_or_else(|| trigpoly::default_grid_size(bs.bandwidth()))
    }
}

/// Schur complements on the grid, or the reason the block hypotheses fail.
fn schur_or_inapplicable(
    bs: &BlockSymbol,
    npoints: usize,
    opts: &CertifyOptions,
    theorem: Theorem,
) -> Result<std::result::Result<blockstruct::SchurGrid, Certificate>> {
    match blockstruct::schur_on_grid_with(bs, npoints, opts.delta0) {
        Ok(s) => Ok(Ok(s)),
        Err(e @ Error::NotPositiveDefinite { .. }) => Ok(Err(Certificate::inapplicable(theorem, e.to_string()))),
        Err(e) => Err(e),
    }
}

fn first_singular_node(bs: &BlockSymbol, npoints: usize, tol: f64) -> Result<Option<(usize, f64)>> {
    let g = bs.assemble().eval_grid(npoints)?;
    Ok(g.values()
        .iter()
        .map(|v| v.determinant().norm())
        .enumerate()
        .find(|(_, d)| !(*d > tol)))
}

/// Positive-ray sectorial criterion for `G = [[A, B*], [B, D]]`.
pub fn certify_thcan(bs: &BlockSymbol, opts: &CertifyOptions) -> Result<Certificate> {
    sectorial_from_block(bs, opts, Theorem::Thcan)
}

/// Continuous-`Γ` variant: a single opening `α < π` for every node.
pub fn certify_cocont(bs: &BlockSymbol, opts: &CertifyOptions) -> Result<Certificate> {
    sectorial_from_block(bs, opts, Theorem::Cocont)
}

fn sectorial_from_block(bs: &BlockSymbol, opts: &CertifyOptions, theorem: Theorem) -> Result<Certificate> {
    let npoints = opts.grid_for(bs);
    let schur = match schur_or_inapplicable(bs, npoints, opts, theorem)? {
        Ok(s) => s,
        Err(cert) => return Ok(cert),
    };
    let mut cert = sectorial_certificate(&schur.gammas, opts, theorem);
    cert.quantity("deltamin", schur.deltamin);
    if let Some((node, det)) = first_singular_node(bs, npoints, opts.det_tol)? {
        cert.verdict = Verdict::Fail;
        cert.claims.clear();
        cert.details.failing_nodes.push(node);
        cert.details.notes.push(format!("|det G| = {det:e} at node {node}"));
    }
    Ok(cert)
}

/// Sectorial check on precomputed Schur complements `Γ(t_j)`.
pub fn certify_thcan_gammas(gammas: &[CMat], opts: &CertifyOptions) -> Certificate {
    sectorial_certificate(gammas, opts, Theorem::Thcan)
}

fn sectorial_certificate(gammas: &[CMat], opts: &CertifyOptions, theorem: Theorem) -> Certificate {
    let mut cert = Certificate::new(theorem);
    cert.details.npoints = Some(gammas.len());
    let mut sectors = Vec::with_capacity(gammas.len());
    for (j, g) in gammas.iter().enumerate() {
        match numrange::min_sector_with(g, true, opts.ndirs) {
            Ok(s) => sectors.push(s),
            Err(e) => {
                cert.details.failing_nodes.push(j);
                if cert.details.notes.is_empty() {
                    cert.details.notes.push(format!("node {j}: {e}"));
                }
            }
        }
    }
    if !cert.details.failing_nodes.is_empty() {
        return cert;
    }
    let widest = sectors.iter().map(|s| s.opening()).fold(0.0, f64::max);
    let alpha = widest + opts.angle_margin;
    cert.details.alpha = Some(alpha);
    cert.details.margins = sectors
        .iter()
        .map(|s| PI - s.opening() - opts.angle_margin)
        .collect();
    let bisectors: Vec<f64> = sectors.iter().map(|s| s.bisector).collect();
    match numrange::winding_of_sectors(&bisectors) {
        Ok(w) => cert.winding = Some(w.winding),
        Err(e) => {
            cert.details.notes.push(format!("sector winding: {e}"));
            return cert;
        }
    }
    if alpha >= PI {
        cert.details.notes.push(format!("opening {alpha} with margin is not below π"));
        return cert;
    }
    if cert.winding != Some(0) {
        cert.details.notes.push("sector field winds around the origin".into());
        return cert;
    }
    cert.pinterval = p_interval(alpha).ok();
    cert.verdict = Verdict::Pass;
    cert.claims = vec![Claim::L2Factorable, Claim::TotalIndexZero, Claim::AllPartialIndicesZero];
    cert
}

/// `W(Γ(t)) ∩ (−∞, 0] = ∅` at every node.
pub fn certify_thcir(bs: &BlockSymbol, opts: &CertifyOptions) -> Result<Certificate> {
    let npoints = opts.grid_for(bs);
    let schur = match schur_or_inapplicable(bs, npoints, opts, Theorem::Thcir)? {
        Ok(s) => s,
        Err(cert) => return Ok(cert),
    };
    let mut cert = certify_thcir_gammas(&schur.gammas, opts);
    cert.quantity("deltamin", schur.deltamin);
    Ok(cert)
}

pub fn certify_thcir_gammas(gammas: &[CMat], opts: &CertifyOptions) -> Certificate {
    let mut cert = Certificate::new(Theorem::Thcir);
    cert.details.npoints = Some(gammas.len());
    for (j, g) in gammas.iter().enumerate() {
        let rc = numrange::ray_check(g, opts.ndirs);
        cert.details.margins.push(rc.distance);
        if !rc.disjoint {
            cert.details.failing_nodes.push(j);
        }
    }
    if !cert.details.failing_nodes.is_empty() {
        let j = cert.details.failing_nodes[0];
        cert.details.notes.push(format!("W(Γ) meets the closed negative ray at node {j}"));
        return cert;
    }
    // Nodes alone can straddle a crossing; the positive-ray sector field of
    // a ray-disjoint continuous Γ moves continuously and cannot wind.
    let mut bisectors = Vec::with_capacity(gammas.len());
    for (j, g) in gammas.iter().enumerate() {
        match numrange::min_sector_with(g, true, opts.ndirs) {
            Ok(s) => bisectors.push(s.bisector),
            Err(e) => {
                cert.details.failing_nodes.push(j);
                cert.details.notes.push(format!("node {j}: {e}"));
                return cert;
            }
        }
    }
    match numrange::winding_of_sectors(&bisectors) {
        Ok(w) if w.winding == 0 => {}
        Ok(w) => {
            cert.details.notes.push(format!("sector field winds {} times", w.winding));
            return cert;
        }
        Err(e) => {
            if let Error::GridTooCoarse { node, .. } = e {
                cert.details.failing_nodes.push(node);
            }
            cert.details
                .notes
                .push(format!("Γ crosses the negative ray between nodes or the grid is too coarse: {e}"));
            return cert;
        }
    }
    cert.verdict = Verdict::Pass;
    cert.winding = Some(0);
    cert.claims = vec![
        Claim::L2Factorable,
        Claim::TotalIndexZero,
        Claim::AllPartialIndicesZero,
        Claim::CanonicalAllP,
    ];
    cert
}

/// Negative-real-part criterion for `A = I`. `b1` defaults to the
/// anti-analytic part `P₋B`, so that `B − B₁ = P₊B` is analytic.
pub fn certify_thneg(bs: &BlockSymbol, b1: Option<&LaurentMatrixPoly>, opts: &CertifyOptions) -> Result<Certificate> {
    if !bs.a_is_identity(1e-12) {
        return Ok(Certificate::inapplicable(Theorem::Thneg, "A is not the identity"));
    }
    let default_b1;
    let b1 = match b1 {
        Some(b1) => b1,
        None => {
            default_b1 = bs.b().project_minus();
            &default_b1
        }
    };
    if b1.shape() != bs.b().shape() {
        return Err(Error::Shape(format!(
            "B1 is {:?}, B is {:?}",
            b1.shape(),
            bs.b().shape()
        )));
    }
    let npoints = opts.grid_for(bs).max(trigpoly::default_grid_size(b1.bandwidth()));
    let schur = match schur_or_inapplicable(bs, npoints, opts, Theorem::Thneg)? {
        Ok(s) => s,
        Err(cert) => return Ok(cert),
    };
    let mut cert = Certificate::new(Theorem::Thneg);
    cert.details.npoints = Some(npoints);
    let gap = bs.b().sub(b1)?;
    let setting = if gap.max_negative_coeff() <= 1e-12 {
        ThnegSetting::Analytic
    } else {
        ThnegSetting::Continuous
    };
    cert.details.setting = Some(setting);
    let b1g = b1.eval_grid(npoints)?;
    let mut worst = f64::NEG_INFINITY;
    for (j, (g, b)) in schur.gammas.iter().zip(b1g.values()).enumerate() {
        let s = linalg::hermitian_part(g) + b * b.adjoint();
        let top = linalg::lambda_max(&s);
        worst = worst.max(top);
        cert.details.margins.push(-top);
        if top > -opts.delta {
            cert.details.failing_nodes.push(j);
        }
    }
    cert.quantity("max_eig", worst);
    if worst <= -opts.delta {
        cert.verdict = Verdict::Pass;
        cert.claims = match setting {
            ThnegSetting::Analytic => {
                cert.winding = Some(0);
                vec![Claim::L2Factorable, Claim::TotalIndexZero, Claim::AllPartialIndicesZero]
            }
            ThnegSetting::Continuous => vec![Claim::L2Factorable],
        };
    } else {
        cert.details
            .notes
            .push(format!("Re Γ + B1 B1* reaches {worst:e} > −δ"));
    }
    Ok(cert)
}

/// `sup_t (Re D − Σ|b_j|²) < −Σ dist²(b_j, H^∞)` for a single-row `B`.
pub fn certify_cok1(bs: &BlockSymbol, opts: &CertifyOptions) -> Result<Certificate> {
    if !bs.a_is_identity(1e-12) {
        return Ok(Certificate::inapplicable(Theorem::Cok1, "A is not the identity"));
    }
    if bs.k() != 1 {
        return Ok(Certificate::inapplicable(
            Theorem::Cok1,
            format!("D is {}x{}, need a scalar", bs.k(), bs.k()),
        ));
    }
    let npoints = opts.grid_for(bs);
    let mut cert = Certificate::new(Theorem::Cok1);
    cert.details.npoints = Some(npoints);
    let dg = bs.d().eval_grid(npoints)?;
    let bg = bs.b().eval_grid(npoints)?;
    let sup = dg
        .values()
        .iter()
        .zip(bg.values())
        .map(|(d, b)| d[(0, 0)].re - b.row(0).iter().map(|z| z.norm_sqr()).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max);
    let mut dist_sq = 0.0;
    for j in 0..bs.m() {
        let d = hankel::nehari_distance(&bs.b().entry(0, j))?;
        dist_sq += d * d;
    }
    let margin = -dist_sq - sup;
    cert.quantity("sup", sup);
    cert.quantity("dist_sq", dist_sq);
    cert.details.margins.push(margin);
    if margin > 0.0 {
        cert.verdict = Verdict::Pass;
        cert.winding = Some(0);
        cert.claims = vec![Claim::L2Factorable, Claim::TotalIndexZero, Claim::AllPartialIndicesZero];
    } else {
        cert.details.notes.push(format!("sup {sup} is not below −dist² = {}", -dist_sq));
    }
    Ok(cert)
}

/// Relative distance at which `−γ` counts as a spectrum point.
pub const SPECTRUM_MATCH_TOL: f64 = 1e-9;
/// Relative distance below which a non-member is reported as boundary.
pub const SPECTRUM_BOUNDARY_TOL: f64 = 1e-6;

/// Factorability of `[[I, B*], [B, BB* + γI]]` from the spectrum of
/// `H_B H_B*`: `L₂`-factorable iff `−γ` avoids the essential spectrum `{0}`,
/// canonical iff `−γ` avoids the whole spectrum.
pub fn exact_gamma_criterion(b: &LaurentMatrixPoly, gamma: C64) -> Certificate {
    let mut cert = Certificate::new(Theorem::ExactGamma);
    let spec = hankel::hankel_sq_spectrum(b, hankel::default_truncation(b));
    let sigma = spec.sq_spectrum();
    let ess = hankel::ess_spectrum_note(b);
    let target = -gamma;
    cert.quantity("gamma_re", gamma.re);
    cert.quantity("gamma_im", gamma.im);
    cert.quantity("hankel_norm", spec.norm());
    cert.details.notes.push(format!("essential spectrum {:?}: {}", ess.points, ess.justification));

    let rel = |s: f64| (target - C64::new(s, 0.0)).norm() / s.abs().max(1.0);
    let nearest = sigma
        .iter()
        .copied()
        .min_by(|a, b| rel(*a).total_cmp(&rel(*b)))
        .expect("spectrum contains 0");
    let dist = rel(nearest);
    cert.details.margins.push(dist);
    cert.quantity("nearest_spectrum_point", nearest);

    let in_ess = ess.points.iter().any(|&s| rel(s) <= SPECTRUM_MATCH_TOL);
    if in_ess {
        cert.claims = vec![Claim::NotL2Factorable];
        cert.details.notes.push("−γ lies in the essential spectrum".into());
    } else if dist <= SPECTRUM_MATCH_TOL {
        cert.claims = vec![Claim::L2Factorable, Claim::TotalIndexZero, Claim::NotCanonical];
        cert.details.notes.push(format!("−γ matches spectrum point {nearest}"));
    } else if dist <= SPECTRUM_BOUNDARY_TOL {
        cert.verdict = Verdict::Boundary;
        cert.details
            .notes
            .push(format!("−γ within {dist:e} of spectrum point {nearest}; ill-posed"));
    } else {
        cert.verdict = Verdict::Pass;
        cert.winding = Some(0);
        cert.claims = vec![Claim::L2Factorable, Claim::TotalIndexZero, Claim::AllPartialIndicesZero];
    }
    cert
}

/// `γ` with `D = BB* + γI`, if the block symbol has that form (`A = I`).
pub fn infer_gamma(bs: &BlockSymbol) -> Option<C64> {
    if !bs.a_is_identity(1e-12) {
        return None;
    }
    let bbstar = bs.b().multiply(&bs.b().adjoint_symbol()).ok()?;
    let gamma_poly = bs.d().sub(&bbstar).ok()?;
    let gamma = gamma_poly.coeff(0)[(0, 0)];
    let target = LaurentMatrixPoly::constant(linalg::eye(bs.k()) * gamma);
    gamma_poly.approx_eq(&target, 1e-9).then_some(gamma)
}
