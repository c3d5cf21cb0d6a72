//! Numerical ranges through their support function.
//!
//! For a square matrix `M` the support function of `W(M) = {x*Mx : |x| = 1}`
//! in direction `θ` is the largest eigenvalue of the Hermitian matrix
//! `(e^{−iθ}M + e^{iθ}M*)/2`, and the Rayleigh quotient of a top eigenvector
//! is a boundary point of `W(M)` with that outer normal.
//!
//! Minimal sectors with vertex at the origin are located from the arc of
//! directions where the support function is negative: its endpoints are the
//! normals of the two tangent lines through the origin, refined by
//! bisection.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, wrap_angle, CMat, C64};
use crate::trigpoly::{self, GridSample};

pub const DEFAULT_NDIRS: usize = 256;
/// Slack used by [`zero_in_nr`] and the ray test.
pub const NR_SLACK: f64 = 1e-10;

/// Sector `{0} ∪ {z : |arg z − bisector| ≤ halfangle}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sector {
    pub bisector: f64,
    pub halfangle: f64,
}

impl Sector {
    /// Opening angle `α = 2 · halfangle`.
    pub fn opening(&self) -> f64 {
        2.0 * self.halfangle
    }

    /// Closed membership, with `1e−12` rad of slack for points on an edge.
    pub fn contains(&self, z: C64) -> bool {
        z == C64::new(0.0, 0.0) || wrap_angle(z.arg() - self.bisector).abs() <= self.halfangle + 1e-12
    }

    fn from_edges(lo: f64, hi: f64) -> Self {
        let width = hi - lo;
        Self {
            bisector: wrap_angle(lo + width / 2.0),
            halfangle: width / 2.0,
        }
    }

    fn lo(&self) -> f64 {
        self.bisector - self.halfangle
    }

    fn hi(&self) -> f64 {
        self.bisector + self.halfangle
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NRBoundary {
    pub ndirs: usize,
    pub support: Vec<f64>,
    pub bndpoints: Vec<C64>,
}

impl NRBoundary {
    pub fn theta(&self, u: usize) -> f64 {
        direction(u, self.ndirs)
    }

    pub fn min_support(&self) -> f64 {
        self.support.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Whether `z` lies in every supporting halfplane inflated by `slack`.
    pub fn outer_contains(&self, z: C64, slack: f64) -> bool {
        self.support.iter().enumerate().all(|(u, &h)| {
            let e = C64::from_polar(1.0, -self.theta(u));
            (e * z).re <= h + slack
        })
    }
}

fn direction(u: usize, ndirs: usize) -> f64 {
    2.0 * PI * u as f64 / ndirs as f64
}

fn rotated_hermitian(m: &CMat, theta: f64) -> CMat {
    let e = C64::from_polar(1.0, -theta);
    (m * e + m.adjoint() * e.conj()).scale(0.5)
}

/// Support function `h(θ)` of `W(M)`.
pub fn support(m: &CMat, theta: f64) -> f64 {
    linalg::lambda_max(&rotated_hermitian(m, theta))
}

/// `h(θ)` together with the boundary point attaining it.
pub fn support_point(m: &CMat, theta: f64) -> (f64, C64) {
    let (vals, vecs) = linalg::eigh(&rotated_hermitian(m, theta));
    let n = vals.len();
    let x = vecs.column(n - 1);
    let z = (x.adjoint() * m * x)[(0, 0)];
    (vals[n - 1], z)
}

/// Support values and boundary points over `ndirs` equally spaced
/// directions. Panics if `ndirs < 16` or `M` is not square.
pub fn nr_boundary(m: &CMat, ndirs: usize) -> NRBoundary {
    assert!(ndirs >= 16, "need at least 16 directions");
    assert!(m.is_square(), "numerical range of a non-square matrix");
    let (support, bndpoints) = (0..ndirs).map(|u| support_point(m, direction(u, ndirs))).unzip();
    NRBoundary {
        ndirs,
        support,
        bndpoints,
    }
}

/// `0 ∈ W(M)`, judged by `h(θ) ≥ −1e−10` on every sampled direction.
pub fn zero_in_nr(m: &CMat) -> bool {
    zero_exclusion_margin(m, DEFAULT_NDIRS) <= NR_SLACK
}

/// `−min_θ h(θ)`: positive exactly when a sampled supporting line separates
/// the origin from `W(M)`.
pub fn zero_exclusion_margin(m: &CMat, ndirs: usize) -> f64 {
    -(0..ndirs)
        .map(|u| support(m, direction(u, ndirs)))
        .fold(f64::INFINITY, f64::min)
}

/// Result of testing `W(M)` against the closed ray `{x ≤ 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayCheck {
    pub disjoint: bool,
    /// Distance from the boundary polygon to the ray, zero on contact.
    pub distance: f64,
}

pub fn ray_disjoint(m: &CMat) -> bool {
    ray_check(m, DEFAULT_NDIRS).disjoint
}

pub fn ray_check(m: &CMat, ndirs: usize) -> RayCheck {
    let b = nr_boundary(m, ndirs);
    let n = b.bndpoints.len();
    let distance = (0..n)
        .map(|u| segment_ray_distance(b.bndpoints[u], b.bndpoints[(u + 1) % n]))
        .fold(f64::INFINITY, f64::min);
    let zero_excluded = -b.min_support() > NR_SLACK;
    RayCheck {
        disjoint: zero_excluded && distance > NR_SLACK,
        distance,
    }
}

fn point_ray_distance(p: C64) -> f64 {
    if p.re <= 0.0 {
        p.im.abs()
    } else {
        p.norm()
    }
}

fn segment_ray_distance(p: C64, q: C64) -> f64 {
    if (p.im > 0.0 && q.im < 0.0) || (p.im < 0.0 && q.im > 0.0) {
        let x = p.re + (q.re - p.re) * p.im / (p.im - q.im);
        if x <= 0.0 {
            return 0.0;
        }
    }
    let d = q - p;
    let len2 = d.norm_sqr();
    let origin = if len2 == 0.0 {
        p.norm()
    } else {
        let s = (-(p.conj() * d).re / len2).clamp(0.0, 1.0);
        (p + d * s).norm()
    };
    point_ray_distance(p).min(point_ray_distance(q)).min(origin)
}

pub fn min_sector(m: &CMat, include_positive_ray: bool) -> Result<Sector> {
    min_sector_with(m, include_positive_ray, DEFAULT_NDIRS)
}

/// Smallest sector with vertex 0 containing `W(M)` (and the positive real
/// ray when `include_positive_ray` is set).
pub fn min_sector_with(m: &CMat, include_positive_ray: bool, ndirs: usize) -> Result<Sector> {
    let h: Vec<f64> = (0..ndirs).map(|u| support(m, direction(u, ndirs))).collect();
    let min_support = h.iter().copied().fold(f64::INFINITY, f64::min);
    if min_support >= -NR_SLACK {
        return Err(Error::VertexInRange { min_support });
    }
    // Longest cyclic run of negative support values.
    let neg: Vec<bool> = h.iter().map(|&x| x < 0.0).collect();
    let mut best: Option<(usize, usize)> = None;
    for start in 0..ndirs {
        if neg[start] && !neg[(start + ndirs - 1) % ndirs] {
            let mut len = 0;
            while len < ndirs && neg[(start + len) % ndirs] {
                len += 1;
            }
            if best.is_none_or(|(_, l)| len > l) {
                best = Some((start, len));
            }
        }
    }
    let (start, len) = best.ok_or(Error::VertexInRange { min_support })?;
    let step = 2.0 * PI / ndirs as f64;
    let first_neg = start as f64 * step;
    let last_neg = (start + len - 1) as f64 * step;
    let f = |t: f64| support(m, t);
    // h ≥ 0 just before the run and just after it.
    let theta_a = bisect_root(&f, first_neg - step, first_neg, true);
    let theta_b = bisect_root(&f, last_neg, last_neg + step, false);
    let arc = theta_b - theta_a;
    let alpha = (PI - arc).max(0.0);
    let mut sector = Sector {
        bisector: wrap_angle((theta_a + theta_b) / 2.0 - PI),
        halfangle: alpha / 2.0,
    };
    if include_positive_ray {
        let d = wrap_angle(-sector.bisector);
        if d.abs() > sector.halfangle {
            sector = if d > 0.0 {
                Sector::from_edges(sector.lo(), sector.bisector + d)
            } else {
                Sector::from_edges(sector.bisector + d, sector.hi())
            };
        }
    }
    if sector.opening() >= PI {
        return Err(Error::NotSectorial {
            spread: sector.opening(),
        });
    }
    Ok(sector)
}

/// Root of `f` in `[lo, hi]`. `rising_to_negative` says `f(lo) ≥ 0 > f(hi)`;
/// otherwise `f(lo) < 0 ≤ f(hi)`.
fn bisect_root(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, rising_to_negative: bool) -> f64 {
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let negative = f(mid) < 0.0;
        if negative == rising_to_negative {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Per-node minimal sectors of a sampled symbol.
pub fn sector_field(grid: &GridSample, include_positive_ray: bool, ndirs: usize) -> Result<Vec<Sector>> {
    grid.values()
        .iter()
        .enumerate()
        .map(|(j, v)| {
            min_sector_with(v, include_positive_ray, ndirs).map_err(|e| Error::NotLocallySectorial {
                node: j,
                reason: e.to_string(),
            })
        })
        .collect()
}

/// Winding number of a locally sectorial symbol, read off the sector
/// bisectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    pub winding: i64,
    pub bisectors: Vec<f64>,
    pub maxjump: f64,
}

/// Unwraps per-node bisector angles around the circle.
pub fn winding_of_sectors(bisectors: &[f64]) -> Result<WindingResult> {
    let n = bisectors.len();
    let mut total = 0.0;
    let mut maxjump = 0.0f64;
    for j in 0..n {
        let step = wrap_angle(bisectors[(j + 1) % n] - bisectors[j]);
        if step.abs() >= PI / 2.0 {
            return Err(Error::GridTooCoarse { node: j, jump: step });
        }
        maxjump = maxjump.max(step.abs());
        total += step;
    }
    let turns = total / (2.0 * PI);
    let winding = turns.round();
    if (turns - winding).abs() > 1e-6 {
        return Err(Error::NonIntegralWinding { turns });
    }
    Ok(WindingResult {
        winding: winding as i64,
        bisectors: bisectors.to_vec(),
        maxjump,
    })
}

/// `ind G` of a symbol sampled on a grid.
pub fn winding_of_grid(grid: &GridSample, ndirs: usize) -> Result<WindingResult> {
    let sectors = sector_field(grid, false, ndirs)?;
    let bisectors: Vec<f64> = sectors.iter().map(|s| s.bisector).collect();
    winding_of_sectors(&bisectors)
}

/// `ind G` of a polynomial symbol at a given grid size.
pub fn symbol_winding(g: &trigpoly::LaurentMatrixPoly, npoints: usize) -> Result<WindingResult> {
    winding_of_grid(&g.eval_grid(npoints)?, DEFAULT_NDIRS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, eye, from_real_rows, from_rows};
    use crate::trigpoly::LaurentMatrixPoly;

    #[test]
    fn nilpotent_support_is_one() {
        let m = from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
        let b = nr_boundary(&m, 64);
        assert!(b.support.iter().all(|h| (h - 1.0).abs() < 1e-12));
        for (u, z) in b.bndpoints.iter().enumerate() {
            let e = C64::from_polar(1.0, -b.theta(u));
            assert!(((e * z).re - b.support[u]).abs() < 1e-10);
        }
    }

    #[test]
    fn hermitian_support_endpoints() {
        let m = from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let b = nr_boundary(&m, 16);
        assert!((b.support[0] - 3.0).abs() < 1e-12);
        assert!((b.support[8] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn scalar_support() {
        let m = from_rows(&[&[c(1.0, 1.0)]]);
        for u in 0..32 {
            let t = direction(u, 32);
            let want = (C64::from_polar(1.0, -t) * c(1.0, 1.0)).re;
            assert!((support(&m, t) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn sector_of_scalar_with_ray() {
        let s = min_sector(&from_rows(&[&[c(1.0, 1.0)]]), true).unwrap();
        assert!((s.bisector - PI / 8.0).abs() < 1e-12);
        assert!((s.opening() - PI / 4.0).abs() < 1e-12);
        let plain = min_sector(&from_rows(&[&[c(1.0, 1.0)]]), false).unwrap();
        assert!((plain.bisector - PI / 4.0).abs() < 1e-12);
        assert!(plain.opening() < 1e-12);
    }

    #[test]
    fn sector_of_positive_definite_is_degenerate() {
        let s = min_sector(&from_real_rows(&[&[3.0, 1.0], &[1.0, 2.0]]), true).unwrap();
        assert!(s.opening() < 1e-12);
        assert!(s.bisector.abs() < 1e-12);
    }

    #[test]
    fn sector_of_rotated_pair() {
        let m = crate::linalg::diag(&[C64::from_polar(1.0, PI / 3.0), C64::from_polar(1.0, -PI / 3.0)]);
        let s = min_sector(&m, false).unwrap();
        assert!((s.opening() - 2.0 * PI / 3.0).abs() < 1e-12);
        assert!(s.bisector.abs() < 1e-12);
    }

    #[test]
    fn sector_errors() {
        let nil = from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert!(matches!(min_sector(&nil, false), Err(Error::VertexInRange { .. })));
        let neg = from_real_rows(&[&[-0.5]]);
        assert!(matches!(min_sector(&neg, true), Err(Error::NotSectorial { .. })));
        assert!(min_sector(&neg, false).is_ok());
    }

    #[test]
    fn semidefinite_touches_vertex() {
        let m = from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]);
        assert!(zero_in_nr(&m));
        assert!(min_sector(&m, true).is_err());
    }

    #[test]
    fn ray_examples() {
        assert!(ray_disjoint(&from_rows(&[&[c(0.0, 1.0)]])));
        assert!(!ray_disjoint(&from_rows(&[&[c(-1.0, 0.0)]])));
        assert!(ray_disjoint(&crate::linalg::diag(&[c(1.0, 0.0), c(0.0, 1.0)])));
        // segment from 1+i to −2−i crosses the negative axis at −0.5
        assert!(!ray_disjoint(&crate::linalg::diag(&[c(1.0, 1.0), c(-2.0, -1.0)])));
        // segment from −1+i to −1+2i stays above the ray
        assert!(ray_disjoint(&crate::linalg::diag(&[c(-1.0, 1.0), c(-1.0, 2.0)])));
    }

    #[test]
    fn winding_examples() {
        let g = LaurentMatrixPoly::monomial(1, eye(2));
        assert_eq!(symbol_winding(&g, 256).unwrap().winding, 1);
        let h = LaurentMatrixPoly::constant(from_real_rows(&[&[2.0, 1.0], &[0.0, 2.0]]));
        assert_eq!(symbol_winding(&h, 256).unwrap().winding, 0);
        assert_eq!(symbol_winding(&h.shift(-2), 256).unwrap().winding, -2);
    }

    #[test]
    fn winding_refuses_large_jumps() {
        let b = [0.0, 2.0, 4.0];
        assert!(matches!(winding_of_sectors(&b), Err(Error::GridTooCoarse { .. })));
    }

    #[test]
    fn sector_field_names_node() {
        // 1 + t passes through 0 at node 4 of 8.
        let g = LaurentMatrixPoly::scalar(0, &[c(1.0, 0.0), c(1.0, 0.0)]).eval_grid(8).unwrap();
        assert!(matches!(sector_field(&g, false, 64), Err(Error::NotLocallySectorial { node: 4, .. })));
    }
}
