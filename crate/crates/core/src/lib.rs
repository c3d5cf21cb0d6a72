//! Factorability certificates for structured block matrix functions on the
//! unit circle, and a numerical Wiener–Hopf engine that checks them.
//!
//! A symbol is a matrix-valued Laurent polynomial `G(t) = Σ c_k t^k` on
//! `|t| = 1`. The crate provides
//!
//! * [`trigpoly`]: Laurent polynomial arithmetic, grid sampling, analytic
//!   projections and determinant winding numbers;
//! * [`numrange`]: numerical range support functions, minimal sectors with
//!   vertex at the origin and the winding number of a sector field;
//! * [`blockstruct`]: the block symbol `[[A, B*], [B, D]]`, its Schur
//!   complement `Γ = D − B A⁻¹ B*` and the congruence that links the two;
//! * [`hankel`]: block Hankel matrices, Hankel norms and Nehari distances;
//! * [`certify`]: certificate producers for the sectorial, ray-disjoint,
//!   negative-real-part and Hankel-distance factorability criteria;
//! * [`factorize`]: finite-section canonical factorization `G = G₊ G₋`,
//!   partial-index estimation and a Riemann–Hilbert solver;
//! * [`report`]: the batch runner behind the `whc` binary.
//!
//! The factorization order is `G = G₊ Λ G₋` with `G₊` analytic inside the
//! disk, `G₋` analytic outside and normalized by `G₋(∞) = I`, and
//! `Λ(t) = diag(t^{κ_j})`. Constants belong to the analytic (`+`) side.

// `!(x > tol)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blockstruct;
pub mod certify;
mod error;
pub mod factorize;
pub mod hankel;
pub mod linalg;
pub mod numrange;
pub mod report;
pub mod trigpoly;

pub use blockstruct::{BlockSymbol, SchurGrid};
pub use certify::{Certificate, Claim, PInterval, Theorem, Verdict};
pub use error::{Error, Result};
pub use factorize::{FactorizationResult, PartialIndices, RHSolution};
pub use hankel::HankelSpectrum;
pub use linalg::{CMat, C64};
pub use numrange::{NRBoundary, Sector, WindingResult};
pub use trigpoly::{GridSample, LaurentMatrixPoly};
