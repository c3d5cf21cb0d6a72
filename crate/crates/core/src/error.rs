use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("grid size {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("grid of {npoints} points cannot resolve the symbol; need at least {required}")]
    GridTooSmall { npoints: usize, required: usize },

    #[error("symbol is numerically singular at node {node} (condition number {cond:e})")]
    SingularSymbol { node: usize, cond: f64 },

    #[error("winding undefined: |det| = {value:e} at node {node}")]
    WindingUndefined { node: usize, value: f64 },

    #[error("grid too coarse: argument jump of {jump} rad after node {node}")]
    GridTooCoarse { node: usize, jump: f64 },

    #[error("accumulated argument {turns} turns is not within tolerance of an integer")]
    NonIntegralWinding { turns: f64 },

    #[error("the origin lies in the numerical range (min support {min_support:e})")]
    VertexInRange { min_support: f64 },

    #[error("not sectorial: angular spread {spread} rad is not below π")]
    NotSectorial { spread: f64 },

    #[error("not locally sectorial at node {node}: {reason}")]
    NotLocallySectorial { node: usize, reason: String },

    #[error("block A is not Hermitian: coefficient {k} deviates by {deviation:e}")]
    NotHermitian { k: i64, deviation: f64 },

    #[error("block A is not positive definite at node {node}: smallest eigenvalue {lambda_min:e}")]
    NotPositiveDefinite { node: usize, lambda_min: f64 },

    #[error("angle {0} outside [0, π)")]
    InvalidAngle(f64),

    #[error("symbol is not canonically factorable (condition profile {condprofile:?})")]
    NotCanonical { condprofile: Vec<f64> },

    #[error("factorization residual {residual:e} exceeds tolerance {tol:e}")]
    NonConvergent {
        residual: f64,
        tol: f64,
        condprofile: Vec<f64>,
    },

    #[error("kernel dimension at shift {shift} not stable: {coarse} at truncation {trunc}, {fine} at {}", 2 * trunc)]
    Unstable {
        shift: i64,
        trunc: usize,
        coarse: usize,
        fine: usize,
    },

    #[error("partial indices {partial:?} do not sum to the determinant winding {winding}")]
    IndexMismatch { partial: Vec<i64>, winding: i64 },

    #[error("shift window [{lo}, {hi}] does not capture all {n} partial indices (found {found})")]
    WindowTooNarrow { lo: i64, hi: i64, n: usize, found: i64 },

    #[error("invalid symbol file: {0}")]
    Format(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}
