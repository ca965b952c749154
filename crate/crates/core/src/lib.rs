//! Numerical laboratory for small-time Wiener-sausage volumes and
//! heat-content asymptotics around smooth compact bodies.
//!
//! The crate computes, from three independent directions, the coefficients of
//! half-power expansions `v(t) ~ Σ_j v_j t^{j/2}` of expected sausage volumes
//! and related heat functionals, and cross-checks the directions against each
//! other:
//!
//! * [`coefficients`] — closed-form coefficient families (alternating binomial
//!   sums, curvature integrals, exact rational paths for the ill-conditioned
//!   cases) and the involutive transform connecting the pinned and half-space
//!   families.
//! * [`kernels`] — deterministic integral oracles: half-line heat-kernel
//!   norms, the exterior-ball heat content in 3-D (exact via erfc), and a
//!   planar boundary-layer functional with curvature correction.
//! * [`montecarlo`] — Brownian bridge / free Brownian motion sampling under
//!   the generator-Δ convention (per-coordinate increment variance `2Δs`) and
//!   hit-or-miss estimation of intersected sausage volumes.
//!
//! [`series_fit`] extracts coefficients from either source on `t^{j/2}`
//! bases; [`geometry`] supplies bodies (balls, smooth planar curves) and their
//! boundary functionals; [`numerics`] holds the special functions and the
//! adaptive / tensorized quadrature everything else leans on.
//!
//! Replica-level Monte Carlo and quadrature panels run data-parallel under
//! the default `parallel` feature (rayon) with a sequential fallback compiled
//! in either way; results are reduced in a fixed order so means are
//! bit-identical across thread counts.

pub mod coefficients;
pub mod geometry;
pub mod kernels;
pub mod montecarlo;
pub mod numerics;
pub mod series_fit;

pub(crate) mod exec;

pub use exec::set_thread_count;

/// Crate-wide error type.
///
/// Variants carry enough payload to act on: non-convergent quadrature still
/// reports its best value, rank-deficient fits name the offending basis
/// columns, and partial Monte Carlo runs report how many replicas completed.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input outside an operation's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An integral that does not converge for the supplied parameters.
    #[error("divergent integral: {0}")]
    Divergent(String),

    /// Adaptive quadrature hit its refinement limit before reaching the
    /// requested tolerance; the best value found is carried along.
    #[error("quadrature did not converge: best value {value:.17e} ± {error_estimate:.3e} after {evaluations} evaluations")]
    NonConvergence {
        value: f64,
        error_estimate: f64,
        evaluations: u64,
    },

    /// A series order the closed-form families do not provide.
    #[error("unsupported order: {0}")]
    UnsupportedOrder(String),

    /// A transform or power operation was handed an incomplete input series.
    #[error("missing input: {0}")]
    MissingInput(String),

    /// Least-squares design matrix lost rank; names the dependent columns.
    #[error("rank-deficient fit: dependent basis columns {columns:?}")]
    RankDeficient { columns: Vec<String> },

    /// Body kind not supported by the requested operation.
    #[error("unsupported body: {0}")]
    Unsupported(String),

    /// Monte Carlo run stopped early; completed replicas are still usable.
    #[error("partial Monte Carlo result after {completed} replicas: {message}")]
    PartialMc { completed: usize, message: String },

    /// Malformed external input (curve files, config files, data streams).
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
