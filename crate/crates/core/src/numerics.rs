//! Special functions and quadrature.
//!
//! Everything downstream reduces to a handful of primitives implemented here:
//!
//! * `gamma_fn` / `erfc_scaled_tail` — Γ(x) and the Gaussian tail
//!   ∫_z^∞ e^{−η²} dη, both required to ≤ 1e−13 relative error and verified
//!   against frozen 25-digit references in the tests.
//! * `adaptive_integrate` — nested Gauss–Legendre with interval bisection;
//!   the per-interval error is the difference between an interval's rule
//!   value and the sum over its two halves (a successive-refinement bound,
//!   not a guess). Infinite endpoints are folded to (0,1) by the rational
//!   substitution x = a + s/(1−s).
//! * `j_integral` — the closed form of ∫_1^∞ (η²+a)^{−2} dη.
//! * `i_k_integral` — the k-fold ∫_{[1,∞)^k} |η|^{−2p} dη: exact for k = 1;
//!   for k ≥ 2 the kernel |η|^{−2p} is written as a Γ-weighted average of
//!   Gaussians, which factorizes the cube into the k-th power of the 1-D
//!   Gaussian tail and collapses the whole thing to a single smooth radial
//!   integral — no cubature anywhere.
//!
//! Tolerance semantics are absolute-plus-relative throughout: a request for
//! `tol` means the refinement loop stops once the error bound drops below
//! `tol·(1 + |value|)`. Gaussian tails evaluate to exact 0 for arguments
//! beyond `GAUSS_TAIL_CUTOFF`; callers must not rely on subnormal accuracy.

use crate::{Error, Result};
use std::sync::OnceLock;

/// √π to full f64 precision.
pub const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Arguments beyond this evaluate Gaussian tails to exact zero.
///
/// e^{−900} ≈ 1e−391 is far below f64's subnormal range already; pinning the
/// cutoff keeps hot Monte Carlo loops branch-light and makes the collar
/// integrals' effective support explicit.
pub const GAUSS_TAIL_CUTOFF: f64 = 30.0;

/// Outcome of a quadrature: value, a refinement-rule error bound, and the
/// number of integrand evaluations spent.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: f64,
    /// Upper bound produced by the refinement rule (difference of successive
    /// levels), accumulated over accepted intervals.
    pub error_estimate: f64,
    pub evaluations: u64,
}

/// Γ(x) for x > 0.
///
/// Relative error ≤ 1e−13 (the underlying implementation is accurate to a
/// few ulp; the frozen-reference tests enforce the contract). Nonpositive
/// arguments are a domain error — the coefficient formulas never need the
/// reflection branch.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("gamma_fn requires x > 0, got {x}")));
    }
    Ok(libm::tgamma(x))
}

/// Gaussian tail T(z) = ∫_z^∞ e^{−η²} dη = (√π/2)·erfc(z).
///
/// Relative error ≤ 1e−13 for z ≤ 25; exact 0 for z ≥ `GAUSS_TAIL_CUTOFF`.
/// Defined for every real z (T(−∞) = √π).
pub fn erfc_scaled_tail(z: f64) -> f64 {
    if z >= GAUSS_TAIL_CUTOFF {
        return 0.0;
    }
    0.5 * SQRT_PI * libm::erfc(z)
}

// ---------------------------------------------------------------------------
// Compensated summation
// ---------------------------------------------------------------------------

/// Neumaier-compensated accumulator.
///
/// Tracks the rounding residue of every addition, which effectively doubles
/// the working precision of a sum. The alternating binomial sums in the
/// coefficient formulas lose ~k/3 digits to cancellation; this keeps the
/// accumulation error itself out of the picture.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

// ---------------------------------------------------------------------------
// Gauss–Legendre rules
// ---------------------------------------------------------------------------

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1],
/// computed once by Newton iteration on the Legendre recurrence.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-type initial guess for the i-th root from the upper end.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..60 {
            let (p, d) = legendre_pd(n, x);
            deriv = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * (1.0 + x.abs()) {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        nodes[i] = x;
        nodes[n - 1 - i] = -x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre_pd(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn gl15() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(15))
}

/// 15-point rule over [lo, hi].
fn gl15_eval<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> f64 {
    let (nodes, weights) = gl15();
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut acc = KahanSum::new();
    for (x, w) in nodes.iter().zip(weights) {
        acc.add(w * f(mid + half * x));
    }
    acc.value() * half
}

/// Composite 15-point rule with panel doubling on [lo, hi]: 2^level panels,
/// doubled until two successive levels agree to `tol·(1+|value|)` or
/// `max_level` is reached. Returns (value, level difference, evaluations,
/// converged).
pub(crate) fn composite_gl_doubling<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    tol: f64,
    max_level: u32,
) -> (f64, f64, u64, bool) {
    let mut prev = f64::NAN;
    let mut evals = 0u64;
    for level in 0..=max_level {
        let panels = 1usize << level;
        let h = (hi - lo) / panels as f64;
        let mut acc = KahanSum::new();
        for i in 0..panels {
            let a = lo + i as f64 * h;
            acc.add(gl15_eval(f, a, a + h));
        }
        evals += 15 * panels as u64;
        let value = acc.value();
        if level > 0 {
            let diff = (value - prev).abs();
            if diff <= tol * (1.0 + value.abs()) {
                return (value, diff, evals, true);
            }
            if level == max_level {
                return (value, diff, evals, false);
            }
        }
        prev = value;
    }
    (prev, f64::INFINITY, evals, false)
}

// ---------------------------------------------------------------------------
// Adaptive integration
// ---------------------------------------------------------------------------

const ADAPTIVE_MAX_DEPTH: u32 = 50;
const ADAPTIVE_MAX_EVALS: u64 = 40_000_000;

/// ∫_a^b f, where either endpoint may be infinite.
///
/// The integrand must be smooth on the open interval. The result satisfies
/// |value − ∫| ≤ max(tol·(1+|value|), error_estimate) in the sense of the
/// refinement bound; if the bisection hits its depth or evaluation limit
/// first, the best value found is returned inside
/// [`Error::NonConvergence`].
pub fn adaptive_integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if !(a < b) {
        return Err(Error::Domain(format!("need a < b, got a={a}, b={b}")));
    }

    // Fold the interval onto one or two finite segments parameterized on
    // (0,1). Rational maps keep Gauss nodes strictly inside the domain, so
    // the integrand is never evaluated at an endpoint or at infinity.
    enum Seg<'f, F> {
        Finite { a: f64, b: f64, f: &'f F },
        UpTail { a: f64, f: &'f F },   // [a, ∞) via x = a + s/(1−s)
        DownTail { b: f64, f: &'f F }, // (−∞, b] via x = b − s/(1−s)
    }
    impl<F: Fn(f64) -> f64> Seg<'_, F> {
        fn eval(&self, s: f64) -> f64 {
            match self {
                Seg::Finite { a, b, f } => (b - a) * f(a + (b - a) * s),
                Seg::UpTail { a, f } => {
                    let c = 1.0 - s;
                    f(a + s / c) / (c * c)
                }
                Seg::DownTail { b, f } => {
                    let c = 1.0 - s;
                    f(b - s / c) / (c * c)
                }
            }
        }
    }

    let mut segs: Vec<Seg<F>> = Vec::new();
    match (a.is_infinite(), b.is_infinite()) {
        (false, false) => segs.push(Seg::Finite { a, b, f: &f }),
        (false, true) => segs.push(Seg::UpTail { a, f: &f }),
        (true, false) => segs.push(Seg::DownTail { b, f: &f }),
        (true, true) => {
            segs.push(Seg::DownTail { b: 0.0, f: &f });
            segs.push(Seg::UpTail { a: 0.0, f: &f });
        }
    }

    let mut evals: u64 = 0;

    // Provisional whole-interval estimate fixes the scale in the
    // absolute-plus-relative stopping rule.
    let mut provisional = 0.0;
    for seg in &segs {
        provisional += gl15_eval(&|s| seg.eval(s), 0.0, 1.0);
        evals += 15;
    }
    let scale = 1.0 + provisional.abs();
    let per_len_tol = tol * scale / segs.len() as f64;

    let mut total = KahanSum::new();
    let mut err_total = 0.0f64;
    let mut converged = true;

    struct Piece {
        lo: f64,
        hi: f64,
        val: f64,
        depth: u32,
    }

    for seg in &segs {
        let g = |s: f64| seg.eval(s);
        let root_val = gl15_eval(&g, 0.0, 1.0);
        evals += 15;
        let mut stack = vec![Piece { lo: 0.0, hi: 1.0, val: root_val, depth: 0 }];
        while let Some(piece) = stack.pop() {
            let mid = 0.5 * (piece.lo + piece.hi);
            let left = gl15_eval(&g, piece.lo, mid);
            let right = gl15_eval(&g, mid, piece.hi);
            evals += 30;
            let refined = left + right;
            let err = (piece.val - refined).abs();
            let width = piece.hi - piece.lo;
            let accept = err <= per_len_tol * width || err <= 1e-17 * scale;
            if accept {
                total.add(refined);
                err_total += err;
            } else if piece.depth >= ADAPTIVE_MAX_DEPTH || evals >= ADAPTIVE_MAX_EVALS {
                total.add(refined);
                err_total += err;
                converged = false;
            } else {
                stack.push(Piece { lo: piece.lo, hi: mid, val: left, depth: piece.depth + 1 });
                stack.push(Piece { lo: mid, hi: piece.hi, val: right, depth: piece.depth + 1 });
            }
        }
    }

    let value = total.value();
    if !converged || !value.is_finite() {
        return Err(Error::NonConvergence { value, error_estimate: err_total, evaluations: evals });
    }
    Ok(QuadratureResult { value, error_estimate: err_total, evaluations: evals })
}

// ---------------------------------------------------------------------------
// Closed-form tail integrals
// ---------------------------------------------------------------------------

/// ∫_1^∞ (η² + a)^{−2} dη in closed form, a > 0:
///
///   π/(4a^{3/2}) − 1/(2a(1+a)) − arctan(a^{−1/2})/(2a^{3/2}),
///
/// from the antiderivative η/(2a(η²+a)) + arctan(η/√a)/(2a^{3/2}).
pub fn j_integral(a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("j_integral requires a > 0, got {a}")));
    }
    let sqrt_a = a.sqrt();
    let a32 = a * sqrt_a;
    Ok(std::f64::consts::PI / (4.0 * a32)
        - 1.0 / (2.0 * a * (1.0 + a))
        - (1.0 / sqrt_a).atan() / (2.0 * a32))
}

// ---------------------------------------------------------------------------
// k-fold integrals over [1,∞)^k
// ---------------------------------------------------------------------------

/// ∫_{[1,∞)^k} (η₁² + … + η_k²)^{−p} dη, p > k/2.
///
/// * k = 1 — exact: 1/(2p−1).
/// * k ≥ 2 — the kernel is averaged over Gaussians,
///   s^{−p} = Γ(p)^{−1} ∫_0^∞ t^{p−1} e^{−ts} dt, which factorizes the
///   cube [1,∞)^k into the k-th power of the Gaussian tail T(√t); the
///   substitution t = v² then leaves one smooth radial integral
///
///     I_k(p) = (2/Γ(p)) ∫_0^∞ v^{2p−k−1} T(v)^k dv.
///
///   The integrand decays like e^{−kv²}, and the endpoint power 2p−k−1
///   exceeds −1 whenever the integral converges at all; the further
///   substitution v = w^n with n = ⌈2/(2p−k)⌉ lifts that power to ≥ 1, so
///   a single adaptive pass reaches ~1e−12 relative accuracy for every k
///   and p. (Direct cubature is a trap here: under the map η = 1/u the
///   integrand is homogeneous at the corner u = 0 where all coordinates
///   grow together, so fixed tensor grids stall near 1e−5 accuracy, and
///   nesting adaptive rules lets inner quadrature noise destabilize the
///   outer error estimate.)
pub fn i_k_integral(k: u32, p: f64) -> Result<QuadratureResult> {
    if k == 0 {
        return Err(Error::Domain("i_k_integral requires k ≥ 1".into()));
    }
    if !(p > k as f64 / 2.0) {
        return Err(Error::Divergent(format!(
            "i_k_integral diverges unless p > k/2; got k={k}, p={p}"
        )));
    }
    if k == 1 {
        let value = 1.0 / (2.0 * p - 1.0);
        return Ok(QuadratureResult {
            value,
            error_estimate: 4.0 * f64::EPSILON * value.abs(),
            evaluations: 0,
        });
    }

    let expo = 2.0 * p - k as f64 - 1.0;
    // Lift a fractional or negative (but integrable) endpoint power to ≥ 1;
    // a pure-power corner has scale-invariant relative rule error, which
    // bisection cannot reduce, while w^{≥1}·(analytic in w^n) converges at
    // spectral rate.
    let n = if expo >= 1.0 { 1.0 } else { (2.0 / (expo + 1.0)).ceil() };
    let mapped = n * (expo + 1.0) - 1.0;
    let ki = k as i32;
    let radial = adaptive_integrate(
        |w: f64| {
            let t = erfc_scaled_tail(w.powf(n));
            if t == 0.0 {
                return 0.0;
            }
            n * w.powf(mapped) * t.powi(ki)
        },
        0.0,
        GAUSS_TAIL_CUTOFF.powf(1.0 / n),
        1e-13,
    )?;
    let front = 2.0 / gamma_fn(p)?;
    Ok(QuadratureResult {
        value: front * radial.value,
        error_estimate: front * (radial.error_estimate + 4.0 * f64::EPSILON * radial.value.abs()),
        evaluations: radial.evaluations,
    })
}

// ---------------------------------------------------------------------------
