//! The asymptotic coefficient families (α, c, a, b), the alternating
//! binomial transform connecting them, and the interior series algebra.
//!
//! Numerically this module is about one hazard: alternating binomial sums.
//! Their condition number grows like 2^k against results of order one, so
//! by k ≈ 30 even a perfectly compensated float sum is ~8 digits short.
//! Every such sum here therefore runs in exact rational arithmetic — j even
//! directly, j odd with per-term square roots replaced by scaled integer
//! approximants accurate to 2^−128 (far below the one final f64 rounding).
//! A compensated float evaluation survives only in the tests, as an
//! independent cross-check at small k where it is still trustworthy.
//!
//! Orientation: every curvature-weighted coefficient states which normal
//! convention it expects. `c_coeff` and `a_coeff` take the caller's
//! orientation through the geometry inputs; `b_coeff` fixes body-inward
//! internally because its constants were validated against exact
//! exterior-ball series in that convention.

use crate::geometry::{CompactBody, GeomFunctionals, Orientation};
use crate::numerics::{gamma_fn, i_k_integral, j_integral, KahanSum, SQRT_PI};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

// ---------------------------------------------------------------------------
// Exact-arithmetic helpers
// ---------------------------------------------------------------------------

fn big_binomial(n: u32, k: u32) -> BigInt {
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// Convert an exact ratio to f64 through one scaled integer division, so the
/// result is correct regardless of how large numerator and denominator have
/// grown (naive numer/denom conversion overflows to ∞/∞ = NaN).
fn ratio_to_f64(r: &Ratio<BigInt>) -> f64 {
    if r.numer().is_zero() {
        return 0.0;
    }
    let scaled: BigInt = (r.numer() << 80u32) / r.denom();
    scaled.to_f64().unwrap_or(f64::NAN) / 2f64.powi(80)
}

/// 1/√n as an exact ratio accurate to relative 2^−128: take the integer
/// square root of n·2^256 and invert.
fn inv_sqrt_ratio(n: u32) -> Ratio<BigInt> {
    let shifted: BigInt = BigInt::from(n) << 256u32;
    let root = shifted.sqrt();
    Ratio::new(BigInt::one() << 128u32, root)
}

// ---------------------------------------------------------------------------
// α coefficients
// ---------------------------------------------------------------------------

/// Half-space series coefficient
/// α_{k,j} = (1/2) Σ_{ℓ=1}^k (−1)^ℓ C(k,ℓ) · Γ(j/2)Γ(j)^{−1} · ℓ^{−j/2}.
///
/// Even j evaluates exactly in rationals (Γ(j/2)/Γ(j) is rational, as is
/// every ℓ^{−j/2}). Odd j carries √π and per-term √ℓ factors; the
/// alternating combination still runs in exact rationals, with 2^−128
/// square-root approximants standing in for √ℓ, so accuracy is one f64
/// rounding at every k instead of decaying like 2^k·ε.
pub fn alpha_coeff(k: u32, j: u32) -> Result<f64> {
    if k < 1 || j < 1 {
        return Err(Error::Domain(format!("alpha_coeff requires k ≥ 1, j ≥ 1; got k={k}, j={j}")));
    }
    if j % 2 == 0 {
        // Γ(ν)/Γ(2ν) = (ν−1)!/(2ν−1)!, ℓ^{−ν} rational: exact path.
        let nu = j / 2;
        let mut gamma_ratio = Ratio::<BigInt>::one();
        for i in nu..(2 * nu) {
            // (ν−1)!/(2ν−1)! = 1/(ν·(ν+1)···(2ν−1))
            gamma_ratio /= Ratio::from_integer(BigInt::from(i));
        }
        let mut sum = Ratio::<BigInt>::zero();
        for l in 1..=k {
            let mut term = Ratio::from_integer(big_binomial(k, l));
            term /= Ratio::from_integer(BigInt::from(l).pow(nu));
            if l % 2 == 1 {
                term = -term;
            }
            sum += term;
        }
        Ok(ratio_to_f64(&(sum * gamma_ratio)) / 2.0)
    } else {
        Ok(alpha_odd_rational(k, j))
    }
}

/// Γ(j/2)/Γ(j) for odd j = 2μ+1 equals √π / (4^μ μ!).
fn odd_gamma_ratio(j: u32) -> f64 {
    let mu = (j - 1) / 2;
    if mu < 140 {
        let mut denom = 1.0f64;
        for i in 1..=mu {
            denom *= 4.0 * i as f64;
        }
        SQRT_PI / denom
    } else {
        // Factorials overflow f64 around μ = 140·(log scale); go through
        // log-Γ instead.
        let jf = j as f64;
        (libm::lgamma(jf / 2.0) - libm::lgamma(jf)).exp()
    }
}

fn alpha_odd_rational(k: u32, j: u32) -> f64 {
    let mu = (j - 1) / 2;
    let mut sum = Ratio::<BigInt>::zero();
    for l in 1..=k {
        // ℓ^{−j/2} = ℓ^{−μ} · (1/√ℓ)
        let mut term = Ratio::from_integer(big_binomial(k, l));
        term /= Ratio::from_integer(BigInt::from(l).pow(mu));
        term *= inv_sqrt_ratio(l);
        if l % 2 == 1 {
            term = -term;
        }
        sum += term;
    }
    0.5 * odd_gamma_ratio(j) * ratio_to_f64(&sum)
}

/// Exact harmonic number H_k as a rational.
fn harmonic_ratio(k: u32) -> Ratio<BigInt> {
    let mut h = Ratio::<BigInt>::zero();
    for l in 1..=k {
        h += Ratio::new(BigInt::one(), BigInt::from(l));
    }
    h
}

/// Verify α_{k,2} = −H_k/2 for every k ≤ k_max (the alternating binomial
/// sum of 1/ℓ collapses to a harmonic number). Returns false as soon as any
/// k violates the identity by more than 1e−10.
pub fn harmonic_identity_check(k_max: u32) -> Result<bool> {
    for k in 1..=k_max.max(1) {
        let alpha = alpha_coeff(k, 2)?;
        let want = -ratio_to_f64(&harmonic_ratio(k)) / 2.0;
        if (alpha - want).abs() > 1e-10 {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Boundary-curvature factors
// ---------------------------------------------------------------------------

/// Coefficient of ∫_{∂M} f·L_aa dy in the t-order interior expansion term:
///
/// κ_bdy(k) = −k/6 + (1/2) Σ_{ℓ=1}^k C(k,ℓ)(−1)^{ℓ−1}[(k−ℓ)·j_integral(ℓ) + 1/ℓ].
///
/// κ_bdy(1) = 1/3 exactly.
pub fn kappa_bdy(k: u32) -> Result<f64> {
    if k < 1 {
        return Err(Error::Domain("kappa_bdy requires k ≥ 1".into()));
    }
    let mut acc = KahanSum::new();
    let mut binom = 1.0f64;
    for l in 1..=k {
        binom *= (k - l + 1) as f64 / l as f64;
        let sign = if l % 2 == 1 { 1.0 } else { -1.0 };
        let inner = (k - l) as f64 * j_integral(l as f64)? + 1.0 / l as f64;
        acc.add(sign * binom * inner);
    }
    Ok(-(k as f64) / 6.0 + 0.5 * acc.value())
}

/// Coefficient of ∫_{∂K} L_aa dy in the t-order sausage expansion term:
/// −1/3 at k = 1, and −1/(2k) + (k/2)·j_integral(k−1) for k ≥ 2.
///
/// Equals the alternating binomial transform of the κ_bdy sequence — the
/// tests pin that identity.
pub fn c_curvature_factor(k: u32) -> Result<f64> {
    match k {
        0 => Err(Error::Domain("c_curvature_factor requires k ≥ 1".into())),
        1 => Ok(-1.0 / 3.0),
        _ => {
            let kf = k as f64;
            Ok(-0.5 / kf + 0.5 * kf * j_integral(kf - 1.0)?)
        }
    }
}

// ---------------------------------------------------------------------------
// c coefficients (sausage expansion)
// ---------------------------------------------------------------------------

/// Expected-volume expansion coefficient c_{k,j} for a body K in dimension
/// ≥ 2:
///
/// * j = 0 — |K|,
/// * j = 1 — (1/2)(π/k)^{1/2} |∂K|,
/// * j = 2 — c_curvature_factor(k) · ∫_{∂K} L_aa dy at the supplied
///   orientation (`Outward` is the branch every cross-check in this crate
///   lands on: the boundary-layer fits and the pinned Monte Carlo growth
///   both select it).
///
/// Orders j ≥ 3 are not defined by the expansion and report
/// `UnsupportedOrder`.
pub fn c_coeff(k: u32, j: u32, body: &CompactBody, orientation: Orientation) -> Result<f64> {
    if k < 1 {
        return Err(Error::Domain("c_coeff requires k ≥ 1".into()));
    }
    if body.dimension() < 2 {
        return Err(Error::Unsupported(
            "c_coeff needs an ambient dimension of at least 2".into(),
        ));
    }
    match j {
        0 => Ok(body.volume()),
        1 => Ok(0.5 * (std::f64::consts::PI / k as f64).sqrt() * body.surface_measure()),
        2 => Ok(c_curvature_factor(k)? * body.total_curvature(orientation)),
        _ => Err(Error::UnsupportedOrder(format!(
            "c-family coefficients stop at j = 2; got j={j}"
        ))),
    }
}

// ---------------------------------------------------------------------------
// a coefficients (heat-content expansion)
// ---------------------------------------------------------------------------

/// Interior-domain expansion coefficient a_{k,j} from packaged geometric
/// functionals:
///
/// * j = 0 — ∫ f,
/// * j = 1 — α_{k,1} · ∫_{∂M} f,
/// * j = 2 — (k/6)·∫ fτ + α_{k,2}·∫_{∂M} f^{(1)} + κ_bdy(k)·∫_{∂M} f L_aa.
///
/// The functionals carry whatever orientation the caller built them with;
/// the transform identities against the c-family hold as long as both sides
/// share one, and the crate's cross-checks settle that shared choice on
/// outward.
pub fn a_coeff(k: u32, j: u32, g: &GeomFunctionals) -> Result<f64> {
    if k < 1 {
        return Err(Error::Domain("a_coeff requires k ≥ 1".into()));
    }
    match j {
        0 => Ok(g.vol_f),
        1 => Ok(alpha_coeff(k, 1)? * g.bdy_f),
        2 => Ok(k as f64 / 6.0 * g.vol_ftau
            + alpha_coeff(k, 2)? * g.bdy_f1
            + kappa_bdy(k)? * g.bdy_fl),
        _ => Err(Error::UnsupportedOrder(format!(
            "a-family coefficients stop at j = 2; got j={j}"
        ))),
    }
}

// ---------------------------------------------------------------------------
// b coefficients (exterior-ball expansion, dimension 3)
// ---------------------------------------------------------------------------

/// Which constant convention `b_coeff` evaluates. The two published forms
/// of the j ∈ {1,2} constants disagree by the exact factor 4π
/// ([`b_discrepancy_factor`]); `PerProof` is the one that matches the exact
/// exterior-ball series to fitting accuracy, `AsPrinted` is kept callable
/// so the discrepancy stays measurable instead of becoming folklore.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BNormalization {
    AsPrinted,
    PerProof,
}

/// The exact ratio AsPrinted / PerProof for b_{k,1} and b_{k,2}: 4π.
pub fn b_discrepancy_factor() -> f64 {
    4.0 * std::f64::consts::PI
}

/// Exterior expansion coefficient b_{k,j} for a three-dimensional body:
///
/// * j = 0 — |K| (both normalizations),
/// * j = 1 — const₁(k) · |∂K| with
///   const₁ = 2^k π^{−k/2} Γ((k+1)/2) I_k((k+1)/2) under `PerProof`,
/// * j = 2 — const₂(k) · ∫_{∂K} L_aa dy (inward, fixed internally) with
///   const₂ = −2^k π^{−k/2} (k−2) Γ((k+2)/2) I_k((k+2)/2) under `PerProof`
///   (so b_{2,2} = 0 identically).
///
/// `AsPrinted` multiplies the j ∈ {1,2} constants by 4π.
pub fn b_coeff(k: u32, j: u32, body: &CompactBody, normalization: BNormalization) -> Result<f64> {
    if k < 1 {
        return Err(Error::Domain("b_coeff requires k ≥ 1".into()));
    }
    if body.dimension() != 3 {
        return Err(Error::Unsupported(
            "b_coeff is defined for three-dimensional bodies only".into(),
        ));
    }
    let norm = match normalization {
        BNormalization::PerProof => 1.0,
        BNormalization::AsPrinted => b_discrepancy_factor(),
    };
    let kf = k as f64;
    match j {
        0 => Ok(body.volume()),
        1 => {
            let ik = i_k_integral(k, (kf + 1.0) / 2.0)?.value;
            let c1 = 2f64.powi(k as i32)
                * std::f64::consts::PI.powf(-kf / 2.0)
                * gamma_fn((kf + 1.0) / 2.0)?
                * ik;
            Ok(norm * c1 * body.surface_measure())
        }
        2 => {
            if k == 2 {
                return Ok(0.0); // the (k−2) factor: no t-order term at k = 2
            }
            let ik = i_k_integral(k, (kf + 2.0) / 2.0)?.value;
            let c2 = -2f64.powi(k as i32)
                * std::f64::consts::PI.powf(-kf / 2.0)
                * (kf - 2.0)
                * gamma_fn((kf + 2.0) / 2.0)?
                * ik;
            Ok(norm * c2 * body.total_curvature(Orientation::Inward))
        }
        _ => Err(Error::UnsupportedOrder(format!(
            "b-family coefficients stop at j = 2; got j={j}"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Alternating binomial transform
// ---------------------------------------------------------------------------

/// y_k = Σ_{ℓ=1}^k (−1)^ℓ C(k,ℓ) x_ℓ for k = 1..=x.len().
///
/// This map sends the per-unit a-family constants to the c-family constants
/// at each order j and is an involution (applying it twice restores the
/// input); use [`transform_1d_rational`] when exactness matters.
pub fn transform_1d(x: &[f64]) -> Vec<f64> {
    (1..=x.len())
        .map(|k| {
            let mut acc = KahanSum::new();
            let mut binom = Ratio::<BigInt>::one();
            for (l, xl) in x.iter().enumerate().take(k) {
                let l = l + 1;
                binom = binom * Ratio::from_integer(BigInt::from(k - l + 1))
                    / Ratio::from_integer(BigInt::from(l));
                let sign = if l % 2 == 1 { -1.0 } else { 1.0 };
                acc.add(sign * ratio_to_f64(&binom) * xl);
            }
            acc.value()
        })
        .collect()
}

/// Exact-rational version of [`transform_1d`].
pub fn transform_1d_rational(x: &[Ratio<BigInt>]) -> Vec<Ratio<BigInt>> {
    (1..=x.len())
        .map(|k| {
            let mut acc = Ratio::<BigInt>::zero();
            for (l, xl) in x.iter().enumerate().take(k) {
                let l = l + 1;
                let mut term = Ratio::from_integer(big_binomial(k as u32, l as u32)) * xl;
                if l % 2 == 1 {
                    term = -term;
                }
                acc += term;
            }
            acc
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Interior expansion (closed domain, no boundary layer)
// ---------------------------------------------------------------------------

/// Integrated interior invariants feeding [`interior_a`]: ∫ Tr(Fτ),
/// ∫ Tr(FE), the three second-order combinations, the weight volume, and
/// the caller-supplied fourth-order single-power coefficient a14 (its
/// general formula lives outside this crate's scope).
#[derive(Debug, Clone, Copy, Default)]
pub struct InteriorData {
    pub vol_f: f64,
    pub tau_f: f64,
    pub e_f: f64,
    pub tau2_f: f64,
    pub tau_e_f: f64,
    pub e2_f: f64,
    pub a14: f64,
}

/// Value of an interior coefficient together with the parity flag: odd
/// orders vanish identically on closed domains (no half-integer powers),
/// and callers sometimes need to distinguish that structural zero from a
/// computed one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteriorCoeff {
    pub value: f64,
    pub vanishes_by_parity: bool,
}

/// Interior expansion coefficient of t^{j/2} for the k-th diagonal power on
/// a closed domain:
///
/// * j = 0 — ∫ f (independent of k),
/// * j = 2 — k·(1/6)(∫fτ + 6∫fE),
/// * j = 4 — k·a14 + (k(k−1)/72)(∫fτ² + 12∫fτE + 36∫fE²),
/// * odd j — exactly zero (flagged), even j ≥ 6 — `UnsupportedOrder`.
pub fn interior_a(k: u32, j: u32, d: &InteriorData) -> Result<InteriorCoeff> {
    if k < 1 {
        return Err(Error::Domain("interior_a requires k ≥ 1".into()));
    }
    if j % 2 == 1 {
        return Ok(InteriorCoeff { value: 0.0, vanishes_by_parity: true });
    }
    let kf = k as f64;
    let value = match j {
        0 => d.vol_f,
        2 => kf / 6.0 * (d.tau_f + 6.0 * d.e_f),
        4 => kf * d.a14 + kf * (kf - 1.0) / 72.0 * (d.tau2_f + 12.0 * d.tau_e_f + 36.0 * d.e2_f),
        _ => {
            return Err(Error::UnsupportedOrder(format!(
                "interior coefficients stop at j = 4; got j={j}"
            )))
        }
    };
    Ok(InteriorCoeff { value, vanishes_by_parity: false })
}

/// Coefficients of (Σ_ν e_ν t^ν)^k truncated at t^{max_order/2}, where the
/// input lists (even order 2ν, value) pairs and the output uses the same
/// even-order labels. The order-0 entry must be present with value exactly
/// 1 (identity normalization).
pub fn series_power_diag(
    e: &[(u32, f64)],
    k: u32,
    max_order: u32,
) -> Result<Vec<(u32, f64)>> {
    if k < 1 {
        return Err(Error::Domain("series_power_diag requires k ≥ 1".into()));
    }
    if max_order % 2 != 0 {
        return Err(Error::Domain(format!(
            "series orders are even; got max_order={max_order}"
        )));
    }
    match e.first() {
        Some(&(0, v)) if v == 1.0 => {}
        _ => {
            return Err(Error::MissingInput(
                "series_power_diag input must start with the order-0 entry of value 1".into(),
            ))
        }
    }
    let n = (max_order / 2) as usize;
    let mut base = vec![0.0f64; n + 1];
    let mut last_order = None;
    for &(order, v) in e {
        if order % 2 != 0 {
            return Err(Error::Domain(format!("series orders are even; got {order}")));
        }
        if let Some(prev) = last_order {
            if order <= prev {
                return Err(Error::Domain("series orders must be strictly increasing".into()));
            }
        }
        last_order = Some(order);
        let idx = (order / 2) as usize;
        if idx <= n {
            base[idx] = v;
        }
    }

    let mut result = vec![0.0f64; n + 1];
    result[0] = 1.0;
    for _ in 0..k {
        let mut next = vec![0.0f64; n + 1];
        for (i, ri) in result.iter().enumerate() {
            if *ri == 0.0 {
                continue;
            }
            for (jdx, bj) in base.iter().enumerate().take(n + 1 - i) {
                next[i + jdx] += ri * bj;
            }
        }
        result = next;
    }
    // One power too many: the loop above computed base^k starting from 1,
    // i.e. exactly base^k. Emit with even-order labels.
    Ok(result
        .into_iter()
        .enumerate()
        .map(|(i, v)| (2 * i as u32, v))
        .collect())
}

// ---------------------------------------------------------------------------
// Coefficient tables
// ---------------------------------------------------------------------------

/// Which expansion a coefficient table belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Alpha,
    C,
    A,
    B,
    Fitted,
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Family::Alpha => "alpha",
            Family::C => "c",
            Family::A => "a",
            Family::B => "b",
            Family::Fitted => "fitted",
        };
        f.write_str(s)
    }
}

/// How a table's values were produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Meta {
    Formula,
    Quadrature,
    Fit,
    Mc,
}

impl std::fmt::Display for Meta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Meta::Formula => "formula",
            Meta::Quadrature => "quadrature",
            Meta::Fit => "fit",
            Meta::Mc => "mc",
        };
        f.write_str(s)
    }
}

/// One coefficient table: the values of t^{j/2} terms for a fixed family
/// and k (and ambient dimension, absent for the dimensionless α family).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesCoeffs {
    pub family: Family,
    pub k: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    /// (j, value), strictly increasing in j.
    pub entries: Vec<(u32, f64)>,
    pub meta: Meta,
}

impl SeriesCoeffs {
    pub fn new(
        family: Family,
        k: u32,
        m: Option<u32>,
        entries: Vec<(u32, f64)>,
        meta: Meta,
    ) -> Result<Self> {
        if k < 1 {
            return Err(Error::Domain("SeriesCoeffs requires k ≥ 1".into()));
        }
        match (family, m) {
            (Family::Alpha, Some(_)) => {
                return Err(Error::Domain("alpha tables carry no ambient dimension".into()))
            }
            (Family::Alpha, None) => {}
            (_, None) => {
                return Err(Error::Domain(format!(
                    "family {family} requires an ambient dimension"
                )))
            }
            (_, Some(m)) if m < 1 => {
                return Err(Error::Domain("ambient dimension must be ≥ 1".into()))
            }
            _ => {}
        }
        if !entries.windows(2).all(|w| w[0].0 < w[1].0) {
            return Err(Error::Domain(
                "series entries must be strictly increasing in j".into(),
            ));
        }
        Ok(Self { family, k, m, entries, meta })
    }

    /// Σ value · t^{j/2} over the stored entries, t ≥ 0.
    pub fn eval(&self, t: f64) -> f64 {
        let sqrt_t = t.sqrt();
        let mut acc = KahanSum::new();
        for &(j, v) in &self.entries {
            acc.add(v * sqrt_t.powi(j as i32));
        }
        acc.value()
    }
}

// ---------------------------------------------------------------------------
