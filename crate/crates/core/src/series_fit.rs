//! Extraction of half-power series coefficients from sampled data: the
//! bridge between the quadrature / Monte Carlo oracles and the closed-form
//! coefficient families.
//!
//! The model is v(t) ≈ Σ_{j=0}^{j_max} β_j t^{j/2}. That basis is badly
//! conditioned on narrow t ranges, so the fit never forms normal
//! equations: columns are rescaled by the geometric-midpoint powers
//! t_mid^{j/2} and the scaled design goes through a Householder QR, whose
//! triangular factor also yields the coefficient covariance and an exact
//! residual norm. Rank problems are reported by naming the offending
//! basis columns rather than returning garbage.
//!
//! Weighting: samples carry (t, value, σ). All-zero σ means an unweighted
//! fit with covariance scaled by the usual residual variance estimate;
//! all-positive σ means weighted least squares with absolute errors.
//! Mixing the two is refused — a zero σ among positive ones would be an
//! infinite weight.

use crate::coefficients::{Family, Meta, SeriesCoeffs};
use crate::{Error, Result};

/// A diagonal of the triangular factor below this fraction of the largest
/// diagonal entry marks its basis column as numerically dependent.
const RANK_TOL: f64 = 1e-10;

/// Residuals below this fraction of the sample magnitude are floating-point
/// noise; slopes estimated from them would be meaningless.
const SATURATION_FLOOR: f64 = 1e-13;

/// Result of a half-power fit: the coefficients (j, β_j) for t^{j/2}, the
/// coefficient covariance matrix (positive semidefinite, same index
/// order), the ℓ₂ residual norm in the (weighted) data space, and the t
/// span of the samples.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub coefficients: Vec<(u32, f64)>,
    pub covariance: Vec<Vec<f64>>,
    pub residual_norm: f64,
    pub t_range: (f64, f64),
}

impl FitResult {
    /// Square roots of the covariance diagonal, in coefficient order.
    pub fn standard_errors(&self) -> Vec<f64> {
        self.covariance
            .iter()
            .enumerate()
            .map(|(i, row)| row[i].max(0.0).sqrt())
            .collect()
    }

    /// Package the fitted coefficients as a [`SeriesCoeffs`] table.
    pub fn to_series(&self, family: Family, k: u32, m: Option<u32>) -> Result<SeriesCoeffs> {
        SeriesCoeffs::new(family, k, m, self.coefficients.clone(), Meta::Fit)
    }
}

/// Human-readable name of the j-th basis column t^{j/2}.
fn basis_column_name(j: u32) -> String {
    if j % 2 == 0 {
        format!("t^{{{}}}", j / 2)
    } else {
        format!("t^{{{j}/2}}")
    }
}

/// Weighted least squares of samples (t, v, σ) against {t^{j/2}}_{j=0..j_max}.
///
/// Needs at least j_max + 2 distinct t values. σ must be all zero
/// (unweighted) or all positive (weighted); coefficient estimates are
/// invariant under uniform rescaling of the σ.
pub fn fit_halfpowers(samples: &[(f64, f64, f64)], j_max: u32) -> Result<FitResult> {
    let p = j_max as usize + 1;
    let n = samples.len();
    for &(t, v, s) in samples {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("sample times must be positive; got t={t}")));
        }
        if !v.is_finite() {
            return Err(Error::Domain(format!("sample value at t={t} is not finite")));
        }
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::Domain(format!("sample σ at t={t} must be ≥ 0; got {s}")));
        }
    }
    let mut ts: Vec<f64> = samples.iter().map(|s| s.0).collect();
    ts.sort_by(f64::total_cmp);
    let distinct = 1 + ts.windows(2).filter(|w| w[0] < w[1]).count();
    if n == 0 || distinct < p + 1 {
        return Err(Error::MissingInput(format!(
            "fitting {p} half-power terms needs at least {} distinct t values; got {distinct}",
            p + 1
        )));
    }
    let t_range = (ts[0], ts[n - 1]);
    let t_mid = (t_range.0 * t_range.1).sqrt();

    let positives = samples.iter().filter(|s| s.2 > 0.0).count();
    let weighted = positives == n;
    if positives != 0 && !weighted {
        return Err(Error::Domain(
            "σ must be all zero (unweighted) or all positive; a zero σ among positive ones \
             would be an infinite weight"
                .into(),
        ));
    }

    // Scaled design: column j holds w_i (t_i/t_mid)^{j/2}.
    let mut a = vec![vec![0.0f64; p]; n];
    let mut b = vec![0.0f64; n];
    for (i, &(t, v, s)) in samples.iter().enumerate() {
        let w = if weighted { 1.0 / s } else { 1.0 };
        let ratio = (t / t_mid).sqrt();
        let mut col = w;
        for j in 0..p {
            a[i][j] = col;
            col *= ratio;
        }
        b[i] = w * v;
    }

    // Householder QR, reflectors applied to the right-hand side as we go.
    for kcol in 0..p {
        let norm = a[kcol..n].iter().map(|row| row[kcol] * row[kcol]).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue; // dead column; caught by the rank scan below
        }
        let alpha = if a[kcol][kcol] >= 0.0 { -norm } else { norm };
        let mut v = vec![0.0f64; n - kcol];
        v[0] = a[kcol][kcol] - alpha;
        for i in kcol + 1..n {
            v[i - kcol] = a[i][kcol];
        }
        let vnorm2 = v.iter().map(|x| x * x).sum::<f64>();
        a[kcol][kcol] = alpha;
        for row in a.iter_mut().take(n).skip(kcol + 1) {
            row[kcol] = 0.0;
        }
        for j in kcol + 1..p {
            let dot: f64 = (kcol..n).map(|i| v[i - kcol] * a[i][j]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in kcol..n {
                a[i][j] -= f * v[i - kcol];
            }
        }
        let dot: f64 = (kcol..n).map(|i| v[i - kcol] * b[i]).sum();
        let f = 2.0 * dot / vnorm2;
        for i in kcol..n {
            b[i] -= f * v[i - kcol];
        }
    }

    // Rank scan on the triangular diagonal.
    let r_max = (0..p).map(|j| a[j][j].abs()).fold(0.0f64, f64::max);
    let dead: Vec<String> = (0..p)
        .filter(|&j| a[j][j].abs() <= RANK_TOL * r_max)
        .map(|j| basis_column_name(j as u32))
        .collect();
    if !dead.is_empty() {
        return Err(Error::RankDeficient { columns: dead });
    }

    // Back-substitution in the scaled parameters.
    let mut y = vec![0.0f64; p];
    for j in (0..p).rev() {
        let mut acc = b[j];
        for l in j + 1..p {
            acc -= a[j][l] * y[l];
        }
        y[j] = acc / a[j][j];
    }
    // Residual norm is exactly the untouched tail of the transformed rhs.
    let residual_norm = b[p..n].iter().map(|x| x * x).sum::<f64>().sqrt();

    // Inverse of the triangular factor, for the covariance.
    let mut rinv = vec![vec![0.0f64; p]; p];
    for col in 0..p {
        for j in (0..=col).rev() {
            let mut acc = if j == col { 1.0 } else { 0.0 };
            for l in j + 1..=col {
                acc -= a[j][l] * rinv[l][col];
            }
            rinv[j][col] = acc / a[j][j];
        }
    }
    // Unweighted fits estimate the noise scale from the residuals.
    let variance = if weighted {
        1.0
    } else if n > p {
        residual_norm * residual_norm / (n - p) as f64
    } else {
        0.0
    };

    let scale: Vec<f64> = (0..p).map(|j| t_mid.sqrt().powi(j as i32)).collect();
    let coefficients: Vec<(u32, f64)> =
        (0..p).map(|j| (j as u32, y[j] / scale[j])).collect();
    let mut covariance = vec![vec![0.0f64; p]; p];
    for j in 0..p {
        for l in 0..p {
            let dot: f64 = (0..p).map(|q| rinv[j][q] * rinv[l][q]).sum();
            covariance[j][l] = variance * dot / (scale[j] * scale[l]);
        }
    }

    Ok(FitResult { coefficients, covariance, residual_norm, t_range })
}

/// Empirical remainder exponent: the least-squares slope of
/// log|v − model(t)| against log t over a geometric t grid. A model
/// missing its t^{q/2} term produces a slope near q/2.
///
/// `expected_order` is the order the caller hopes to certify; it only
/// feeds the diagnostics. If any residual sits at the floating-point
/// floor the slope would measure rounding noise, so that case errors out
/// as saturated instead of returning a number.
pub fn order_check(samples: &[(f64, f64)], model: &SeriesCoeffs, expected_order: f64) -> Result<f64> {
    if samples.len() < 3 {
        return Err(Error::MissingInput(
            "order estimation needs at least 3 samples on a geometric grid".into(),
        ));
    }
    let mut pts: Vec<(f64, f64)> = samples.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    for &(t, v) in &pts {
        if !(t > 0.0) || !t.is_finite() || !v.is_finite() {
            return Err(Error::Domain(format!("bad sample (t={t}, v={v})")));
        }
    }
    let ratios: Vec<f64> = pts.windows(2).map(|w| w[1].0 / w[0].0).collect();
    let (rmin, rmax) = ratios
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
    if rmin <= 1.0 || rmax / rmin > 1.05 {
        return Err(Error::Domain(
            "order estimation requires a strictly geometric t grid (constant ratio)".into(),
        ));
    }

    let mut xs = Vec::with_capacity(pts.len());
    let mut ys = Vec::with_capacity(pts.len());
    for &(t, v) in &pts {
        let r = v - model.eval(t);
        if r.abs() <= SATURATION_FLOOR * (1.0 + v.abs()) {
            return Err(Error::Domain(format!(
                "residual at t={t:.3e} is saturated at the rounding floor; \
                 cannot certify order {expected_order} from noise"
            )));
        }
        xs.push(t.ln());
        ys.push(r.abs().ln());
    }
    let xbar = xs.iter().sum::<f64>() / xs.len() as f64;
    let ybar = ys.iter().sum::<f64>() / ys.len() as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    Ok(sxy / sxx)
}

/// Parse JSON-lines records into (t, value, σ) samples. Each non-empty
/// line must be a JSON object with a numeric "t" and either a "value" or
/// a "mean" field (Monte Carlo records report means); "stderr" is
/// optional and defaults to 0 (unweighted).
pub fn parse_jsonl_samples(text: &str) -> Result<Vec<(f64, f64, f64)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let record: serde_json::Value = serde_json::from_str(line)
            .map_err(|e| Error::Parse(format!("line {}: {e}", idx + 1)))?;
        let field = |name: &str| record.get(name).and_then(serde_json::Value::as_f64);
        let t = field("t").ok_or_else(|| {
            Error::Parse(format!("line {}: missing numeric field \"t\"", idx + 1))
        })?;
        let value = field("value").or_else(|| field("mean")).ok_or_else(|| {
            Error::Parse(format!(
                "line {}: missing numeric field \"value\" (or \"mean\")",
                idx + 1
            ))
        })?;
        let sigma = field("stderr").unwrap_or(0.0);
        out.push((t, value, sigma));
    }
    if out.is_empty() {
        return Err(Error::MissingInput("no samples found in JSON-lines input".into()));
    }
    Ok(out)
}

/// Parse CSV dumps into (t, value, σ) samples: two or three numeric
/// columns per row, optional single header row, `#` comment lines
/// ignored. A missing third column means σ = 0.
pub fn parse_csv_samples(text: &str) -> Result<Vec<(f64, f64, f64)>> {
    let mut out = Vec::new();
    let mut header_allowed = true;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if header_allowed && fields[0].parse::<f64>().is_err() {
            header_allowed = false;
            continue;
        }
        header_allowed = false;
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Parse(format!(
                "line {}: expected 2 or 3 comma-separated columns, got {}",
                idx + 1,
                fields.len()
            )));
        }
        let mut nums = [0.0f64; 3];
        for (slot, field) in nums.iter_mut().zip(&fields) {
            *slot = field.parse::<f64>().map_err(|_| {
                Error::Parse(format!("line {}: \"{field}\" is not a number", idx + 1))
            })?;
        }
        out.push((nums[0], nums[1], nums[2]));
    }
    if out.is_empty() {
        return Err(Error::MissingInput("no samples found in CSV input".into()));
    }
    Ok(out)
}
