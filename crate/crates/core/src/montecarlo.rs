//! Monte Carlo estimation of sausage volumes: pinned estimates via
//! Brownian bridges and unpinned ones via free Brownian motions.
//!
//! Everything here follows the generator-Δ convention — per-coordinate
//! increment variance 2Δs, matching the kernel (4πt)^{−m/2}e^{−|x|²/(4t)}
//! used throughout the crate — not the probabilist's Δ/2. The statistical
//! tests below encode that factor of two and will catch a regression.
//!
//! The estimator is hit-or-miss: per replica, sample k independent paths,
//! bound the union of sausages by a box, and average the indicator that a
//! uniform point is covered by all k sausages. Replicas are independent
//! work units; each derives its own ChaCha stream from (seed, family,
//! replica index), and results are combined in replica-index order, so an
//! estimate is bit-identical across thread counts and between the
//! parallel and sequential paths.
//!
//! Discretizing a path into a polyline misses the excursions between grid
//! points, so plain coverage is biased low. `BiasMode::BridgeCorrected`
//! compensates with the half-space crossing probability exp(−d_a d_b/Δs)
//! per segment (d_a, d_b the endpoint distances to the ball surface, Δs
//! the segment duration under the variance-2s convention). That is an
//! approximation — the exact ball-hitting law of a bridge segment has no
//! elementary form — and its residual bias is measured against the
//! closed-form ball content oracle in the tests.

use crate::geometry::CompactBody;
use crate::{exec, Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Segments per pruning chunk in the coverage test.
const CHUNK_SEGMENTS: usize = 32;

/// Crossing exponents above this are treated as no crossing (probability
/// below e⁻⁴⁰ ≈ 4e−18); it also sets the pruning margin √(40·Δs).
const CROSSING_EXPONENT_CUTOFF: f64 = 40.0;

/// A sampled path on a uniform time grid over [0, t].
#[derive(Debug, Clone)]
pub struct PathPolyline {
    /// Ambient dimension m.
    pub dim: u32,
    /// Grid times, increasing from exactly 0 to exactly t.
    pub times: Vec<f64>,
    /// Whether the path is a bridge returning to the origin.
    pub pinned: bool,
    points: Vec<f64>, // flattened, stride = dim
}

impl PathPolyline {
    pub fn num_points(&self) -> usize {
        self.times.len()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        let d = self.dim as usize;
        &self.points[i * d..(i + 1) * d]
    }

    pub fn duration(&self) -> f64 {
        *self.times.last().expect("a path has at least one grid point")
    }

    /// Largest Euclidean distance of any grid point from the origin.
    pub fn max_norm(&self) -> f64 {
        let d = self.dim as usize;
        self.points
            .chunks_exact(d)
            .map(|p| p.iter().map(|x| x * x).sum::<f64>())
            .fold(0.0f64, f64::max)
            .sqrt()
    }
}

/// How a sausage decides whether it covers a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BiasMode {
    /// Distance from the point to the polyline segments; biased low
    /// because excursions between grid points are invisible.
    Polyline,
    /// Polyline coverage plus the per-segment half-space crossing
    /// probability; never below the polyline answer.
    BridgeCorrected,
}

impl std::fmt::Display for BiasMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BiasMode::Polyline => "polyline",
            BiasMode::BridgeCorrected => "bridge_corrected",
        })
    }
}

/// Which path law an estimate used: pinned bridges (Z) or free motions (Q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum McFamily {
    Z,
    Q,
}

impl std::fmt::Display for McFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            McFamily::Z => "Z",
            McFamily::Q => "Q",
        })
    }
}

/// Parameters of a sausage-volume estimate.
#[derive(Debug, Clone)]
pub struct McParams {
    /// Number of independent paths whose sausages must all cover a point.
    pub k: u32,
    /// Ambient dimension.
    pub m: u32,
    /// Path duration.
    pub t: f64,
    /// Segments per path.
    pub steps: u32,
    /// Uniform test points per replica.
    pub points_per_replica: u32,
    /// Independent replicas; the standard error comes from their spread.
    pub replicas: u32,
    /// Base seed; every (seed, family, replica) triple is its own stream.
    pub seed: u64,
    pub mode: BiasMode,
    /// Jittered-grid stratification of the test points (variance knob).
    pub stratified: bool,
    /// Multiplier ≥ 1 on the bounding-box half-width; coverage vanishes
    /// outside the minimal box, so estimates must not depend on it.
    pub box_inflation: f64,
    /// Force the sequential execution path (parallel is the default).
    pub sequential: bool,
    /// Optional cap on total work ≈ k·steps·(points + m) per replica; if
    /// the cap allows fewer than the requested replicas, the run stops
    /// early and reports how far it got.
    pub max_work: Option<u64>,
}

impl McParams {
    /// Defaults: 256 steps, 256 points, 256 replicas, seed 1, polyline
    /// coverage, plain sampling, minimal box, parallel, no work cap.
    pub fn new(k: u32, m: u32, t: f64) -> Self {
        McParams {
            k,
            m,
            t,
            steps: 256,
            points_per_replica: 256,
            replicas: 256,
            seed: 1,
            mode: BiasMode::Polyline,
            stratified: false,
            box_inflation: 1.0,
            sequential: false,
            max_work: None,
        }
    }
}

/// A Monte Carlo estimate with its replica-level standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    /// From the replica-to-replica variance (points within a replica
    /// share paths and are correlated); 0 when only one replica ran.
    pub stderr: f64,
    pub replicas: u32,
    pub seed: u64,
    /// Steps per path.
    pub discretization: u32,
}

/// One JSON-lines result record, the interchange format consumed by the
/// series-fitting parsers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McRecord {
    pub family: McFamily,
    pub k: u32,
    pub m: u32,
    pub t: f64,
    pub mean: f64,
    pub stderr: f64,
    pub replicas: u32,
    pub steps: u32,
    pub seed: u64,
    pub mode: BiasMode,
}

impl McRecord {
    pub fn new(family: McFamily, params: &McParams, estimate: &McEstimate) -> Self {
        McRecord {
            family,
            k: params.k,
            m: params.m,
            t: params.t,
            mean: estimate.mean,
            stderr: estimate.stderr,
            replicas: estimate.replicas,
            steps: estimate.discretization,
            seed: estimate.seed,
            mode: params.mode,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("flat record always serializes")
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the ChaCha stream for one replica. Mixing the family tag and
/// replica index through separate multipliers keeps adjacent replicas'
/// key material unrelated (no shared splitmix subsequences).
fn replica_rng(seed: u64, stream: u64, replica: u64) -> ChaCha8Rng {
    let mut x = seed;
    splitmix64(&mut x);
    x ^= stream.wrapping_mul(0xA24B_AED4_963E_E407);
    splitmix64(&mut x);
    x ^= replica.wrapping_mul(0x9E6C_63D0_876A_3F6B);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut x).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Sample a free Brownian path from the origin: m coordinates, `steps`
/// uniform increments over [0, t], per-coordinate increment variance 2Δs.
pub fn sample_motion(m: u32, t: f64, steps: u32, rng: &mut impl Rng) -> PathPolyline {
    assert!(m >= 1, "dimension must be ≥ 1");
    assert!(steps >= 1, "a free path needs at least 1 step");
    assert!(t > 0.0 && t.is_finite(), "duration must be positive");
    let d = m as usize;
    let n = steps as usize + 1;
    let dt = t / steps as f64;
    let sd = (2.0 * dt).sqrt();
    let mut points = vec![0.0f64; n * d];
    for i in 1..n {
        for c in 0..d {
            let z: f64 = rng.sample(StandardNormal);
            points[i * d + c] = points[(i - 1) * d + c] + sd * z;
        }
    }
    let mut times: Vec<f64> = (0..n).map(|i| i as f64 * dt).collect();
    times[n - 1] = t;
    PathPolyline { dim: m, times, pinned: false, points }
}

/// Sample a Brownian bridge pinned at the origin at both ends, same
/// convention as [`sample_motion`]: the free path W is tilted to
/// W(s) − (s/t)·W(t), and both endpoints are exactly the origin.
pub fn sample_bridge(m: u32, t: f64, steps: u32, rng: &mut impl Rng) -> PathPolyline {
    assert!(steps >= 2, "a bridge needs at least 2 steps");
    let mut path = sample_motion(m, t, steps, rng);
    let d = m as usize;
    let n = path.times.len();
    let endpoint: Vec<f64> = path.points[(n - 1) * d..].to_vec();
    for i in 1..n - 1 {
        let frac = i as f64 / steps as f64;
        for c in 0..d {
            path.points[i * d + c] -= frac * endpoint[c];
        }
    }
    for c in 0..d {
        path.points[(n - 1) * d + c] = 0.0;
    }
    path.pinned = true;
    path
}

fn ball_radius(body: &CompactBody, m: u32) -> Result<f64> {
    match body {
        CompactBody::Ball { m: bm, r } if *bm == m => Ok(*r),
        CompactBody::Ball { m: bm, .. } => Err(Error::Domain(format!(
            "path dimension {m} does not match ball dimension {bm}"
        ))),
        CompactBody::Planar(_) => Err(Error::Unsupported(
            "planar curve domain (sausage coverage needs a ball obstacle)".into(),
        )),
    }
}

/// Point-to-segment squared distance in m dimensions.
fn segment_dist2(a: &[f64], b: &[f64], x: &[f64]) -> f64 {
    let mut ab2 = 0.0;
    let mut ax_ab = 0.0;
    for c in 0..a.len() {
        let e = b[c] - a[c];
        ab2 += e * e;
        ax_ab += (x[c] - a[c]) * e;
    }
    let s = if ab2 > 0.0 { (ax_ab / ab2).clamp(0.0, 1.0) } else { 0.0 };
    let mut d2 = 0.0;
    for c in 0..a.len() {
        let p = a[c] + s * (b[c] - a[c]);
        let e = x[c] - p;
        d2 += e * e;
    }
    d2
}

fn dist(a: &[f64], x: &[f64]) -> f64 {
    a.iter().zip(x).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt()
}

/// Precomputed per-path coverage tester: chunked bounding boxes prune the
/// segment scan. A chunk box contains its segments (segments lie in the
/// hull of their endpoints), inflated by r plus the crossing-cutoff
/// margin so that skipped chunks contribute at most e⁻⁴⁰ per segment.
struct CoverTester<'a> {
    path: &'a PathPolyline,
    r: f64,
    /// Segment duration: the variance scale of the crossing exponent.
    dvar: f64,
    margin2: f64,
    boxes: Vec<(Vec<f64>, Vec<f64>)>,
}

impl<'a> CoverTester<'a> {
    fn new(path: &'a PathPolyline, r: f64) -> Self {
        let d = path.dim as usize;
        let nseg = path.num_points() - 1;
        let dvar = path.duration() / nseg as f64;
        let margin = r + (CROSSING_EXPONENT_CUTOFF * dvar).sqrt();
        let mut boxes = Vec::with_capacity(nseg.div_ceil(CHUNK_SEGMENTS));
        let mut seg = 0;
        while seg < nseg {
            let hi_seg = (seg + CHUNK_SEGMENTS).min(nseg);
            let mut lo = vec![f64::INFINITY; d];
            let mut hi = vec![f64::NEG_INFINITY; d];
            for i in seg..=hi_seg {
                let p = path.point(i);
                for c in 0..d {
                    lo[c] = lo[c].min(p[c]);
                    hi[c] = hi[c].max(p[c]);
                }
            }
            boxes.push((lo, hi));
            seg = hi_seg;
        }
        CoverTester { path, r, dvar, margin2: margin * margin, boxes }
    }

    /// Probability that the continuous path's sausage covers x: 1 when a
    /// segment passes within r; otherwise, in corrected mode, one minus
    /// the product of per-segment survival factors.
    fn prob(&self, x: &[f64], mode: BiasMode) -> f64 {
        let d = self.path.dim as usize;
        let nseg = self.path.num_points() - 1;
        let r2 = self.r * self.r;
        let mut survival = 1.0f64;
        for (ci, (lo, hi)) in self.boxes.iter().enumerate() {
            let mut box_d2 = 0.0;
            for c in 0..d {
                let e = (lo[c] - x[c]).max(x[c] - hi[c]).max(0.0);
                box_d2 += e * e;
            }
            if box_d2 > self.margin2 {
                continue;
            }
            let seg_lo = ci * CHUNK_SEGMENTS;
            let seg_hi = (seg_lo + CHUNK_SEGMENTS).min(nseg);
            for s in seg_lo..seg_hi {
                let a = self.path.point(s);
                let b = self.path.point(s + 1);
                if segment_dist2(a, b, x) <= r2 {
                    return 1.0;
                }
                if mode == BiasMode::BridgeCorrected {
                    let da = dist(a, x) - self.r;
                    let db = dist(b, x) - self.r;
                    let exponent = da * db / self.dvar;
                    if exponent < CROSSING_EXPONENT_CUTOFF {
                        survival *= 1.0 - (-exponent).exp();
                    }
                }
            }
        }
        match mode {
            BiasMode::Polyline => 0.0,
            BiasMode::BridgeCorrected => 1.0 - survival,
        }
    }
}

/// Probability that the sausage `path ⊕ body` covers the point x.
///
/// `Polyline` returns 0 or 1 from the segment distance test;
/// `BridgeCorrected` additionally accounts for excursions between grid
/// points and is never smaller. Only ball obstacles are supported — for a
/// ball, sausage membership is a distance test.
pub fn sausage_covers(
    path: &PathPolyline,
    body: &CompactBody,
    x: &[f64],
    mode: BiasMode,
) -> Result<f64> {
    let r = ball_radius(body, path.dim)?;
    if x.len() != path.dim as usize {
        return Err(Error::Domain(format!(
            "point has {} coordinates, path lives in dimension {}",
            x.len(),
            path.dim
        )));
    }
    Ok(CoverTester::new(path, r).prob(x, mode))
}

fn stream_tag(family: McFamily) -> u64 {
    match family {
        McFamily::Z => 0x5A,
        McFamily::Q => 0x51,
    }
}

fn replica_value(family: McFamily, r: f64, p: &McParams, replica: u64) -> f64 {
    let mut rng = replica_rng(p.seed, stream_tag(family), replica);
    let d = p.m as usize;
    let paths: Vec<PathPolyline> = (0..p.k)
        .map(|_| match family {
            McFamily::Z => sample_bridge(p.m, p.t, p.steps, &mut rng),
            McFamily::Q => sample_motion(p.m, p.t, p.steps, &mut rng),
        })
        .collect();
    let r_max = paths.iter().map(PathPolyline::max_norm).fold(0.0f64, f64::max);
    let half = (r + r_max) * p.box_inflation;
    let volume = (2.0 * half).powi(p.m as i32);
    let testers: Vec<CoverTester<'_>> = paths.iter().map(|pa| CoverTester::new(pa, r)).collect();

    let total_points = p.points_per_replica as usize;
    let mut x = vec![0.0f64; d];
    let mut covered = 0.0f64;
    let test_point = |x: &[f64]| {
        let mut prod = 1.0f64;
        for tester in &testers {
            let q = tester.prob(x, p.mode);
            if q == 0.0 {
                return 0.0;
            }
            prod *= q;
        }
        prod
    };

    if p.stratified {
        // Jittered grid over g^m cells, remainder points plain uniform.
        let g = (total_points as f64).powf(1.0 / p.m as f64).floor().max(1.0) as usize;
        let cells = g.pow(p.m);
        let cell_w = 2.0 * half / g as f64;
        for cell in 0..cells {
            let mut rest = cell;
            for coord in x.iter_mut() {
                let digit = rest % g;
                rest /= g;
                *coord = -half + (digit as f64 + rng.random::<f64>()) * cell_w;
            }
            covered += test_point(&x);
        }
        for _ in cells..total_points {
            for coord in x.iter_mut() {
                *coord = rng.random_range(-half..half);
            }
            covered += test_point(&x);
        }
    } else {
        for _ in 0..total_points {
            for coord in x.iter_mut() {
                *coord = rng.random_range(-half..half);
            }
            covered += test_point(&x);
        }
    }
    volume * covered / total_points as f64
}

fn estimate_sausage(family: McFamily, body: &CompactBody, p: &McParams) -> Result<McEstimate> {
    let r = ball_radius(body, p.m)?;
    let _ = r;
    if p.k < 1 {
        return Err(Error::Domain("need k ≥ 1 paths".into()));
    }
    if !(p.t > 0.0 && p.t.is_finite()) {
        return Err(Error::Domain(format!("duration must be positive, got {}", p.t)));
    }
    let min_steps = match family {
        McFamily::Z => 2,
        McFamily::Q => 1,
    };
    if p.steps < min_steps {
        return Err(Error::Domain(format!(
            "{family} paths need at least {min_steps} steps, got {}",
            p.steps
        )));
    }
    if p.points_per_replica < 1 || p.replicas < 1 {
        return Err(Error::Domain("need at least one point and one replica".into()));
    }
    if !(p.box_inflation >= 1.0 && p.box_inflation.is_finite()) {
        return Err(Error::Domain(format!(
            "box inflation must be ≥ 1 (the minimal box), got {}",
            p.box_inflation
        )));
    }

    let work_per_replica = (p.k as u64)
        .saturating_mul(p.steps as u64)
        .saturating_mul(p.points_per_replica as u64 + p.m as u64)
        .max(1);
    let completed = match p.max_work {
        Some(cap) => (cap / work_per_replica).min(p.replicas as u64) as u32,
        None => p.replicas,
    };

    let radius = match body {
        CompactBody::Ball { r, .. } => *r,
        CompactBody::Planar(_) => unreachable!("rejected above"),
    };
    let values = exec::ordered_map(completed as usize, p.sequential, |ri| {
        replica_value(family, radius, p, ri as u64)
    });

    let n = values.len();
    let mean = if n > 0 { values.iter().sum::<f64>() / n as f64 } else { f64::NAN };
    let stderr = if n >= 2 {
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        (ss / ((n - 1) as f64 * n as f64)).sqrt()
    } else {
        0.0
    };

    if completed < p.replicas {
        return Err(Error::PartialMc {
            completed: completed as usize,
            message: if n == 0 {
                format!(
                    "work cap {} is below the {} units one replica costs",
                    p.max_work.unwrap_or(0),
                    work_per_replica
                )
            } else {
                format!(
                    "work cap stopped the run at {completed} of {} replicas; \
                     partial mean {mean:.9e}, stderr {stderr:.3e}",
                    p.replicas
                )
            },
        });
    }

    Ok(McEstimate {
        mean,
        stderr,
        replicas: completed,
        seed: p.seed,
        discretization: p.steps,
    })
}

/// Expected intersection volume of k pinned sausages (Brownian bridges),
/// the small-t side of the c-coefficient family.
pub fn estimate_z(body: &CompactBody, params: &McParams) -> Result<McEstimate> {
    estimate_sausage(McFamily::Z, body, params)
}

/// Expected intersection volume of k free-motion sausages, the quantity
/// whose unit-ball values the closed-form content oracle reproduces.
pub fn estimate_q(body: &CompactBody, params: &McParams) -> Result<McEstimate> {
    estimate_sausage(McFamily::Q, body, params)
}
