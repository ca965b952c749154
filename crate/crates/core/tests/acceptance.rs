//! Acceptance gate: the eleven go/no-go checks this laboratory must pass
//! before its numbers are trusted. One test per criterion; each prints a
//! single `criterion NN PASS` line with its measured margins (visible under
//! `--nocapture`), and a failing criterion shows up as that test's panic.
//!
//! The checks deliberately cross module boundaries: closed-form coefficient
//! families vs quadrature oracles vs Monte Carlo, with the fit layer in
//! between. Every stochastic check runs on a fixed seed, so the whole gate
//! is deterministic.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use sausage_core::coefficients::{
    a_coeff, alpha_coeff, b_coeff, b_discrepancy_factor, c_coeff, harmonic_identity_check,
    interior_a, series_power_diag, transform_1d, transform_1d_rational, BNormalization, Family,
    InteriorData, Meta, SeriesCoeffs,
};
use sausage_core::geometry::{CompactBody, GeomFunctionals, Orientation, PlanarCurveDomain};
use sausage_core::kernels::{q_k3_exact, z_k2_boundary_layer, z_k2_collar_converged};
use sausage_core::montecarlo::{
    estimate_q, estimate_z, sample_bridge, sample_motion, BiasMode, McParams,
};
use sausage_core::numerics::{adaptive_integrate, i_k_integral, j_integral};
use sausage_core::series_fit::{fit_halfpowers, order_check};

fn assert_close(got: f64, want: f64, tol: f64, what: &str) {
    assert!(
        (got - want).abs() <= tol,
        "{what}: got {got:.17e}, want {want:.17e} (|Δ| = {:.3e} > {tol:.1e})",
        (got - want).abs()
    );
}

fn assert_rel(got: f64, want: f64, tol: f64, what: &str) {
    let denom = want.abs().max(f64::MIN_POSITIVE);
    assert!(
        ((got - want) / denom).abs() <= tol,
        "{what}: got {got:.17e}, want {want:.17e} (rel = {:.3e} > {tol:.1e})",
        ((got - want) / denom).abs()
    );
}

fn assert_budget(start: Instant, budget: Duration, what: &str) {
    let used = start.elapsed();
    assert!(used <= budget, "{what} took {used:?}, budget {budget:?}");
}

fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let ratio = (hi / lo).powf(1.0 / (n - 1) as f64);
    let mut g: Vec<f64> = (0..n).map(|i| lo * ratio.powi(i as i32)).collect();
    g[n - 1] = hi; // pin the endpoint; powf drift would spoil exact range checks
    g
}

/// Deterministic 64-bit generator for the exact-arithmetic criteria, so they
/// stay reproducible without pulling a float RNG into rational code.
struct Lcg(u64);

impl Lcg {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 11
    }
    /// Uniform-ish integer in [−span, span].
    fn int(&mut self, span: i64) -> i64 {
        (self.next_u64() % (2 * span as u64 + 1)) as i64 - span
    }
}

fn big_binomial(k: u32, l: u32) -> BigInt {
    let mut b = BigInt::one();
    for i in 1..=l {
        b = b * BigInt::from(k - i + 1) / BigInt::from(i);
    }
    b
}

#[test]
fn criterion_01_harmonic_identity() {
    let start = Instant::now();
    let mut h = Ratio::<BigInt>::zero();
    let mut worst = 0.0f64;
    for k in 1..=50u32 {
        h += Ratio::new(BigInt::one(), BigInt::from(k));
        let alpha = alpha_coeff(k, 2).unwrap();
        let defect = (alpha + h.to_f64().unwrap() / 2.0).abs();
        worst = worst.max(defect);
    }
    assert!(worst < 1e-10, "harmonic identity defect {worst:.3e} ≥ 1e-10");
    assert!(harmonic_identity_check(50).unwrap());
    assert_budget(start, Duration::from_secs(1), "criterion 01");
    println!(
        "criterion 01 PASS — |alpha_(k,2) + H_k/2| ≤ {worst:.3e} for k = 1..50 ({:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_02_transform_involution() {
    let start = Instant::now();
    let mut rng = Lcg(0x5eed_c0de_0002);
    for trial in 0..1000u32 {
        let x: Vec<Ratio<BigInt>> = (0..12)
            .map(|_| {
                Ratio::new(BigInt::from(rng.int(999)), BigInt::from(rng.int(998).abs() + 1))
            })
            .collect();
        let twice = transform_1d_rational(&transform_1d_rational(&x));
        assert_eq!(twice, x, "involution broke on trial {trial}");
    }
    assert_budget(start, Duration::from_secs(1), "criterion 02");
    println!(
        "criterion 02 PASS — exact involution on 1000 random rational vectors, k ≤ 12 ({:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_03_family_transform_consistency() {
    let disk = CompactBody::ball(2, 1.0).unwrap();

    // j = 0 volume bookkeeping: the constant term of the exterior-region
    // expansion, after removing the free-space part, is −|K| at every order
    // of the intersection count, and Σ_{ℓ=1}^k (−1)^{ℓ+1} C(k,ℓ) = 1
    // exactly, so its alternating-binomial image is +|K| — the pinned
    // family's constant term. The integer identity is checked exactly.
    for k in 1..=10u32 {
        let mut acc = BigInt::zero();
        for l in 1..=k {
            let term = big_binomial(k, l);
            if l % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        assert_eq!(acc, BigInt::one(), "volume bookkeeping at k = {k}");
    }

    // j = 1: the boundary sequence of the exterior region maps onto the
    // pinned family's √t coefficients, both directions of the involution.
    let g = disk.functionals_constant_f(1.0, Orientation::Outward);
    let a1: Vec<f64> = (1..=10).map(|l| a_coeff(l, 1, &g).unwrap()).collect();
    let image = transform_1d(&a1);
    let c1: Vec<f64> =
        (1..=10).map(|k| c_coeff(k, 1, &disk, Orientation::Outward).unwrap()).collect();
    let mut worst1 = 0.0f64;
    for k in 1..=10usize {
        worst1 = worst1.max((image[k - 1] - c1[k - 1]).abs());
    }
    let back = transform_1d(&c1);
    for k in 1..=10usize {
        worst1 = worst1.max((back[k - 1] - a1[k - 1]).abs());
    }
    assert!(worst1 < 1e-10, "j=1 mismatch {worst1:.3e} ≥ 1e-10");

    // j = 2: the exterior region's own boundary functionals are fixed by
    // its geometry — the paths live outside the body, so the region's
    // inward curvature is the negative of the body's stored one. The free
    // sign is which orientation the pinned family reads ∫ L_aa with; only
    // one hypothesis survives.
    let g_ext = GeomFunctionals {
        vol_f: 0.0,
        vol_ftau: 0.0,
        bdy_f: 0.0,
        bdy_f1: 0.0,
        bdy_fl: disk.total_curvature(Orientation::Outward),
    };
    let a2: Vec<f64> = (1..=8).map(|l| a_coeff(l, 2, &g_ext).unwrap()).collect();
    let image2 = transform_1d(&a2);
    let mismatch = |orientation: Orientation| -> f64 {
        let mut worst = 0.0f64;
        for k in 1..=8usize {
            let c = c_coeff(k as u32, 2, &disk, orientation).unwrap();
            worst = worst.max((image2[k - 1] - c).abs());
        }
        worst
    };
    let m_out = mismatch(Orientation::Outward);
    let m_in = mismatch(Orientation::Inward);
    assert!(m_out < 1e-9, "outward hypothesis mismatch {m_out:.3e} ≥ 1e-9");
    assert!(m_in > 1e-1, "inward hypothesis unexpectedly close: {m_in:.3e}");
    println!(
        "criterion 03 PASS — j=0 exact, j=1 mismatch {worst1:.2e}, j=2 outward {m_out:.2e} vs inward {m_in:.2e} (recorded orientation: outward, matching the boundary-layer fits of criterion 06)"
    );
}

#[test]
fn criterion_04_closed_form_integral() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for &a in &[0.5f64, 1.0, 2.0, 3.0, 4.5, 7.0, 10.0] {
        let closed = j_integral(a).unwrap();
        // Truncating at 1e6 leaves less than ∫ η^{−4} = 1/(3·10^18).
        let quad = adaptive_integrate(|eta| (eta * eta + a).powi(-2), 1.0, 1e6, 1e-13).unwrap();
        let defect = (closed - quad.value).abs();
        worst = worst.max(defect);
        assert!(defect < 1e-10, "j_integral({a}) off by {defect:.3e}");
    }
    let ik = i_k_integral(2, 1.5).unwrap();
    assert_close(ik.value, 2.0 - 2.0f64.sqrt(), 1e-8, "corner integral (2, 3/2)");
    assert_budget(start, Duration::from_secs(5), "criterion 04");
    println!(
        "criterion 04 PASS — closed form vs quadrature ≤ {worst:.3e} at 7 points; I_2(3/2) − (2−√2) = {:+.3e} ({:?})",
        ik.value - (2.0 - 2.0f64.sqrt()),
        start.elapsed()
    );
}

#[test]
fn criterion_05_exterior_ball_coefficients() {
    let start = Instant::now();
    let ball = CompactBody::ball(3, 1.0).unwrap();
    let grid = geometric_grid(1e-5, 1e-3, 12);
    let mut fitted: Vec<(f64, f64, f64)> = Vec::new();
    for k in 1..=3u32 {
        let samples: Vec<(f64, f64, f64)> = grid
            .iter()
            .map(|&t| (t, q_k3_exact(k, t, 1e-12).unwrap().value, 0.0))
            .collect();
        let fit = fit_halfpowers(&samples, 4).unwrap();
        fitted.push((fit.coefficients[0].1, fit.coefficients[1].1, fit.coefficients[2].1));
    }

    let (b10, b11, _) = fitted[0];
    assert_close(b10, 4.0 * PI / 3.0, 1e-6, "constant term, k=1");
    assert_rel(b11, 8.0 * PI.sqrt(), 1e-3, "√t term, k=1");
    let (_, b21, b22) = fitted[1];
    assert!(
        b22.abs() < 1e-4 * b21,
        "t coefficient should vanish at k=2: {b22:.3e} vs √t coefficient {b21:.6}"
    );

    // The fit arbitrates between the two published constant conventions:
    // per-proof matches, as-printed is off by exactly the unit-sphere
    // surface measure. That factor is the required discrepancy report.
    let factor = b_discrepancy_factor();
    println!(
        "discrepancy report: as_printed / per_proof = {factor:.12} = 4π (unit-sphere surface measure)"
    );
    for (idx, k) in (1..=3u32).enumerate() {
        let (_, f1, f2) = fitted[idx];
        for (j, fit_val) in [(1u32, f1), (2, f2)] {
            let proof = b_coeff(k, j, &ball, BNormalization::PerProof).unwrap();
            let printed = b_coeff(k, j, &ball, BNormalization::AsPrinted).unwrap();
            println!(
                "  k={k} j={j}: fitted {fit_val:+.9}, per_proof {proof:+.9}, as_printed {printed:+.9}"
            );
            if proof == 0.0 {
                continue; // the k=2 vanishing row is checked absolutely above
            }
            assert_rel(fit_val, proof, 1e-3, &format!("per-proof b({k},{j})"));
            assert!(
                ((fit_val - printed) / printed).abs() > 1e-1,
                "fit should not match the as-printed convention at k={k}, j={j}"
            );
        }
    }
    assert_budget(start, Duration::from_secs(30), "criterion 05");
    println!(
        "criterion 05 PASS — fitted exterior-ball coefficients match per_proof to 1e-3 and reject as_printed ({:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_06_planar_boundary_layer() {
    let start = Instant::now();
    let d = PlanarCurveDomain::circle(1.0).unwrap();
    let body = CompactBody::ball(2, 1.0).unwrap();
    let grid = geometric_grid(2.5e-5, 4e-4, 12);
    let mut slopes = Vec::new();
    let mut cut_slopes = Vec::new();
    let mut ratios = Vec::new();
    for k in 1..=3u32 {
        // The collar functional with the depth taken far enough that the
        // discarded tail sits below quadrature tolerance.
        let samples: Vec<(f64, f64, f64)> = grid
            .iter()
            .map(|&t| (t, z_k2_collar_converged(&d, k, t).unwrap(), 0.0))
            .collect();
        let fit = fit_halfpowers(&samples, 3).unwrap();
        let (c0, c1, c2) =
            (fit.coefficients[0].1, fit.coefficients[1].1, fit.coefficients[2].1);
        assert_close(c0, PI, 1e-8, &format!("area term, k={k}"));
        assert_rel(
            c1,
            0.5 * (PI / k as f64).sqrt() * 2.0 * PI,
            1e-4,
            &format!("√t term, k={k}"),
        );
        let out = c_coeff(k, 2, &body, Orientation::Outward).unwrap();
        assert_rel(c2, out, 1e-3, &format!("t term under the recorded orientation, k={k}"));

        // Remainder order against the closed-form three-term model.
        let model = SeriesCoeffs::new(
            Family::C,
            k,
            Some(2),
            vec![(0, PI), (1, 0.5 * (PI / k as f64).sqrt() * 2.0 * PI), (2, out)],
            Meta::Formula,
        )
        .unwrap();
        let pairs: Vec<(f64, f64)> = samples.iter().map(|&(t, v, _)| (t, v)).collect();
        let slope = order_check(&pairs, &model, 1.5).unwrap();
        assert!(slope >= 1.4, "remainder slope {slope:.3} < 1.4 at k={k}");
        slopes.push(slope);

        // The t^ε-cut literal loses real mass at these t — its remainder
        // slope shows the cost — but its t coefficient still lands on the
        // outward branch and nowhere near the inward one.
        let lit: Vec<(f64, f64, f64)> = grid
            .iter()
            .map(|&t| (t, z_k2_boundary_layer(&d, k, t, 0.401).unwrap(), 0.0))
            .collect();
        let lfit = fit_halfpowers(&lit, 3).unwrap();
        let c2_lit = lfit.coefficients[2].1;
        let inw = c_coeff(k, 2, &body, Orientation::Inward).unwrap();
        let ratio = (c2_lit - inw).abs() / (c2_lit - out).abs();
        assert!(
            ratio > 5.0,
            "cut-literal orientation call ambiguous at k={k}: c2 {c2_lit:.4}, ratio {ratio:.2}"
        );
        ratios.push(ratio);
        let lpairs: Vec<(f64, f64)> =
            grid.iter().map(|&t| (t, z_k2_boundary_layer(&d, k, t, 0.45).unwrap())).collect();
        cut_slopes.push(order_check(&lpairs, &model, 1.5).unwrap());
    }
    println!(
        "  cut cost: remainder slopes {:.2}/{:.2}/{:.2} for the ε=0.45 literal vs {:.3}/{:.3}/{:.3} converged",
        cut_slopes[0], cut_slopes[1], cut_slopes[2], slopes[0], slopes[1], slopes[2]
    );
    assert_budget(start, Duration::from_secs(120), "criterion 06");
    println!(
        "criterion 06 PASS — collar fits reproduce the closed forms; orientation recorded outward (in/out distance ratios {:.0}/{:.0}/{:.0}) ({:?})",
        ratios[0], ratios[1], ratios[2],
        start.elapsed()
    );
}

#[test]
fn criterion_07_pair_identity() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for &t in &[0.005f64, 0.01, 0.02, 0.04] {
        let lhs = q_k3_exact(2, t, 1e-11).unwrap().value;
        let rhs = 2.0 * q_k3_exact(1, t, 1e-11).unwrap().value
            - q_k3_exact(1, 2.0 * t, 1e-11).unwrap().value;
        worst = worst.max((lhs - rhs).abs());
        assert!((lhs - rhs).abs() < 1e-8, "pair identity broke at t={t}");
    }

    let ball = CompactBody::ball(3, 1.0).unwrap();
    let mut p = McParams::new(2, 3, 0.02);
    p.steps = 512;
    p.points_per_replica = 256;
    p.replicas = 512;
    p.seed = 88;
    p.mode = BiasMode::BridgeCorrected;
    let est = estimate_q(&ball, &p).unwrap();
    let identity = 2.0 * q_k3_exact(1, 0.02, 1e-11).unwrap().value
        - q_k3_exact(1, 0.04, 1e-11).unwrap().value;
    let sigmas = (est.mean - identity) / est.stderr;
    assert!(
        sigmas.abs() <= 3.0,
        "stochastic pair identity off by {sigmas:.2} standard errors"
    );
    assert_budget(start, Duration::from_secs(300), "criterion 07");
    println!(
        "criterion 07 PASS — deterministic identity ≤ {worst:.3e}; stochastic check {sigmas:+.2}σ at t=0.02, 512 replicas ({:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_08_mc_vs_oracle() {
    let start = Instant::now();
    let ball = CompactBody::ball(3, 1.0).unwrap();
    let mut p = McParams::new(1, 3, 0.01);
    p.steps = 512;
    p.points_per_replica = 256;
    p.replicas = 512;
    p.seed = 88;
    p.mode = BiasMode::BridgeCorrected;
    let est = estimate_q(&ball, &p).unwrap();
    let oracle = q_k3_exact(1, 0.01, 1e-11).unwrap().value;
    let sigmas = (est.mean - oracle) / est.stderr;
    let precision = est.stderr / est.mean;
    assert!(sigmas.abs() <= 3.0, "estimate off the oracle by {sigmas:.2} standard errors");
    assert!(precision < 0.01, "stderr/mean = {precision:.4} ≥ 1%");
    assert_budget(start, Duration::from_secs(300), "criterion 08");
    println!(
        "criterion 08 PASS — {:.6} ± {:.6} vs oracle {oracle:.6} ({sigmas:+.2}σ, stderr/mean {precision:.4}) ({:?})",
        est.mean, est.stderr,
        start.elapsed()
    );
}

#[test]
fn criterion_09_pinned_leading_orders() {
    let start = Instant::now();
    let disk = CompactBody::ball(2, 1.0).unwrap();
    let mut report = Vec::new();
    for &k in &[1u32, 2] {
        for &t in &[0.005f64, 0.01] {
            let mut p = McParams::new(k, 2, t);
            p.steps = 512;
            p.points_per_replica = 1024;
            p.replicas = 4096;
            p.seed = 777;
            p.mode = BiasMode::BridgeCorrected;
            let est = estimate_z(&disk, &p).unwrap();
            let c1 = c_coeff(k, 1, &disk, Orientation::Outward).unwrap();
            let c2 = c_coeff(k, 2, &disk, Orientation::Outward).unwrap();
            let scaled = (est.mean - PI) / t.sqrt();
            let predicted = c1 + c2 * t.sqrt();
            let sigmas = (scaled - predicted) / (est.stderr / t.sqrt());
            assert!(
                sigmas.abs() <= 3.0,
                "two-term prediction missed at k={k}, t={t}: {sigmas:+.2}σ"
            );
            report.push(format!("k={k} t={t}: {sigmas:+.2}σ"));
        }
    }
    assert_budget(start, Duration::from_secs(300), "criterion 09");
    println!(
        "criterion 09 PASS — (mean − π)/√t within 3σ of the two-term prediction [{}] ({:?})",
        report.join(", "),
        start.elapsed()
    );
}

#[test]
fn criterion_10_path_statistics() {
    let start = Instant::now();
    let n = 100_000usize;

    // Bridge midpoint: per-coordinate variance 2·s(t−s)/t = t/2 at s = t/2.
    let t = 0.4f64;
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let mut sum = 0.0f64;
    let mut sum2 = 0.0f64;
    for _ in 0..n {
        let path = sample_bridge(2, t, 8, &mut rng);
        for &x in path.point(4) {
            sum += x;
            sum2 += x * x;
        }
    }
    let samples = (2 * n) as f64;
    let var = sum2 / samples - (sum / samples).powi(2);
    let var_sigma = (t / 2.0) * (2.0 / (samples - 1.0)).sqrt();
    assert_close(var, t / 2.0, 3.0 * var_sigma, "bridge midpoint variance");

    // Free endpoint: E|B(t)|² = 2mt, per-sample variance 8mt².
    let (m, tf) = (3u32, 0.7f64);
    let mut norm2_sum = 0.0f64;
    for _ in 0..n {
        let path = sample_motion(m, tf, 16, &mut rng);
        norm2_sum += path.point(16).iter().map(|x| x * x).sum::<f64>();
    }
    let mean_norm2 = norm2_sum / n as f64;
    let sigma = (8.0 * m as f64 * tf * tf / n as f64).sqrt();
    assert_close(mean_norm2, 2.0 * m as f64 * tf, 3.0 * sigma, "free squared displacement");
    assert_budget(start, Duration::from_secs(60), "criterion 10");
    println!(
        "criterion 10 PASS — midpoint variance {var:.5} vs {:.5}, E|B(t)|² {mean_norm2:.4} vs {:.4} at 10^5 samples ({:?})",
        t / 2.0,
        2.0 * m as f64 * tf,
        start.elapsed()
    );
}

#[test]
fn criterion_11_interior_power_algebra() {
    // Dyadic random inputs make f64 arithmetic exact, and a big-rational
    // mirror of the power expansion confirms every coefficient bit for bit.
    let mut rng = Lcg(0x5eed_c0de_000b);
    for trial in 0..64u32 {
        let p = rng.int(100);
        let q = rng.int(100);
        let r = rng.int(100);
        let tau = 6.0 * p as f64 / 64.0;
        let e = q as f64 / 64.0;
        let a14 = r as f64 / 64.0;
        let e2 = (p + q) as f64 / 64.0; // = (τ + 6E)/6 exactly
        let d = InteriorData {
            vol_f: 1.0,
            tau_f: tau,
            e_f: e,
            tau2_f: tau * tau,
            tau_e_f: tau * e,
            e2_f: e * e,
            a14,
        };

        let e2r = Ratio::new(BigInt::from(p + q), BigInt::from(64));
        let a14r = Ratio::new(BigInt::from(r), BigInt::from(64));
        let base_one = series_power_diag(&[(0, 1.0), (2, e2), (4, a14)], 1, 4).unwrap();
        for k in 1..=6u32 {
            let kf = k as f64;
            let series = series_power_diag(&[(0, 1.0), (2, e2), (4, a14)], k, 4).unwrap();
            assert_eq!(series[0], (0, 1.0));

            // Linear law at order t: exactly k times the k = 1 coefficient.
            assert_eq!(series[1].1, kf * base_one[1].1, "trial {trial}, k={k}");
            assert_eq!(series[1].1, interior_a(k, 2, &d).unwrap().value);

            // Order t²: single-power part plus the pair cross-term.
            assert_eq!(
                series[2].1,
                kf * a14 + kf * (kf - 1.0) / 2.0 * e2 * e2,
                "cross-term, trial {trial}, k={k}"
            );
            assert_eq!(series[2].1, interior_a(k, 4, &d).unwrap().value);

            // Big-rational mirror: expand (1 + e2·x + a14·x²)^k exactly and
            // compare bit for bit, including the k(k−1)/72 form of the
            // cross-term.
            let mut coeffs = [Ratio::<BigInt>::one(), Ratio::zero(), Ratio::zero()];
            for _ in 0..k {
                let c0 = coeffs[0].clone();
                let c1 = coeffs[1].clone();
                let c2 = coeffs[2].clone();
                coeffs[1] = c1.clone() + c0.clone() * e2r.clone();
                coeffs[2] = c2 + c1 * e2r.clone() + c0 * a14r.clone();
            }
            assert_eq!(Ratio::from_float(series[1].1).unwrap(), coeffs[1]);
            assert_eq!(Ratio::from_float(series[2].1).unwrap(), coeffs[2]);
            let six_e2 = Ratio::new(BigInt::from(6 * (p + q)), BigInt::from(64));
            let cross = Ratio::new(BigInt::from(k * (k - 1)), BigInt::from(72))
                * six_e2.clone()
                * six_e2;
            assert_eq!(
                coeffs[2].clone() - Ratio::from_integer(BigInt::from(k)) * a14r.clone(),
                cross,
                "k(k−1)/72 cross-term, trial {trial}, k={k}"
            );
        }
    }
    println!(
        "criterion 11 PASS — power algebra exact over 64 random dyadic inputs, k ≤ 6 (f64 and big-rational paths agree bit for bit)"
    );
}
