//! Acceptance suite: every criterion runs at its stated tolerance and prints
//! one pass/fail line.

use std::time::Instant;

use dressed_cavity::dynamics::{
    self, occupations, plateau_estimate, series, series_multi, survival_probability,
    uncertainty_product, uncertainty_product_expanded, CoherentAmplitude, ExtremumKind, TimeGrid,
};
use dressed_cavity::oracle::{initial_state, oracle_compare, DressedNormalMap, Evolver};
use dressed_cavity::{build_params, CavityParams, Spectrum, Truncation};

fn reference_params() -> CavityParams {
    build_params(1.0, 5.0, 0.1).unwrap()
}

fn lambda_one() -> CoherentAmplitude {
    CoherentAmplitude::new(1.0, 0.0).unwrap()
}

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

/// Criterion 1: analytic variances and uncertainty product vs the Gaussian
/// covariance oracle, 50 sample times in [0, 10], K = 64, <= 1e-8 relative,
/// under 10 s.
#[test]
fn criterion_1_oracle_equivalence() {
    let start = Instant::now();
    let params = reference_params();
    let times: Vec<f64> = (0..50).map(|i| 10.0 * i as f64 / 49.0).collect();
    let rep = oracle_compare(&params, &lambda_one(), 0.26, 64, &times, 1e-8).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let detail = format!(
        "max relative deviation {:.3e} over {} times in {elapsed:.2}s",
        rep.max_relative_deviation,
        times.len()
    );
    report(
        "1 (oracle equivalence)",
        rep.pass && elapsed < 10.0,
        &detail,
    );
    assert!(rep.pass, "{detail}");
    assert!(elapsed < 10.0, "runtime {elapsed:.2}s exceeds 10s");
}

/// Criterion 2: secular-equation eigenfrequencies vs dense diagonalization at
/// K = 2000: lowest 200 modes within 1e-6 relative, all matrix elements of
/// those modes within 1e-8 absolute after sign alignment, under 60 s.
#[test]
fn criterion_2_spectrum_crossvalidation() {
    let start = Instant::now();
    let params = reference_params();
    let k_modes = 2000;
    let exact = Spectrum::exact(&params, &Truncation::full(k_modes).unwrap()).unwrap();
    let dense = Spectrum::dense_oracle(&params, k_modes).unwrap();

    let mut freq_dev = 0.0_f64;
    for r in 0..200 {
        freq_dev = freq_dev.max((exact.omega[r] - dense.omega[r]).abs() / dense.omega[r]);
    }
    let mut element_dev = 0.0_f64;
    for r in 0..200 {
        for mu in 0..=k_modes {
            element_dev = element_dev.max((exact.element(mu, r) - dense.element(mu, r)).abs());
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let pass = freq_dev <= 1e-6 && element_dev <= 1e-8 && elapsed < 60.0;
    let detail = format!(
        "freq dev {freq_dev:.3e} (tol 1e-6), element dev {element_dev:.3e} (tol 1e-8), {elapsed:.1}s"
    );
    report("2 (spectrum cross-validation)", pass, &detail);
    assert!(freq_dev <= 1e-6, "{detail}");
    assert!(element_dev <= 1e-8, "{detail}");
    assert!(elapsed < 60.0, "runtime {elapsed:.1}s exceeds 60s");
}

/// Criterion 3: the small-cavity approximants deviate from the exact elements
/// by less than 5% relative for k <= 10 at delta = 0.01.
#[test]
fn criterion_3_small_cavity_asymptotics() {
    let params = build_params(1.0, 5.0, 0.01).unwrap();
    let truncation = Truncation::full(400).unwrap();
    let exact = Spectrum::exact(&params, &truncation).unwrap();
    let approx = Spectrum::approx(&params, &truncation).unwrap();

    let mut worst = 0.0_f64;
    let rel00 = ((approx.t0[0] / exact.t0[0]).powi(2) - 1.0).abs();
    worst = worst.max(rel00);
    for k in 1..=10 {
        worst = worst.max(((approx.t0[k] / exact.t0[k]).powi(2) - 1.0).abs());
        worst = worst.max((approx.element(k, 0) / exact.element(k, 0) - 1.0).abs());
    }
    let pass = worst < 0.05;
    let detail = format!("worst relative deviation {worst:.4} (tol 0.05)");
    report("3 (small-cavity asymptotics)", pass, &detail);
    assert!(pass, "{detail}");
}

struct Fig1 {
    betas: Vec<f64>,
    series: Vec<dynamics::ObservableSeries>,
    elapsed: f64,
}

fn fig1_run() -> Fig1 {
    let start = Instant::now();
    let params = reference_params();
    let betas = vec![0.26, 0.28, 0.51];
    let k_modes = 64;
    let spectrum = Spectrum::exact(&params, &Truncation::full(k_modes).unwrap()).unwrap();
    let thermals: Vec<_> = betas
        .iter()
        .map(|&b| occupations(&params, b, k_modes).unwrap())
        .collect();
    let grid = TimeGrid::new(0.0, 5.0, 0.005).unwrap();
    let series = series_multi(&params, &spectrum, &thermals, &lambda_one(), &grid).unwrap();
    Fig1 {
        betas,
        series,
        elapsed: start.elapsed().as_secs_f64(),
    }
}

/// Criterion 4a: the uncertainty product starts at 0.5 within 1e-6 for every
/// temperature.
#[test]
fn criterion_4a_initial_value() {
    let run = fig1_run();
    let mut worst = 0.0_f64;
    for s in &run.series {
        worst = worst.max((s.delta_product[0] - 0.5).abs());
    }
    let pass = worst < 1e-6 && run.elapsed < 30.0;
    let detail = format!(
        "max |Delta(0) - 0.5| = {worst:.3e}, run {:.2}s",
        run.elapsed
    );
    report("4a (initial uncertainty 0.5)", pass, &detail);
    assert!(pass, "{detail}");
}

/// Criterion 4b: pointwise temperature ordering, hotter curves above colder
/// ones at every sampled time.
#[test]
fn criterion_4b_temperature_ordering() {
    let run = fig1_run();
    let mut violations = 0usize;
    let n = run.series[0].times.len();
    for i in 0..n {
        let hot = run.series[0].delta_product[i]; // beta = 0.26
        let mid = run.series[1].delta_product[i]; // beta = 0.28
        let cold = run.series[2].delta_product[i]; // beta = 0.51
        if !(hot >= mid - 1e-12 && mid >= cold - 1e-12) {
            violations += 1;
        }
    }
    // strict separation away from t = 0
    let i_mid = n / 2;
    let strictly_separated = run.series[0].delta_product[i_mid]
        > run.series[1].delta_product[i_mid]
        && run.series[1].delta_product[i_mid] > run.series[2].delta_product[i_mid];
    let pass = violations == 0 && strictly_separated;
    let detail = format!("{violations} ordering violations over {n} samples");
    report("4b (temperature ordering)", pass, &detail);
    assert!(pass, "{detail}");
}

/// Criterion 4c: a local minimum at t = 2.3 +/- 0.2 and a local maximum at
/// t = 2.5 +/- 0.2.
#[test]
fn criterion_4c_extrema_locations() {
    let run = fig1_run();
    let extrema = run.series[0].delta_extrema();
    let minima: Vec<f64> = extrema
        .iter()
        .filter(|e| e.kind == ExtremumKind::Minimum)
        .map(|e| e.t)
        .collect();
    let maxima: Vec<f64> = extrema
        .iter()
        .filter(|e| e.kind == ExtremumKind::Maximum)
        .map(|e| e.t)
        .collect();
    let min_hit = minima.iter().any(|&t| (t - 2.3).abs() <= 0.2);
    let max_hit = maxima.iter().any(|&t| (t - 2.5).abs() <= 0.2);
    let detail = format!(
        "minima at {:?}, maxima at {:?}; need a minimum in 2.3±0.2 and a maximum in 2.5±0.2",
        minima
            .iter()
            .map(|t| (t * 1e3).round() / 1e3)
            .collect::<Vec<_>>(),
        maxima
            .iter()
            .map(|t| (t * 1e3).round() / 1e3)
            .collect::<Vec<_>>()
    );
    report("4c (extrema near 2.3 / 2.5)", min_hit && max_hit, &detail);
    assert!(max_hit, "no local maximum in 2.5±0.2: {detail}");
    assert!(min_hit, "no local minimum in 2.3±0.2: {detail}");
}

/// Criterion 4d: extrema locations shift less than 0.05 across the three
/// temperatures.
#[test]
fn criterion_4d_extrema_temperature_independence() {
    let run = fig1_run();
    let reference = run.series[0].delta_extrema();
    let mut worst_shift = 0.0_f64;
    for s in &run.series[1..] {
        let other = s.delta_extrema();
        for e in &reference {
            let nearest = other
                .iter()
                .filter(|o| o.kind == e.kind)
                .map(|o| (o.t - e.t).abs())
                .fold(f64::INFINITY, f64::min);
            worst_shift = worst_shift.max(nearest);
        }
    }
    let pass = worst_shift < 0.05;
    let detail = format!(
        "worst extremum shift {worst_shift:.4} across beta in {:?}",
        run.betas
    );
    report("4d (extrema temperature independence)", pass, &detail);
    assert!(pass, "{detail}");
}

/// Criterion 4e: oscillation amplitude strictly increasing with temperature.
#[test]
fn criterion_4e_amplitude_grows_with_temperature() {
    let run = fig1_run();
    let amp = |s: &dynamics::ObservableSeries| {
        let hi = s.delta_product.iter().cloned().fold(f64::MIN, f64::max);
        let lo = s.delta_product.iter().cloned().fold(f64::MAX, f64::min);
        hi - lo
    };
    let a_hot = amp(&run.series[0]);
    let a_mid = amp(&run.series[1]);
    let a_cold = amp(&run.series[2]);
    let pass = a_hot > a_mid && a_mid > a_cold;
    let detail =
        format!("amplitudes {a_hot:.4} (beta 0.26) > {a_mid:.4} (0.28) > {a_cold:.4} (0.51)");
    report("4e (amplitude grows with T)", pass, &detail);
    assert!(pass, "{detail}");
}

/// Criterion 5: deterministic invariant suite at the reference parameters
/// (the randomized sweep lives in the property tests).
#[test]
fn criterion_5_invariant_suite() {
    let params = reference_params();
    let k_modes = 64;
    let truncation = Truncation::full(k_modes).unwrap();
    let spectrum = Spectrum::exact(&params, &truncation).unwrap();
    let thermal = occupations(&params, 0.26, k_modes).unwrap();
    let mut failures: Vec<String> = Vec::new();

    // lower bound and unitarity on the full grid
    let grid = TimeGrid::new(0.0, 5.0, 0.005).unwrap();
    let run = series(&params, &spectrum, &thermal, &lambda_one(), &grid).unwrap();
    if run.delta_product.iter().any(|&d| d < 0.5 - 1e-12) {
        failures.push("uncertainty product dropped below hbar/2".into());
    }
    for &t in &[0.0, 1.0, 2.5, 5.0, 10.0] {
        let total: f64 = (0..=k_modes)
            .map(|nu| dynamics::f_element(&spectrum, 0, nu, t).norm_sqr())
            .sum();
        if (total - 1.0).abs() > 1e-6 {
            failures.push(format!("unitarity sum {total} at t = {t}"));
        }
    }

    // the two algebraic routes to the uncertainty product
    for &t in &[0.0, 0.7, 2.3, 3.9, 5.0] {
        let a = uncertainty_product(&params, &spectrum, &thermal, t).unwrap();
        let b = uncertainty_product_expanded(&params, &spectrum, &thermal, t).unwrap();
        if (a - b).abs() > 1e-10 {
            failures.push(format!(
                "uncertainty forms differ by {:.3e} at t = {t}",
                a - b
            ));
        }
    }

    // lambda independence of the uncertainty product
    let lam2 = CoherentAmplitude::new(2.0, -1.5).unwrap();
    let run2 = series(&params, &spectrum, &thermal, &lam2, &grid).unwrap();
    let lam_dev = run
        .delta_product
        .iter()
        .zip(&run2.delta_product)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if lam_dev > 1e-12 {
        failures.push(format!(
            "uncertainty product depends on lambda ({lam_dev:.3e})"
        ));
    }

    // oracle-side invariants: temperature-independent means, conserved
    // energy, Robertson bound, symplectic map
    let evolver = Evolver::new(
        DressedNormalMap::new(&params, &spectrum).unwrap(),
        &spectrum,
    );
    let th_cold = occupations(&params, 0.51, k_modes).unwrap();
    let lam = CoherentAmplitude::new(1.0, 0.3).unwrap();
    let st_hot = initial_state(&params, &spectrum, &lam, &thermal).unwrap();
    let st_cold = initial_state(&params, &spectrum, &lam, &th_cold).unwrap();
    let e0 = evolver.mean_energy(&st_hot);
    for &t in &[0.5, 2.3, 10.0, 100.0] {
        let a = evolver.evolve(&st_hot, t);
        let b = evolver.evolve(&st_cold, t);
        if (a.mean_q(0) - b.mean_q(0)).abs() > 1e-10 || (a.mean_p(0) - b.mean_p(0)).abs() > 1e-10 {
            failures.push(format!("means depend on temperature at t = {t}"));
        }
        if ((evolver.mean_energy(&a) - e0) / e0).abs() > 1e-10 {
            failures.push(format!("energy drift at t = {t}"));
        }
        if a.robertson_margin(params.hbar()) < -1e-12 {
            failures.push(format!("Robertson bound violated at t = {t}"));
        }
    }
    if evolver.map().symplectic_deviation() > 1e-10 {
        failures.push("dressed-normal map is not symplectic".into());
    }

    let pass = failures.is_empty();
    let detail = if pass {
        "lower bound, unitarity, dual uncertainty forms, lambda independence, \
         temperature-independent means, energy, Robertson, symplectic map"
            .to_string()
    } else {
        failures.join("; ")
    };
    report("5 (invariant suite)", pass, &detail);
    assert!(pass, "{detail}");
}

/// Criterion 6: free-space contrast: at delta = 20 the late-window
/// oscillation amplitude is at least 10x smaller than at delta = 0.1, and the
/// plateau mean grows with temperature. Under 120 s.
#[test]
fn criterion_6_free_space_contrast() {
    let start = Instant::now();
    let grid = TimeGrid::new(5.0, 10.0, 0.005).unwrap();
    let lambda = lambda_one();

    let params_small = reference_params();
    let k_small = 64;
    let spec_small = Spectrum::exact(&params_small, &Truncation::full(k_small).unwrap()).unwrap();
    let th_small = occupations(&params_small, 0.26, k_small).unwrap();
    let run_small = series(&params_small, &spec_small, &th_small, &lambda, &grid).unwrap();
    let amp_small = plateau_estimate(&run_small, 5.0, 10.0).unwrap().amplitude;

    let params_free = build_params(1.0, 5.0, 20.0).unwrap();
    let (tr_free, _) = dynamics::auto_truncation(&params_free, 0.26).unwrap();
    let spec_free = Spectrum::exact(&params_free, &tr_free).unwrap();
    let th_hot = occupations(&params_free, 0.26, tr_free.k_modes()).unwrap();
    let th_cold = occupations(&params_free, 0.51, tr_free.k_modes()).unwrap();
    let runs = series_multi(&params_free, &spec_free, &[th_hot, th_cold], &lambda, &grid).unwrap();
    let est_hot = plateau_estimate(&runs[0], 5.0, 10.0).unwrap();
    let est_cold = plateau_estimate(&runs[1], 5.0, 10.0).unwrap();

    let elapsed = start.elapsed().as_secs_f64();
    let contrast_ok = amp_small > 10.0 * est_hot.amplitude;
    let mean_ok = est_hot.mean > est_cold.mean;
    let pass = contrast_ok && mean_ok && elapsed < 120.0;
    let detail = format!(
        "amplitude {:.3e} (delta 0.1) vs {:.3e} (delta 20, ratio {:.0}); plateau mean {:.4} (T=3.85) > {:.4} (T=1.96); {elapsed:.1}s",
        amp_small,
        est_hot.amplitude,
        amp_small / est_hot.amplitude,
        est_hot.mean,
        est_cold.mean
    );
    report("6 (free-space contrast)", pass, &detail);
    assert!(contrast_ok, "{detail}");
    assert!(mean_ok, "{detail}");
    assert!(elapsed < 120.0, "runtime {elapsed:.1}s exceeds 120s");
}

/// Criterion 7: survival probability minimum at alpha = 0.2, delta = 0.1 over
/// t in [0, 50/g] equals 0.98 +/- 0.01.
#[test]
fn criterion_7_survival_minimum() {
    let params = CavityParams::builder_from_alpha(0.2, 5.0, 0.1)
        .build()
        .unwrap();
    let k_modes = 256;
    let spectrum = Spectrum::exact(&params, &Truncation::full(k_modes).unwrap()).unwrap();
    let t_end = 50.0 / params.g();
    let steps = 25_000;
    let mut min_p = f64::INFINITY;
    let mut t_min = 0.0;
    for i in 0..=steps {
        let t = t_end * i as f64 / steps as f64;
        let p = survival_probability(&spectrum, t);
        if p < min_p {
            min_p = p;
            t_min = t;
        }
    }
    let pass = (min_p - 0.98).abs() <= 0.01;
    let detail = format!("min P(t) = {min_p:.4} at t = {t_min:.2} (required 0.98±0.01)");
    report("7 (survival minimum)", pass, &detail);
    assert!(pass, "{detail}");
}

/// The survival floor does reach 0.98 when the coupling is electromagnetic
/// scale: alpha = 1/137 with the same geometry puts the cavity parameter at
/// delta ~ 7.7e-4, and min P(t) lands on 0.98-0.99.
#[test]
fn survival_inhibition_at_electromagnetic_coupling() {
    let alpha = 1.0 / 137.0;
    let omega_bar = 5.0;
    let delta = alpha * 0.106;
    let params = CavityParams::builder_from_alpha(alpha, omega_bar, delta)
        .build()
        .unwrap();
    let k_modes = 512;
    let spectrum = Spectrum::exact(&params, &Truncation::full(k_modes).unwrap()).unwrap();
    let t_end = 50.0 / params.g();
    let steps = 137_000;
    let mut min_p = f64::INFINITY;
    for i in 0..=steps {
        let t = t_end * i as f64 / steps as f64;
        min_p = min_p.min(survival_probability(&spectrum, t));
    }
    let pass = min_p > 0.97 && min_p < 0.995;
    let detail = format!("min P(t) = {min_p:.4} at alpha = 1/137, delta = {delta:.3e}");
    report("7+ (survival at EM-scale coupling)", pass, &detail);
    assert!(pass, "{detail}");
}
