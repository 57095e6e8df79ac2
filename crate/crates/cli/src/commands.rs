//! Subcommand implementations: spectrum export, time evolution, parameter
//! sweeps and the oracle check.

use std::path::Path;

use anyhow::{bail, Result};
use dressed_cavity::checks::run_default_checks;
use dressed_cavity::dynamics::{
    auto_truncation, occupations, plateau_estimate, series_multi, Extremum, ExtremumKind,
    ObservableSeries, ThermalConfig, TimeGrid,
};
use dressed_cavity::{CavityParams, Spectrum, Truncation};

use crate::config::RunConfig;
use crate::output::{format_sig, OutputDir, RunManifest, TruncationInfo};

/// Resolve the truncation: explicit `--modes`, otherwise adaptive over all
/// requested temperatures. Returns the truncation and the worst tail bound.
fn resolve_truncation(config: &RunConfig, params: &CavityParams) -> Result<(Truncation, f64)> {
    if let Some(k) = config.modes {
        let worst = config
            .betas
            .iter()
            .map(|&b| dressed_cavity::dynamics::thermal_tail_bound(params, b, k))
            .fold(0.0, f64::max);
        return Ok((Truncation::full(k)?, worst));
    }
    let mut k_modes = 64;
    let mut worst = 0.0_f64;
    for &beta in &config.betas {
        let (tr, bound) = auto_truncation(params, beta)?;
        k_modes = k_modes.max(tr.k_modes());
        worst = worst.max(bound);
    }
    Ok((Truncation::full(k_modes)?, worst))
}

fn thermals(params: &CavityParams, betas: &[f64], k_modes: usize) -> Result<Vec<ThermalConfig>> {
    betas
        .iter()
        .map(|&b| Ok(occupations(params, b, k_modes)?))
        .collect()
}

/// Warn (or fail, under `--strict`) when the grid undersamples the fastest
/// mode carrying non-negligible thermal weight.
fn check_grid_resolution(
    config: &RunConfig,
    spectrum: &Spectrum,
    thermal_list: &[ThermalConfig],
) -> Result<()> {
    let mut k_cut = 1usize;
    for thermal in thermal_list {
        let n = thermal.occupations();
        let floor = n[0] * 1e-12;
        let cut = n.iter().rposition(|&nk| nk > floor).map_or(1, |i| i + 1);
        k_cut = k_cut.max(cut);
    }
    let omega_eff = spectrum.omega[k_cut.min(spectrum.normal_modes() - 1)];
    let dt_resolved = std::f64::consts::PI / omega_eff;
    if config.dt > dt_resolved {
        let msg = format!(
            "dt = {} undersamples the fastest thermally occupied mode (dt <= {:.3e} recommended)",
            config.dt, dt_resolved
        );
        if config.strict {
            bail!("{msg}");
        }
        eprintln!("warning: {msg}");
    }
    Ok(())
}

/// `spectrum`: write `spectrum.csv` with one row per normal mode.
pub fn cmd_spectrum(config: &RunConfig, out: &Path) -> Result<RunManifest> {
    let params = config.build_params(config.deltas[0])?;
    let k_modes = config.modes.unwrap_or(64);
    let truncation = Truncation::full(k_modes)?;
    let spectrum = Spectrum::exact(&params, &truncation)?;

    let mut dir = OutputDir::create(out)?;
    let mut buf = Vec::new();
    use std::io::Write;
    writeln!(buf, "r,Omega_r,t_0_r,branch")?;
    for r in 0..spectrum.normal_modes() {
        writeln!(
            buf,
            "{},{},{},{}",
            r,
            format_sig(spectrum.omega[r]),
            format_sig(spectrum.t0[r]),
            r
        )?;
    }
    dir.write("spectrum.csv", &buf)?;

    let info = TruncationInfo {
        k_modes,
        normal_modes: spectrum.normal_modes(),
    };
    dir.finish("spectrum", config, Some(info), None)
}

/// `evolve`: series, companion observables and extrema, one column set per
/// temperature.
pub fn cmd_evolve(config: &RunConfig, out: &Path) -> Result<RunManifest> {
    let params = config.build_params(config.deltas[0])?;
    let (truncation, tail_bound) = resolve_truncation(config, &params)?;
    let spectrum = Spectrum::exact(&params, &truncation)?;
    let thermal_list = thermals(&params, &config.betas, truncation.k_modes())?;
    check_grid_resolution(config, &spectrum, &thermal_list)?;
    let grid = TimeGrid::new(config.t0, config.t1, config.dt)?;
    let lambda = config.lambda()?;
    let all = series_multi(&params, &spectrum, &thermal_list, &lambda, &grid)?;

    let mut dir = OutputDir::create(out)?;
    write_series_files(&mut dir, config, &all)?;

    // extrema of the uncertainty product, per temperature
    let mut rows = Vec::new();
    for (series, &beta) in all.iter().zip(&config.betas) {
        for e in series.delta_extrema() {
            rows.push(vec![
                beta,
                if e.kind == ExtremumKind::Minimum {
                    0.0
                } else {
                    1.0
                },
                e.t,
                e.value,
            ]);
        }
    }
    dir.write_csv(
        "extrema.csv",
        &[
            "beta".to_string(),
            "is_maximum".to_string(),
            "t".to_string(),
            "value".to_string(),
        ],
        &rows,
    )?;

    let info = TruncationInfo {
        k_modes: truncation.k_modes(),
        normal_modes: truncation.normal_modes(),
    };
    dir.finish("evolve", config, Some(info), Some(tail_bound))
}

fn beta_label(beta: f64) -> String {
    format!("{beta}").replace('-', "m")
}

fn write_series_files(
    dir: &mut OutputDir,
    config: &RunConfig,
    all: &[ObservableSeries],
) -> Result<()> {
    let times = &all[0].times;
    let n = times.len();

    // series.csv: t plus one uncertainty-product column per temperature
    let mut header = vec!["t".to_string()];
    for &beta in &config.betas {
        header.push(format!("delta_product_beta_{}", beta_label(beta)));
    }
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = vec![times[i]];
            row.extend(all.iter().map(|s| s.delta_product[i]));
            row
        })
        .collect();
    dir.write_csv("series.csv", &header, &rows)?;

    // means.csv: temperature independent
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| vec![times[i], all[0].mean_q0[i], all[0].mean_p0[i]])
        .collect();
    dir.write_csv(
        "means.csv",
        &[
            "t".to_string(),
            "mean_q0".to_string(),
            "mean_p0".to_string(),
        ],
        &rows,
    )?;

    // variances.csv: var_q0 and var_p0 per temperature
    let mut header = vec!["t".to_string()];
    for &beta in &config.betas {
        header.push(format!("var_q0_beta_{}", beta_label(beta)));
        header.push(format!("var_p0_beta_{}", beta_label(beta)));
    }
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = vec![times[i]];
            for s in all {
                row.push(s.var_q0[i]);
                row.push(s.var_p0[i]);
            }
            row
        })
        .collect();
    dir.write_csv("variances.csv", &header, &rows)?;

    // survival.csv: temperature independent
    let rows: Vec<Vec<f64>> = (0..n).map(|i| vec![times[i], all[0].survival[i]]).collect();
    dir.write_csv(
        "survival.csv",
        &["t".to_string(), "survival".to_string()],
        &rows,
    )?;
    Ok(())
}

fn nearest_extremum(extrema: &[Extremum], kind: ExtremumKind, near: f64) -> Option<Extremum> {
    extrema
        .iter()
        .filter(|e| e.kind == kind)
        .min_by(|a, b| (a.t - near).abs().total_cmp(&(b.t - near).abs()))
        .copied()
}

/// `sweep`: one row per `(delta, beta)` with the plateau estimate over the
/// second half of the window and the tracked neighboring extrema.
pub fn cmd_sweep(config: &RunConfig, out: &Path) -> Result<RunManifest> {
    let grid = TimeGrid::new(config.t0, config.t1, config.dt)?;
    let lambda = config.lambda()?;
    let window_start = config.t0 + 0.5 * (config.t1 - config.t0);

    let mut rows = Vec::new();
    let mut worst_bound = 0.0_f64;
    let mut largest = TruncationInfo {
        k_modes: 0,
        normal_modes: 0,
    };
    for &delta in &config.deltas {
        let params = config.build_params(delta)?;
        let (truncation, bound) = resolve_truncation(config, &params)?;
        worst_bound = worst_bound.max(bound);
        if truncation.k_modes() > largest.k_modes {
            largest = TruncationInfo {
                k_modes: truncation.k_modes(),
                normal_modes: truncation.normal_modes(),
            };
        }
        let spectrum = Spectrum::exact(&params, &truncation)?;
        let thermal_list = thermals(&params, &config.betas, truncation.k_modes())?;
        check_grid_resolution(config, &spectrum, &thermal_list)?;
        let all = series_multi(&params, &spectrum, &thermal_list, &lambda, &grid)?;
        for (series, &beta) in all.iter().zip(&config.betas) {
            let plateau = plateau_estimate(series, window_start, config.t1)?;
            let extrema = series.delta_extrema();
            let tracked_min = nearest_extremum(&extrema, ExtremumKind::Minimum, config.track_min_t);
            let tracked_max = nearest_extremum(&extrema, ExtremumKind::Maximum, config.track_max_t);
            rows.push(vec![
                delta,
                beta,
                truncation.k_modes() as f64,
                plateau.mean,
                plateau.amplitude,
                tracked_min.map_or(f64::NAN, |e| e.t),
                tracked_min.map_or(f64::NAN, |e| e.value),
                tracked_max.map_or(f64::NAN, |e| e.t),
                tracked_max.map_or(f64::NAN, |e| e.value),
            ]);
        }
    }

    let mut dir = OutputDir::create(out)?;
    dir.write_csv(
        "sweep.csv",
        &[
            "delta".to_string(),
            "beta".to_string(),
            "k_modes".to_string(),
            "plateau_mean".to_string(),
            "plateau_amplitude".to_string(),
            "tracked_min_t".to_string(),
            "tracked_min_value".to_string(),
            "tracked_max_t".to_string(),
            "tracked_max_value".to_string(),
        ],
        &rows,
    )?;
    dir.finish("sweep", config, Some(largest), Some(worst_bound))
}

/// `oracle-check`: run the named consistency checks; exit status 0 only if
/// all pass.
pub fn cmd_oracle_check(config: &RunConfig, out: &Path) -> Result<(RunManifest, bool)> {
    let params = config.build_params(config.deltas[0])?;
    let k_modes = config.modes.unwrap_or(64);
    let beta = config.betas[0];
    let lambda = config.lambda()?;
    let report = run_default_checks(&params, k_modes, beta, &lambda)?;

    for check in &report.checks {
        println!(
            "{}: {} (max deviation {:.3e}, threshold {:.1e})",
            check.name,
            if check.pass { "pass" } else { "FAIL" },
            check.max_deviation,
            check.threshold
        );
    }
    if !report.pass {
        eprintln!("failing checks: {}", report.failing());
    }

    let mut dir = OutputDir::create(out)?;
    dir.write(
        "report.json",
        serde_json::to_string_pretty(&report)?.as_bytes(),
    )?;
    let info = TruncationInfo {
        k_modes,
        normal_modes: k_modes + 1,
    };
    let manifest = dir.finish("oracle-check", config, Some(info), None)?;
    Ok((manifest, report.pass))
}
