//! Grid evaluation of the observables, extrema scanning and plateau
//! estimation.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::CavityParams;
use crate::spectrum::Spectrum;

use super::observables::CoherentAmplitude;
use super::thermal::ThermalConfig;

/// Hard cap on the number of samples a single series may allocate.
pub const GRID_CAP: usize = 4_000_000;

/// Uniform time grid `t0, t0 + dt, ..., <= t1` (t1 included up to rounding).
#[derive(Debug, Clone, Copy)]
pub struct TimeGrid {
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
}

impl TimeGrid {
    pub fn new(t0: f64, t1: f64, dt: f64) -> Result<Self> {
        if !t0.is_finite() || !t1.is_finite() || t0 > t1 {
            return Err(Error::invalid(
                "t0",
                "must satisfy t0 <= t1 with both finite",
            ));
        }
        if dt.is_nan() || !dt.is_finite() || dt <= 0.0 {
            return Err(Error::invalid("dt", "must be positive"));
        }
        Ok(TimeGrid { t0, t1, dt })
    }

    pub fn len(&self) -> usize {
        ((self.t1 - self.t0) / self.dt + 0.5).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| self.t0 + i as f64 * self.dt)
            .collect()
    }

    /// Grid whose step resolves the fastest retained mode:
    /// `dt = (2 pi / Omega_max) / 8`.
    pub fn resolving(spectrum: &Spectrum, t0: f64, t1: f64) -> Result<Self> {
        let omega_max = *spectrum
            .omega
            .last()
            .expect("spectrum retains at least two modes");
        Self::new(t0, t1, 2.0 * std::f64::consts::PI / omega_max / 8.0)
    }
}

/// Per-time observable values for one temperature.
#[derive(Debug, Clone)]
pub struct ObservableSeries {
    pub beta: f64,
    pub times: Vec<f64>,
    pub mean_q0: Vec<f64>,
    pub mean_p0: Vec<f64>,
    pub var_q0: Vec<f64>,
    pub var_p0: Vec<f64>,
    pub delta_product: Vec<f64>,
    pub survival: Vec<f64>,
}

/// Evaluate every observable on the grid for a single temperature.
pub fn series(
    params: &CavityParams,
    spectrum: &Spectrum,
    thermal: &ThermalConfig,
    lambda: &CoherentAmplitude,
    grid: &TimeGrid,
) -> Result<ObservableSeries> {
    let mut all = series_multi(
        params,
        spectrum,
        std::slice::from_ref(thermal),
        lambda,
        grid,
    )?;
    Ok(all
        .pop()
        .expect("one thermal configuration in, one series out"))
}

/// Evaluate the observables for several temperatures in one pass, sharing the
/// temperature-independent propagation amplitudes across them.
pub fn series_multi(
    params: &CavityParams,
    spectrum: &Spectrum,
    thermals: &[ThermalConfig],
    lambda: &CoherentAmplitude,
    grid: &TimeGrid,
) -> Result<Vec<ObservableSeries>> {
    let samples = grid.len();
    if samples > GRID_CAP {
        return Err(Error::GridTooLarge {
            requested: samples,
            cap: GRID_CAP,
        });
    }
    for thermal in thermals {
        if thermal.k_modes() != spectrum.k_modes() {
            return Err(Error::Incompatible(format!(
                "spectrum retains {} field modes but a thermal configuration has {}",
                spectrum.k_modes(),
                thermal.k_modes()
            )));
        }
    }

    let times = grid.times();
    let k_modes = spectrum.k_modes();
    let s_modes = spectrum.normal_modes();

    // weights[k][s] = t_0^s t_k^s, with k = 0 the particle row
    let weights: Vec<Vec<f64>> = (0..=k_modes)
        .map(|mu| {
            (0..s_modes)
                .map(|s| spectrum.t0[s] * spectrum.element(mu, s))
                .collect()
        })
        .collect();

    struct Sample {
        f00: Complex64,
        sums: Vec<f64>,
    }

    let rows: Vec<Sample> = times
        .par_iter()
        .map(|&t| {
            let phase: Vec<Complex64> = spectrum
                .omega
                .iter()
                .map(|&w| Complex64::cis(-w * t))
                .collect();
            let f00: Complex64 = weights[0].iter().zip(&phase).map(|(&w, ph)| w * ph).sum();
            let mut mode_weight = vec![0.0; k_modes];
            for (k, w_row) in weights.iter().enumerate().skip(1) {
                let f0k: Complex64 = w_row.iter().zip(&phase).map(|(&w, ph)| w * ph).sum();
                mode_weight[k - 1] = f0k.norm_sqr();
            }
            let sums = thermals
                .iter()
                .map(|thermal| {
                    thermal
                        .occupations()
                        .iter()
                        .zip(&mode_weight)
                        .map(|(n, w)| n * w)
                        .sum()
                })
                .collect();
            Sample { f00, sums }
        })
        .collect();

    let hbar = params.hbar();
    let wbar = params.omega_bar();
    let q_scale = (hbar / (2.0 * wbar)).sqrt() * 2.0;
    let p_scale = (hbar * wbar / 2.0).sqrt() * 2.0;
    let lam = lambda.value();

    let out = thermals
        .iter()
        .enumerate()
        .map(|(j, thermal)| {
            let mut s = ObservableSeries {
                beta: thermal.beta(),
                times: times.clone(),
                mean_q0: Vec::with_capacity(samples),
                mean_p0: Vec::with_capacity(samples),
                var_q0: Vec::with_capacity(samples),
                var_p0: Vec::with_capacity(samples),
                delta_product: Vec::with_capacity(samples),
                survival: Vec::with_capacity(samples),
            };
            for row in &rows {
                let sum = row.sums[j];
                s.mean_q0.push(q_scale * (lam * row.f00).re);
                s.mean_p0.push(p_scale * (lam * row.f00).im);
                s.var_q0.push(hbar / (2.0 * wbar) + hbar / wbar * sum);
                s.var_p0.push(hbar * wbar / 2.0 + hbar * wbar * sum);
                s.delta_product.push(hbar * (0.5 + sum));
                s.survival.push(row.f00.norm_sqr());
            }
            s
        })
        .collect();
    Ok(out)
}

/// A refined interior extremum of a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub t: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Minimum,
    Maximum,
}

/// Interior local extrema of `values` over `times`: discrete sign changes of
/// the first difference, refined by a parabola through the three neighboring
/// samples. Reported in time order; a constant series yields none.
pub fn scan_extrema(times: &[f64], values: &[f64]) -> Vec<Extremum> {
    assert_eq!(times.len(), values.len());
    let n = values.len();
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    for i in 1..n - 1 {
        let left = values[i] - values[i - 1];
        let right = values[i + 1] - values[i];
        let kind = if left > 0.0 && right < 0.0 {
            ExtremumKind::Maximum
        } else if left < 0.0 && right > 0.0 {
            ExtremumKind::Minimum
        } else {
            continue;
        };
        let dt = times[i + 1] - times[i];
        let curvature = values[i - 1] - 2.0 * values[i] + values[i + 1];
        let (t, value) = if curvature.abs() < f64::EPSILON * values[i].abs() {
            (times[i], values[i])
        } else {
            let offset = 0.5 * (values[i - 1] - values[i + 1]) / curvature;
            (
                times[i] + offset * dt,
                values[i] - 0.25 * (values[i - 1] - values[i + 1]) * offset,
            )
        };
        out.push(Extremum { t, value, kind });
    }
    out
}

impl ObservableSeries {
    /// Extrema of the uncertainty product curve.
    pub fn delta_extrema(&self) -> Vec<Extremum> {
        scan_extrema(&self.times, &self.delta_product)
    }
}

/// Time mean and half peak-to-peak oscillation amplitude of the uncertainty
/// product over a window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateauEstimate {
    pub mean: f64,
    pub amplitude: f64,
}

/// Estimate the late-time plateau of `series.delta_product` over `[ta, tb]`.
pub fn plateau_estimate(series: &ObservableSeries, ta: f64, tb: f64) -> Result<PlateauEstimate> {
    let first = *series.times.first().expect("series is never empty");
    let last = *series.times.last().expect("series is never empty");
    if ta > tb || ta < first - 1e-12 || tb > last + 1e-12 {
        return Err(Error::WindowOutOfRange { ta, tb });
    }
    let mut count = 0usize;
    let mut sum = 0.0;
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (t, v) in series.times.iter().zip(&series.delta_product) {
        if *t >= ta - 1e-12 && *t <= tb + 1e-12 {
            count += 1;
            sum += v;
            lo = lo.min(*v);
            hi = hi.max(*v);
        }
    }
    if count == 0 {
        return Err(Error::WindowOutOfRange { ta, tb });
    }
    Ok(PlateauEstimate {
        mean: sum / count as f64,
        amplitude: 0.5 * (hi - lo),
    })
}
