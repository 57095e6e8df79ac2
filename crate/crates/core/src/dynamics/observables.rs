//! Time-dependent dressed observables: the propagation amplitudes
//! `f_mu_nu(t)`, coherent-state mean trajectories, position/momentum
//! variances, the uncertainty product and the survival probability.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::CavityParams;
use crate::spectrum::Spectrum;

use super::thermal::ThermalConfig;

/// Dimensionless coherent-state amplitude of the dressed particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentAmplitude(Complex64);

impl CoherentAmplitude {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::invalid("lambda", "must be finite"));
        }
        Ok(CoherentAmplitude(Complex64::new(re, im)))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }
}

/// `f_mu_nu(t) = Σ_s t_mu^s t_nu^s exp(-i Omega_s t)`, truncated to the
/// retained normal modes. `f_mu_nu(0) = δ_mu_nu` up to the truncation tail.
pub fn f_element(spectrum: &Spectrum, mu: usize, nu: usize, t: f64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    for s in 0..spectrum.normal_modes() {
        let weight = spectrum.element(mu, s) * spectrum.element(nu, s);
        sum += weight * Complex64::cis(-spectrum.omega[s] * t);
    }
    sum
}

/// Mean dressed-particle coordinate
/// `q_0'(t) = sqrt(hbar/(2 omega_bar)) (lambda f_00 + lambda* f_00*)`;
/// independent of the temperature.
pub fn mean_q0(
    params: &CavityParams,
    spectrum: &Spectrum,
    lambda: &CoherentAmplitude,
    t: f64,
) -> f64 {
    let f00 = f_element(spectrum, 0, 0, t);
    (params.hbar() / (2.0 * params.omega_bar())).sqrt() * 2.0 * (lambda.value() * f00).re
}

/// Mean dressed-particle momentum
/// `p_0'(t) = -i sqrt(hbar omega_bar / 2) (lambda f_00 - lambda* f_00*)`.
pub fn mean_p0(
    params: &CavityParams,
    spectrum: &Spectrum,
    lambda: &CoherentAmplitude,
    t: f64,
) -> f64 {
    let f00 = f_element(spectrum, 0, 0, t);
    (params.hbar() * params.omega_bar() / 2.0).sqrt() * 2.0 * (lambda.value() * f00).im
}

/// The shared thermal fluctuation sum `Σ_k |f_0k(t)|^2 n_k`.
pub fn fluctuation_sum(spectrum: &Spectrum, thermal: &ThermalConfig, t: f64) -> Result<f64> {
    check_compatible(spectrum, thermal)?;
    let mut sum = 0.0;
    for (k, &n_k) in thermal.occupations().iter().enumerate() {
        if n_k == 0.0 {
            continue;
        }
        sum += n_k * f_element(spectrum, 0, k + 1, t).norm_sqr();
    }
    Ok(sum)
}

/// Position variance `(Δq_0')^2 = hbar/(2 omega_bar) + (hbar/omega_bar) Σ_k |f_0k|^2 n_k`.
pub fn var_q0(
    params: &CavityParams,
    spectrum: &Spectrum,
    thermal: &ThermalConfig,
    t: f64,
) -> Result<f64> {
    let sum = fluctuation_sum(spectrum, thermal, t)?;
    Ok(params.hbar() / (2.0 * params.omega_bar()) + params.hbar() / params.omega_bar() * sum)
}

/// Momentum variance `(Δp_0)^2 = hbar omega_bar/2 + hbar omega_bar Σ_k |f_0k|^2 n_k`.
pub fn var_p0(
    params: &CavityParams,
    spectrum: &Spectrum,
    thermal: &ThermalConfig,
    t: f64,
) -> Result<f64> {
    let sum = fluctuation_sum(spectrum, thermal, t)?;
    Ok(params.hbar() * params.omega_bar() / 2.0 + params.hbar() * params.omega_bar() * sum)
}

/// Uncertainty product `Δq_0' Δp_0' = hbar (1/2 + Σ_k |f_0k|^2 n_k)`.
pub fn uncertainty_product(
    params: &CavityParams,
    spectrum: &Spectrum,
    thermal: &ThermalConfig,
    t: f64,
) -> Result<f64> {
    let sum = fluctuation_sum(spectrum, thermal, t)?;
    Ok(params.hbar() * (0.5 + sum))
}

/// The uncertainty product in expanded triple-sum form,
///
/// ```text
/// hbar (1/2 + Σ_k n_k [ (t_0^0 t_k^0)^2
///                     + 2 Σ_l t_0^0 t_0^l t_k^0 t_k^l cos((Omega_0 - Omega_l) t)
///                     + Σ_{l,n} t_0^l t_0^n t_k^l t_k^n cos((Omega_l - Omega_n) t) ])
/// ```
///
/// algebraically identical to [`uncertainty_product`]; kept as an independent
/// consistency check of the `|f_0k|^2` route.
pub fn uncertainty_product_expanded(
    params: &CavityParams,
    spectrum: &Spectrum,
    thermal: &ThermalConfig,
    t: f64,
) -> Result<f64> {
    check_compatible(spectrum, thermal)?;
    let s_modes = spectrum.normal_modes();
    let mut sum = 0.0;
    for (k_idx, &n_k) in thermal.occupations().iter().enumerate() {
        if n_k == 0.0 {
            continue;
        }
        let k = k_idx + 1;
        let head = spectrum.t0[0] * spectrum.element(k, 0);
        let mut term = head * head;
        for l in 1..s_modes {
            term += 2.0
                * spectrum.t0[0]
                * spectrum.t0[l]
                * spectrum.element(k, 0)
                * spectrum.element(k, l)
                * ((spectrum.omega[0] - spectrum.omega[l]) * t).cos();
        }
        for l in 1..s_modes {
            for n in 1..s_modes {
                term += spectrum.t0[l]
                    * spectrum.t0[n]
                    * spectrum.element(k, l)
                    * spectrum.element(k, n)
                    * ((spectrum.omega[l] - spectrum.omega[n]) * t).cos();
            }
        }
        sum += n_k * term;
    }
    Ok(params.hbar() * (0.5 + sum))
}

/// Survival probability `P(t) = |f_00(t)|^2` of the initially excited
/// dressed particle.
pub fn survival_probability(spectrum: &Spectrum, t: f64) -> f64 {
    f_element(spectrum, 0, 0, t).norm_sqr()
}

fn check_compatible(spectrum: &Spectrum, thermal: &ThermalConfig) -> Result<()> {
    if spectrum.k_modes() != thermal.k_modes() {
        return Err(Error::Incompatible(format!(
            "spectrum retains {} field modes but the thermal configuration has {}",
            spectrum.k_modes(),
            thermal.k_modes()
        )));
    }
    Ok(())
}
