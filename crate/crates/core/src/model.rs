//! Physical parameters, unit conventions and derived constants shared by the
//! spectrum, dynamics and oracle modules.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Normalization convention for the mode couplings `c_k = eta * omega_k`.
///
/// The two conventions differ by a constant factor `2/pi` in `eta^2`. Only
/// [`EtaConvention::TwoGDeltaOmega`] reproduces the small-cavity element
/// asymptotics `(t_0^k)^2 -> 2*delta/k^2`; it is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaConvention {
    /// `eta^2 = 2 g Δω` (default).
    TwoGDeltaOmega,
    /// `eta^2 = 4 g Δω / pi`, i.e. `eta = 2 sqrt(g Δω / pi)`.
    FourGDeltaOmegaOverPi,
}

/// Validated physical configuration of the cavity-oscillator system.
///
/// Holds the coupling strength `g`, the renormalized oscillator frequency
/// `omega_bar`, the dimensionless cavity size `delta = g R / (pi c)` and the
/// unit constants, plus derived quantities computed once at construction:
/// the light-crossing time `R/c`, the field-mode spacing `Δω = pi c / R =
/// g / delta` and the coupling normalization `eta^2`.
#[derive(Debug, Clone, Copy)]
pub struct CavityParams {
    g: f64,
    omega_bar: f64,
    delta: f64,
    c: f64,
    hbar: f64,
    k_b: f64,
    alpha: Option<f64>,
    eta_convention: EtaConvention,
    r_over_c: f64,
    delta_omega: f64,
    eta_sq: f64,
}

/// Builder for [`CavityParams`]; validates on [`ParamsBuilder::build`].
#[derive(Debug, Clone)]
pub struct ParamsBuilder {
    g: f64,
    omega_bar: f64,
    delta: f64,
    c: f64,
    hbar: f64,
    k_b: f64,
    alpha: Option<f64>,
    eta_convention: EtaConvention,
}

impl CavityParams {
    /// Start building from the coupling strength `g`.
    pub fn builder(g: f64, omega_bar: f64, delta: f64) -> ParamsBuilder {
        ParamsBuilder {
            g,
            omega_bar,
            delta,
            c: 1.0,
            hbar: 1.0,
            k_b: 1.0,
            alpha: None,
            eta_convention: EtaConvention::TwoGDeltaOmega,
        }
    }

    /// Start building from the coupling ratio `alpha`, with `g = alpha * omega_bar`.
    pub fn builder_from_alpha(alpha: f64, omega_bar: f64, delta: f64) -> ParamsBuilder {
        let mut b = Self::builder(alpha * omega_bar, omega_bar, delta);
        b.alpha = Some(alpha);
        b
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn omega_bar(&self) -> f64 {
        self.omega_bar
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn k_b(&self) -> f64 {
        self.k_b
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn eta_convention(&self) -> EtaConvention {
        self.eta_convention
    }

    /// Light-crossing time `R/c = pi * delta / g`.
    pub fn r_over_c(&self) -> f64 {
        self.r_over_c
    }

    /// Field-mode spacing `Δω = pi c / R = g / delta`.
    pub fn delta_omega(&self) -> f64 {
        self.delta_omega
    }

    /// Coupling normalization `eta^2`.
    pub fn eta_sq(&self) -> f64 {
        self.eta_sq
    }

    /// `omega_bar / Δω`, the renormalized frequency in units of the spacing.
    pub(crate) fn omega_bar_reduced(&self) -> f64 {
        self.omega_bar / self.delta_omega
    }

    /// Field-mode frequencies `omega_k = k Δω`, `k = 1..=k_modes`.
    pub fn mode_frequencies(&self, k_modes: usize) -> Vec<f64> {
        (1..=k_modes).map(|k| k as f64 * self.delta_omega).collect()
    }

    /// Mode couplings `c_k = eta * omega_k` for the ohmic environment.
    pub fn coupling_constants(&self, k_modes: usize) -> Vec<f64> {
        let eta = self.eta_sq.sqrt();
        (1..=k_modes)
            .map(|k| eta * k as f64 * self.delta_omega)
            .collect()
    }

    /// Truncated frequency counterterm `Σ_k c_k^2 / omega_k^2 = K eta^2`.
    pub fn counterterm(&self, k_modes: usize) -> f64 {
        k_modes as f64 * self.eta_sq
    }
}

impl ParamsBuilder {
    pub fn c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn hbar(mut self, hbar: f64) -> Self {
        self.hbar = hbar;
        self
    }

    pub fn k_b(mut self, k_b: f64) -> Self {
        self.k_b = k_b;
        self
    }

    pub fn alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn eta_convention(mut self, convention: EtaConvention) -> Self {
        self.eta_convention = convention;
        self
    }

    pub fn build(self) -> Result<CavityParams> {
        check_positive("g", self.g)?;
        check_positive("omega_bar", self.omega_bar)?;
        check_positive("delta", self.delta)?;
        check_positive("c", self.c)?;
        check_positive("hbar", self.hbar)?;
        check_positive("k_b", self.k_b)?;
        if let Some(alpha) = self.alpha {
            check_positive("alpha", alpha)?;
            let expected = alpha * self.omega_bar;
            if (self.g - expected).abs() > 1e-12 * expected.abs() {
                return Err(Error::invalid(
                    "alpha",
                    format!(
                        "is inconsistent with g: alpha * omega_bar = {expected} but g = {}",
                        self.g
                    ),
                ));
            }
        }
        let delta_omega = self.g / self.delta;
        let eta_sq = match self.eta_convention {
            EtaConvention::TwoGDeltaOmega => 2.0 * self.g * delta_omega,
            EtaConvention::FourGDeltaOmegaOverPi => 4.0 * self.g * delta_omega / PI,
        };
        Ok(CavityParams {
            g: self.g,
            omega_bar: self.omega_bar,
            delta: self.delta,
            c: self.c,
            hbar: self.hbar,
            k_b: self.k_b,
            alpha: self.alpha,
            eta_convention: self.eta_convention,
            r_over_c: PI * self.delta / self.g,
            delta_omega,
            eta_sq,
        })
    }
}

fn check_positive(field: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::invalid(field, "must be finite"));
    }
    if value <= 0.0 {
        return Err(Error::invalid(field, "must be positive"));
    }
    Ok(())
}

/// Convenience wrapper mirroring the builder for the common case.
pub fn build_params(g: f64, omega_bar: f64, delta: f64) -> Result<CavityParams> {
    CavityParams::builder(g, omega_bar, delta).build()
}

/// Mode-count pair: `k_modes` retained field modes and `normal_modes`
/// retained normal modes (`normal_modes = k_modes + 1` for a full spectrum).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Truncation {
    k_modes: usize,
    normal_modes: usize,
}

impl Truncation {
    pub fn new(k_modes: usize, normal_modes: usize) -> Result<Self> {
        if k_modes < 1 {
            return Err(Error::invalid("k_modes", "must be at least 1"));
        }
        if normal_modes < 2 {
            return Err(Error::invalid("normal_modes", "must be at least 2"));
        }
        if normal_modes > k_modes + 1 {
            return Err(Error::invalid(
                "normal_modes",
                format!("must not exceed k_modes + 1 = {}", k_modes + 1),
            ));
        }
        Ok(Truncation {
            k_modes,
            normal_modes,
        })
    }

    /// Full truncation with `normal_modes = k_modes + 1`.
    pub fn full(k_modes: usize) -> Result<Self> {
        Self::new(k_modes, k_modes + 1)
    }

    pub fn k_modes(&self) -> usize {
        self.k_modes
    }

    pub fn normal_modes(&self) -> usize {
        self.normal_modes
    }
}
