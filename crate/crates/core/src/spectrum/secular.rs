//! The secular function whose branch roots are the normal-mode frequencies.
//!
//! Everything is evaluated in the dimensionless variable `x = Omega / Δω`.
//! Eliminating the field amplitudes from the normal-mode conditions gives
//!
//! ```text
//! F(x) = wbar^2 - x^2 - 2 delta x^2 Σ_{k=1}^{K} 1/(k^2 - x^2),   wbar = omega_bar/Δω
//! ```
//!
//! whose `K -> ∞` limit sums in closed form to
//!
//! ```text
//! F(x) = wbar^2 - x^2 - delta (1 - pi x cot(pi x)).
//! ```
//!
//! `F` is strictly decreasing between consecutive poles (the identity
//! `S1 + x^2 S2 = Σ k^2/(k^2-x^2)^2 >= 0` makes `F' = -2x(1 + 2 delta Σ
//! k^2/(k^2-x^2)^2) < 0`), so every branch holds exactly one root.
//!
//! Points are addressed as `x = l + eps` with integer branch index `l`; this
//! keeps `k^2 - x^2 = ((k-l) - eps)((k+l) + eps)` and `cot(pi x) =
//! cot(pi eps)` exact near the poles, where naive evaluation would cancel
//! catastrophically.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::CavityParams;

/// Guard band (in units of `Δω`) around the cotangent poles inside which
/// [`secular_lhs`] refuses to evaluate.
pub const DEFAULT_POLE_GUARD: f64 = 1e-12;

/// How many field modes enter the secular sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SumKind {
    /// Closed-form infinite sum (the continuum limit).
    Continuum,
    /// Direct sum over the first `K` field modes; matches the truncated
    /// `(K+1) x (K+1)` system exactly.
    Truncated(usize),
}

/// Secular function of a fixed parameter set, in dimensionless form.
///
/// `coupling = eta^2 / (2 Δω^2)`, which reduces to `delta` under the default
/// normalization; the alternate convention scales it by `2/pi`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Secular {
    pub w_bar: f64,
    pub coupling: f64,
    pub kind: SumKind,
}

impl Secular {
    pub fn new(params: &CavityParams, kind: SumKind) -> Self {
        let dw = params.delta_omega();
        Secular {
            w_bar: params.omega_bar_reduced(),
            coupling: params.eta_sq() / (2.0 * dw * dw),
            kind,
        }
    }

    /// `F(l + eps)`.
    pub fn eval(&self, l: usize, eps: f64) -> f64 {
        self.eval_with_deriv(l, eps).0
    }

    /// `(F, dF/dx)` at `x = l + eps`.
    pub fn eval_with_deriv(&self, l: usize, eps: f64) -> (f64, f64) {
        let x = l as f64 + eps;
        match self.kind {
            SumKind::Continuum => {
                // cot(pi(l + eps)) = cot(pi eps)
                let (s, c) = (PI * eps).sin_cos();
                let cot = c / s;
                let f = self.w_bar * self.w_bar - x * x - self.coupling * (1.0 - PI * x * cot);
                let df = -2.0 * x + self.coupling * PI * (cot - PI * x / (s * s));
                (f, df)
            }
            SumKind::Truncated(k_modes) => {
                let mut s1 = 0.0;
                let mut s2 = 0.0; // Σ k^2/(k^2-x^2)^2
                for k in 1..=k_modes {
                    let lo = (k as f64 - l as f64) - eps;
                    let hi = (k + l) as f64 + eps;
                    let inv = 1.0 / (lo * hi);
                    s1 += inv;
                    s2 += (k as f64 * inv) * (k as f64 * inv);
                }
                let f = self.w_bar * self.w_bar - x * x - 2.0 * self.coupling * x * x * s1;
                let df = -2.0 * x - 4.0 * self.coupling * x * s2;
                (f, df)
            }
        }
    }

    /// Number of branches carrying a root: `K + 1` when truncated (the last
    /// branch `(K, ∞)` is unbounded), unbounded for the continuum.
    pub fn branch_count(&self) -> Option<usize> {
        match self.kind {
            SumKind::Continuum => None,
            SumKind::Truncated(k) => Some(k + 1),
        }
    }

    /// Whether branch `l` has a pole at its right end `x = l + 1`.
    pub fn has_right_pole(&self, l: usize) -> bool {
        match self.kind {
            SumKind::Continuum => true,
            SumKind::Truncated(k) => l < k,
        }
    }
}

/// Continuum secular function `G(Omega)` in the cotangent form
///
/// ```text
/// G(Omega) = (Omega R/c) cot(Omega R/c) - 1 + (R/(pi g c)) (omega_bar^2 - Omega^2),
/// ```
///
/// strictly decreasing on every pole-free branch. Returns [`Error::NearPole`]
/// within [`DEFAULT_POLE_GUARD`] of a pole so the caller can shrink its
/// bracket.
pub fn secular_lhs(params: &CavityParams, omega: f64) -> Result<f64> {
    secular_lhs_guarded(params, omega, DEFAULT_POLE_GUARD)
}

/// [`secular_lhs`] with a configurable pole guard band.
pub fn secular_lhs_guarded(params: &CavityParams, omega: f64, guard: f64) -> Result<f64> {
    let x = omega / params.delta_omega();
    let l = x.floor();
    let eps = x - l;
    let nearest_pole = if eps < 0.5 { l } else { l + 1.0 };
    if nearest_pole >= 1.0 && (x - nearest_pole).abs() < guard {
        return Err(Error::NearPole {
            pole: nearest_pole * params.delta_omega(),
            guard,
        });
    }
    let sec = Secular::new(params, SumKind::Continuum);
    // G = F / coupling, which is exactly the cotangent form above under the
    // default normalization
    Ok(sec.eval(l as usize, eps) / sec.coupling)
}
