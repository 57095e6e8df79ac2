//! Bose-Einstein occupations of the dressed field modes and adaptive
//! truncation control for the thermal sums.

use crate::error::{Error, Result};
use crate::model::{CavityParams, Truncation};

/// Tail bound below which the thermal mode sum is considered converged.
pub const THERMAL_TAIL_TOLERANCE: f64 = 1e-8;

/// Inverse temperature and the dressed-mode occupations built from it.
#[derive(Debug, Clone)]
pub struct ThermalConfig {
    beta: f64,
    occupations: Vec<f64>,
}

impl ThermalConfig {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `n_k` for `k = 1..=k_modes` (index 0 holds `n_1`).
    pub fn occupations(&self) -> &[f64] {
        &self.occupations
    }

    pub fn k_modes(&self) -> usize {
        self.occupations.len()
    }
}

/// Occupations `n_k = 1/(exp(hbar beta omega_k) - 1)`.
///
/// `beta` may be `+inf` (zero temperature: every `n_k = 0`); non-positive or
/// NaN values are rejected.
pub fn occupations(params: &CavityParams, beta: f64, k_modes: usize) -> Result<ThermalConfig> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::invalid("beta", "must be positive"));
    }
    let occupations = (1..=k_modes)
        .map(|k| {
            let x = params.hbar() * beta * k as f64 * params.delta_omega();
            1.0 / x.exp_m1()
        })
        .collect();
    Ok(ThermalConfig { beta, occupations })
}

/// A priori bound on the neglected thermal tail: `n_K * 2 delta / K`, using
/// the `(t_0^k)^2 <~ 2 delta / k^2` envelope of the mode weights.
pub fn thermal_tail_bound(params: &CavityParams, beta: f64, k_modes: usize) -> f64 {
    let x = params.hbar() * beta * k_modes as f64 * params.delta_omega();
    let n_k = 1.0 / x.exp_m1();
    n_k * 2.0 * params.delta() / k_modes as f64
}

/// Smallest truncation (with a floor of 64 modes) whose thermal tail bound is
/// below [`THERMAL_TAIL_TOLERANCE`]; returns it with the bound achieved.
pub fn auto_truncation(params: &CavityParams, beta: f64) -> Result<(Truncation, f64)> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::invalid("beta", "must be positive"));
    }
    let scale = params.hbar() * beta * params.delta_omega();
    let mut k_modes = if beta.is_infinite() {
        64
    } else {
        64_usize.max((12.0 / scale).ceil() as usize)
    };
    let mut bound = thermal_tail_bound(params, beta, k_modes);
    while bound >= THERMAL_TAIL_TOLERANCE {
        k_modes += k_modes / 4 + 1;
        bound = thermal_tail_bound(params, beta, k_modes);
        if k_modes > 2_000_000 {
            return Err(Error::Incompatible(format!(
                "thermal tail bound stalled at {bound:e} with {k_modes} modes"
            )));
        }
    }
    Ok((Truncation::full(k_modes)?, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_params;
    use approx::assert_abs_diff_eq;

    #[test]
    fn bose_einstein_values() {
        // n_1 = 1/(e^{2.6} - 1) at hbar*beta*Δω = 2.6
        let p = build_params(1.0, 5.0, 0.1).unwrap();
        let th = occupations(&p, 0.26, 8).unwrap();
        assert_abs_diff_eq!(th.occupations()[0], 0.08023275177893807, epsilon = 1e-14);
    }

    #[test]
    fn zero_temperature() {
        let p = build_params(1.0, 5.0, 0.1).unwrap();
        let th = occupations(&p, f64::INFINITY, 8).unwrap();
        assert!(th.occupations().iter().all(|&n| n == 0.0));
    }

    #[test]
    fn monotone_decreasing_with_exponential_tail() {
        let p = build_params(1.0, 5.0, 0.1).unwrap();
        let th = occupations(&p, 0.26, 16).unwrap();
        let n = th.occupations();
        let ratio_limit = (-p.hbar() * 0.26 * p.delta_omega()).exp();
        for k in 1..n.len() {
            assert!(n[k] < n[k - 1]);
            if k > 4 {
                assert_abs_diff_eq!(n[k] / n[k - 1], ratio_limit, epsilon = 1e-4);
            }
        }
    }

    #[test]
    fn rejects_nonpositive_beta() {
        let p = build_params(1.0, 5.0, 0.1).unwrap();
        let err = occupations(&p, -1.0, 4).unwrap_err();
        assert_eq!(err.to_string(), "beta must be positive");
        assert!(occupations(&p, 0.0, 4).is_err());
    }

    #[test]
    fn auto_truncation_floor_and_bound() {
        let p = build_params(1.0, 5.0, 0.1).unwrap();
        let (tr, bound) = auto_truncation(&p, 0.26).unwrap();
        assert_eq!(tr.k_modes(), 64);
        assert!(bound < THERMAL_TAIL_TOLERANCE);
        // slow spacing needs many more modes
        let p20 = build_params(1.0, 5.0, 20.0).unwrap();
        let (tr20, bound20) = auto_truncation(&p20, 0.26).unwrap();
        assert!(tr20.k_modes() > 900);
        assert!(bound20 < THERMAL_TAIL_TOLERANCE);
    }
}
