//! Closed-form transformation-matrix elements from converged secular roots.
//!
//! With `x_r = Omega_r / Δω` held as `branch + offset`, the elements are
//!
//! ```text
//! (t_0^r)^2 = 1 / (1 + W'(x_r)),    W'(x) = 2 delta Σ_k k^2 / (k^2 - x^2)^2
//! t_k^r     = sqrt(2 delta) k t_0^r / (k^2 - x_r^2)
//! ```
//!
//! where `k^2 - x^2 = ((k - l) - eps)((k + l) + eps)` is evaluated in exact
//! branch-local arithmetic, so near-resonant denominators (`Omega_r` hugging
//! `omega_k` at large `l`) lose no precision. The sign convention is
//! `t_0^r > 0`.

use crate::error::Result;
use crate::linalg::Mat;
use crate::model::{CavityParams, Truncation};

use super::roots::BranchRoot;
use super::{Spectrum, SpectrumMethod};

pub(crate) fn build_exact(
    params: &CavityParams,
    truncation: &Truncation,
    roots: &[BranchRoot],
) -> Spectrum {
    let k_modes = truncation.k_modes();
    let s_modes = roots.len();
    let two_delta = 2.0 * params.delta() * normalization_ratio(params);
    let sqrt_two_delta = two_delta.sqrt();

    let mut t0 = vec![0.0; s_modes];
    let mut tk = Mat::zeros(k_modes, s_modes);
    let mut omega = Vec::with_capacity(s_modes);
    let mut offsets = Vec::with_capacity(s_modes);

    for (r, root) in roots.iter().enumerate() {
        let (l, eps) = (root.branch, root.offset);
        let x = root.x();
        // W'(x_r) and the per-mode denominators in one pass
        let mut w_prime = 0.0;
        for k in 1..=k_modes {
            let denom = denom(k, l, eps);
            let kk = k as f64;
            w_prime += (kk / denom) * (kk / denom);
        }
        w_prime *= two_delta;
        let t0r = (1.0 / (1.0 + w_prime)).sqrt();
        t0[r] = t0r;
        for k in 1..=k_modes {
            tk[(k - 1, r)] = sqrt_two_delta * k as f64 * t0r / denom(k, l, eps);
        }
        omega.push(x * params.delta_omega());
        offsets.push(eps);
    }

    Spectrum {
        params: *params,
        truncation: *truncation,
        omega,
        branch_offset: offsets,
        t0,
        tk,
        method: SpectrumMethod::Exact,
    }
}

/// `k^2 - x^2` for `x = l + eps`, cancellation-free.
#[inline]
fn denom(k: usize, l: usize, eps: f64) -> f64 {
    ((k as f64 - l as f64) - eps) * ((k + l) as f64 + eps)
}

/// `eta^2 / (2 g Δω)`: 1 under the default convention, `2/pi` under the
/// alternate one. Keeps the element formulas valid for either normalization.
fn normalization_ratio(params: &CavityParams) -> f64 {
    params.eta_sq() / (2.0 * params.g() * params.delta_omega())
}

/// Build a [`Spectrum`] from externally supplied normal-mode frequencies
/// (converged roots of the secular equation for this truncation).
pub fn matrix_elements_exact(
    params: &CavityParams,
    truncation: &Truncation,
    omegas: &[f64],
) -> Result<Spectrum> {
    let roots: Vec<BranchRoot> = omegas
        .iter()
        .map(|&w| {
            let x = w / params.delta_omega();
            let branch = x.floor() as usize;
            BranchRoot {
                branch,
                offset: x - branch as f64,
            }
        })
        .collect();
    let truncation = Truncation::new(truncation.k_modes(), roots.len())?;
    Ok(build_exact(params, &truncation, &roots))
}
