//! Small-cavity (`delta << 1`) closed-form approximations to the matrix
//! elements, with `x0 = Omega_0 delta / g` and `eps_l = delta / k`:
//!
//! ```text
//! (t_0^0)^2 ~ 1 - pi^2 delta / 3
//! (t_0^k)^2 ~ 2 delta / k^2
//! t_k^0     ~ sqrt(2 delta) k / (k^2 - x0^2)
//! t_k^l     ~ 2 k delta / ((k^2 - (l + eps_l)^2) l)
//! ```
//!
//! Approximate frequencies: `Omega_0` from the continuum secular equation and
//! `Omega_l = (l + delta/l) Δω` (the branch-`l` root sits `~delta/l` above its
//! pole for small `delta`). Quality degrades quickly beyond `delta ~ 0.3`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::model::{CavityParams, Truncation};

use super::roots::continuum_root;
use super::{Spectrum, SpectrumMethod};

/// Largest `delta` for which `(t_0^0)^2 ~ 1 - pi^2 delta/3` stays positive.
pub const APPROX_DELTA_LIMIT: f64 = 3.0 / (PI * PI);

pub fn matrix_elements_approx(params: &CavityParams, truncation: &Truncation) -> Result<Spectrum> {
    let delta = params.delta();
    if delta >= APPROX_DELTA_LIMIT {
        return Err(Error::invalid(
            "delta",
            format!("must be below {APPROX_DELTA_LIMIT:.4} for the small-cavity approximation"),
        ));
    }
    let k_modes = truncation.k_modes();
    let s_modes = truncation.normal_modes();
    let dw = params.delta_omega();

    let omega0 = continuum_root(params, 0)?;
    let x0 = omega0 * delta / params.g();

    let mut omega = Vec::with_capacity(s_modes);
    let mut offsets = Vec::with_capacity(s_modes);
    let mut t0 = Vec::with_capacity(s_modes);
    omega.push(omega0);
    offsets.push(x0);
    t0.push((1.0 - PI * PI * delta / 3.0).sqrt());
    for l in 1..s_modes {
        let eps = delta / l as f64;
        omega.push((l as f64 + eps) * dw);
        offsets.push(eps);
        t0.push((2.0 * delta).sqrt() / l as f64);
    }

    let mut tk = Mat::zeros(k_modes, s_modes);
    for k in 1..=k_modes {
        let kk = k as f64;
        tk[(k - 1, 0)] = (2.0 * delta).sqrt() * kk / (kk * kk - x0 * x0);
        for l in 1..s_modes {
            let ll = l as f64;
            let shifted = ll + delta / kk;
            tk[(k - 1, l)] = 2.0 * kk * delta / ((kk * kk - shifted * shifted) * ll);
        }
    }

    Ok(Spectrum {
        params: *params,
        truncation: *truncation,
        omega,
        branch_offset: offsets,
        t0,
        tk,
        method: SpectrumMethod::Approx,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_params;
    use approx::assert_abs_diff_eq;

    #[test]
    fn quoted_values_at_delta_0p1() {
        let p = build_params(1.0, 5.0, 0.1).unwrap();
        let s = matrix_elements_approx(&p, &Truncation::full(8).unwrap()).unwrap();
        // (t_0^0)^2 = 1 - pi^2 * 0.1 / 3 ~ 0.6710
        assert_abs_diff_eq!(
            s.t0[0] * s.t0[0],
            1.0 - PI * PI * 0.1 / 3.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(s.t0[0] * s.t0[0], 0.671, epsilon = 5e-4);
        // (t_0^k)^2 = 2 delta / k^2
        for l in 1..=8 {
            assert_abs_diff_eq!(s.t0[l] * s.t0[l], 0.2 / (l * l) as f64, epsilon = 1e-15);
        }
    }

    #[test]
    fn rejects_large_delta() {
        let p = build_params(1.0, 5.0, 0.4).unwrap();
        let err = matrix_elements_approx(&p, &Truncation::full(4).unwrap()).unwrap_err();
        assert!(err.to_string().contains("delta"));
    }
}
