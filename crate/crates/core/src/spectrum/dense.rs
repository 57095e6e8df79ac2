//! Dense-diagonalization oracle: build the truncated `(K+1) x (K+1)` coupled
//! Hamiltonian matrix and diagonalize it with the in-repo symmetric
//! eigensolver. Serves as the independent cross-check for the secular-root
//! and closed-form-element path.

use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, Mat};
use crate::model::{CavityParams, Truncation};

use super::{Spectrum, SpectrumMethod};

/// Largest mode count accepted for a dense solve.
pub const DENSE_SOLVE_CAP: usize = 5000;

/// Diagonalize the truncated quadratic form
///
/// ```text
/// M_00 = omega_bar^2 + Σ_k c_k^2/omega_k^2,   M_kk = omega_k^2,   M_0k = -c_k,
/// ```
///
/// whose eigenvalues are `Omega_r^2`. The bare frequency keeps the truncated
/// counterterm, so the renormalized `omega_bar` is held fixed as `K` grows.
pub fn dense_diagonalize(params: &CavityParams, k_modes: usize) -> Result<Spectrum> {
    if k_modes == 0 {
        return Err(Error::invalid("k_modes", "must be at least 1"));
    }
    if k_modes > DENSE_SOLVE_CAP {
        return Err(Error::invalid(
            "k_modes",
            format!("exceeds the dense-solve cap of {DENSE_SOLVE_CAP}"),
        ));
    }
    let n = k_modes + 1;
    let couplings = params.coupling_constants(k_modes);
    let frequencies = params.mode_frequencies(k_modes);

    let mut m = Mat::zeros(n, n);
    m[(0, 0)] = params.omega_bar().powi(2) + params.counterterm(k_modes);
    for k in 1..n {
        m[(k, k)] = frequencies[k - 1] * frequencies[k - 1];
        m[(0, k)] = -couplings[k - 1];
        m[(k, 0)] = -couplings[k - 1];
    }

    let (eigenvalues, mut vectors) = sym_eigen(&m)?;
    if eigenvalues[0] <= 0.0 {
        return Err(Error::Incompatible(format!(
            "dense solve produced a non-positive squared frequency {}",
            eigenvalues[0]
        )));
    }

    // sign convention: t_0^r > 0
    for r in 0..n {
        if vectors[(0, r)] < 0.0 {
            vectors.scale_col(r, -1.0);
        }
    }

    let dw = params.delta_omega();
    let omega: Vec<f64> = eigenvalues.iter().map(|&l| l.sqrt()).collect();
    let branch_offset: Vec<f64> = omega
        .iter()
        .map(|&w| {
            let x = w / dw;
            x - x.floor()
        })
        .collect();
    let t0: Vec<f64> = (0..n).map(|r| vectors[(0, r)]).collect();
    let tk = Mat::from_fn(k_modes, n, |k, r| vectors[(k + 1, r)]);

    Ok(Spectrum {
        params: *params,
        truncation: Truncation::full(k_modes)?,
        omega,
        branch_offset,
        t0,
        tk,
        method: SpectrumMethod::DenseOracle,
    })
}
