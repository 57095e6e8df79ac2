//! Normal-mode frequencies `Omega_r` and the orthogonal transformation
//! elements `t_mu^r`, computed three ways:
//!
//! * [`Spectrum::exact`] - bracketed root finding on the truncated secular
//!   equation plus closed-form normalization,
//! * [`Spectrum::approx`] - the small-cavity approximants,
//! * [`Spectrum::dense_oracle`] - direct diagonalization of the truncated
//!   Hamiltonian matrix (the independent cross-check).

mod approx;
mod dense;
mod elements;
mod roots;
mod secular;

pub use approx::{matrix_elements_approx, APPROX_DELTA_LIMIT};
pub use dense::{dense_diagonalize, DENSE_SOLVE_CAP};
pub use elements::matrix_elements_exact;
pub use roots::{continuum_root, eigenfrequencies};
pub use secular::{secular_lhs, secular_lhs_guarded, SumKind, DEFAULT_POLE_GUARD};

use std::io::{self, Write};

use crate::error::Result;
use crate::linalg::Mat;
use crate::model::{CavityParams, Truncation};

/// Which construction produced a [`Spectrum`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumMethod {
    Exact,
    Approx,
    DenseOracle,
}

/// Normal-mode data for one parameter set and truncation.
///
/// `omega[r]` are the mode frequencies (ascending), `t0[r] = t_0^r` the
/// particle row of the transformation matrix and `tk[(k-1, r)] = t_k^r` the
/// field rows, `k = 1..=k_modes`. `branch_offset[r]` stores `Omega_r/Δω`
/// relative to its branch index (the distance above the nearest lower pole).
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub params: CavityParams,
    pub truncation: Truncation,
    pub omega: Vec<f64>,
    pub branch_offset: Vec<f64>,
    pub t0: Vec<f64>,
    pub tk: Mat,
    pub method: SpectrumMethod,
}

impl Spectrum {
    /// Root finding on the truncated secular equation plus closed-form
    /// elements. With `normal_modes = k_modes + 1` the transformation matrix
    /// is orthogonal to machine precision.
    pub fn exact(params: &CavityParams, truncation: &Truncation) -> Result<Self> {
        let roots = roots::branch_roots(params, truncation)?;
        Ok(elements::build_exact(params, truncation, &roots))
    }

    /// Small-cavity approximate elements.
    pub fn approx(params: &CavityParams, truncation: &Truncation) -> Result<Self> {
        approx::matrix_elements_approx(params, truncation)
    }

    /// Dense-diagonalization oracle (always `normal_modes = k_modes + 1`).
    pub fn dense_oracle(params: &CavityParams, k_modes: usize) -> Result<Self> {
        dense::dense_diagonalize(params, k_modes)
    }

    pub fn k_modes(&self) -> usize {
        self.truncation.k_modes()
    }

    pub fn normal_modes(&self) -> usize {
        self.omega.len()
    }

    /// `t_mu^r` with `mu = 0` the particle row and `mu = k` field mode `k`.
    pub fn element(&self, mu: usize, r: usize) -> f64 {
        if mu == 0 {
            self.t0[r]
        } else {
            self.tk[(mu - 1, r)]
        }
    }

    /// Largest deviation of any retained column norm from 1.
    pub fn column_norm_deviation(&self) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..self.normal_modes() {
            let mut sum = self.t0[r] * self.t0[r];
            for k in 0..self.k_modes() {
                sum += self.tk[(k, r)] * self.tk[(k, r)];
            }
            worst = worst.max((sum - 1.0).abs());
        }
        worst
    }

    /// Largest deviation of `Σ_r t_mu^r t_nu^r` from `δ_mu_nu` over the first
    /// `rows` values of `mu, nu`.
    pub fn row_orthonormality_deviation(&self, rows: usize) -> f64 {
        let rows = rows.min(self.k_modes() + 1);
        let mut worst = 0.0_f64;
        for mu in 0..rows {
            for nu in mu..rows {
                let mut sum = 0.0;
                for r in 0..self.normal_modes() {
                    sum += self.element(mu, r) * self.element(nu, r);
                }
                let expected = if mu == nu { 1.0 } else { 0.0 };
                worst = worst.max((sum - expected).abs());
            }
        }
        worst
    }

    /// Exactly one root per pole interval `(l Δω, (l+1) Δω)` within the
    /// retained window (the detached top branch of a truncated system is
    /// exempt). Returns the first violating mode index, if any.
    pub fn interlacing_violation(&self) -> Option<usize> {
        let dw = self.params.delta_omega();
        let top = self.truncation.k_modes();
        for (r, &w) in self.omega.iter().enumerate() {
            let x = w / dw;
            if r < top && !(x > r as f64 && x < (r + 1) as f64) {
                return Some(r);
            }
        }
        None
    }

    /// Columnar debug export: `r Omega_r t_0^r`, 17 significant digits.
    pub fn write_columns<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "r Omega_r t_0^r")?;
        for r in 0..self.normal_modes() {
            writeln!(w, "{} {:.16e} {:.16e}", r, self.omega[r], self.t0[r])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_params;
    use ::approx::assert_abs_diff_eq;

    fn reference_params() -> CavityParams {
        build_params(1.0, 5.0, 0.1).unwrap()
    }

    #[test]
    fn exact_matches_dense_oracle() {
        let p = reference_params();
        let k_modes = 64;
        let exact = Spectrum::exact(&p, &Truncation::full(k_modes).unwrap()).unwrap();
        let dense = Spectrum::dense_oracle(&p, k_modes).unwrap();
        for r in 0..=k_modes {
            let rel = (exact.omega[r] - dense.omega[r]).abs() / dense.omega[r];
            assert!(rel < 1e-10, "mode {r}: rel {rel}");
            for mu in 0..=k_modes {
                let diff = (exact.element(mu, r) - dense.element(mu, r)).abs();
                assert!(diff < 1e-9, "element ({mu},{r}): diff {diff}");
            }
        }
        // frozen anchor for the particle weight of the ground mode
        assert_abs_diff_eq!(
            exact.t0[0] * exact.t0[0],
            0.6987362847345555,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(exact.element(1, 0), 0.45701113091913914, epsilon = 1e-9);
    }

    #[test]
    fn exact_columns_normalized() {
        let p = reference_params();
        let s = Spectrum::exact(&p, &Truncation::full(48).unwrap()).unwrap();
        assert!(s.column_norm_deviation() < 1e-12);
        assert!(s.row_orthonormality_deviation(16) < 1e-12);
        // particle row sums to 1 over the full normal-mode range
        let row0: f64 = s.t0.iter().map(|t| t * t).sum();
        assert_abs_diff_eq!(row0, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn interlacing_holds() {
        let p = reference_params();
        let s = Spectrum::exact(&p, &Truncation::full(32).unwrap()).unwrap();
        assert_eq!(s.interlacing_violation(), None);
        let d = Spectrum::dense_oracle(&p, 32).unwrap();
        assert_eq!(d.interlacing_violation(), None);
    }

    #[test]
    fn approx_close_to_exact_at_small_delta() {
        // small-cavity approximants within 5% of exact for k <= 10
        let p = build_params(1.0, 5.0, 0.01).unwrap();
        let tr = Truncation::full(200).unwrap();
        let exact = Spectrum::exact(&p, &tr).unwrap();
        let approx = Spectrum::approx(&p, &tr).unwrap();
        let rel00 = ((approx.t0[0] / exact.t0[0]).powi(2) - 1.0).abs();
        assert!(rel00 < 0.05, "(t_0^0)^2 rel dev {rel00}");
        for k in 1..=10 {
            let rel = ((approx.t0[k] / exact.t0[k]).powi(2) - 1.0).abs();
            assert!(rel < 0.05, "(t_0^{k})^2 rel dev {rel}");
            let rel = (approx.element(k, 0) / exact.element(k, 0) - 1.0).abs();
            assert!(rel < 0.05, "t_{k}^0 rel dev {rel}");
        }
    }

    #[test]
    fn exact_matches_dense_under_alternate_eta() {
        let p = CavityParams::builder(1.0, 5.0, 0.1)
            .eta_convention(crate::model::EtaConvention::FourGDeltaOmegaOverPi)
            .build()
            .unwrap();
        let k_modes = 24;
        let exact = Spectrum::exact(&p, &Truncation::full(k_modes).unwrap()).unwrap();
        let dense = Spectrum::dense_oracle(&p, k_modes).unwrap();
        for r in 0..=k_modes {
            let rel = (exact.omega[r] - dense.omega[r]).abs() / dense.omega[r];
            assert!(rel < 1e-10, "mode {r}: rel {rel}");
            for mu in 0..=k_modes {
                let diff = (exact.element(mu, r) - dense.element(mu, r)).abs();
                assert!(diff < 1e-9, "element ({mu},{r}): diff {diff}");
            }
        }
    }

    #[test]
    fn exact_matches_dense_with_resonant_ladder() {
        // large delta: omega_bar sits deep inside the mode ladder
        let p = build_params(1.0, 5.0, 20.0).unwrap();
        let k_modes = 128;
        let exact = Spectrum::exact(&p, &Truncation::full(k_modes).unwrap()).unwrap();
        let dense = Spectrum::dense_oracle(&p, k_modes).unwrap();
        for r in 0..=k_modes {
            let rel = (exact.omega[r] - dense.omega[r]).abs() / dense.omega[r];
            assert!(rel < 1e-9, "mode {r}: rel {rel}");
        }
        let mut worst = 0.0_f64;
        for r in 0..=k_modes {
            for mu in 0..=k_modes {
                worst = worst.max((exact.element(mu, r) - dense.element(mu, r)).abs());
            }
        }
        assert!(worst < 1e-8, "element deviation {worst}");
        assert!(exact.column_norm_deviation() < 1e-12);
    }

    #[test]
    fn exact_matches_dense_with_detached_top_root() {
        // omega_bar above the whole retained ladder: the particle-like root
        // detaches beyond the top branch
        let p = build_params(0.1, 10.0, 0.5).unwrap();
        let k_modes = 16;
        let exact = Spectrum::exact(&p, &Truncation::full(k_modes).unwrap()).unwrap();
        let dense = Spectrum::dense_oracle(&p, k_modes).unwrap();
        assert!(exact.omega[k_modes] > p.mode_frequencies(k_modes)[k_modes - 1]);
        for r in 0..=k_modes {
            let rel = (exact.omega[r] - dense.omega[r]).abs() / dense.omega[r];
            assert!(rel < 1e-9, "mode {r}: rel {rel}");
            for mu in 0..=k_modes {
                let diff = (exact.element(mu, r) - dense.element(mu, r)).abs();
                assert!(diff < 1e-9, "element ({mu},{r}): diff {diff}");
            }
        }
    }

    #[test]
    fn matrix_elements_exact_from_frequencies() {
        let p = reference_params();
        let tr = Truncation::full(24).unwrap();
        let omegas = eigenfrequencies(&p, &tr).unwrap();
        let s = matrix_elements_exact(&p, &tr, &omegas).unwrap();
        let direct = Spectrum::exact(&p, &tr).unwrap();
        for r in 0..s.normal_modes() {
            assert_abs_diff_eq!(s.t0[r], direct.t0[r], epsilon = 1e-10);
        }
    }

    #[test]
    fn column_export_format() {
        let p = reference_params();
        let s = Spectrum::exact(&p, &Truncation::full(64).unwrap()).unwrap();
        let mut buf = Vec::new();
        s.write_columns(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("r Omega_r t_0^r"));
        let first = lines.next().unwrap();
        assert!(first.starts_with("0 4.26"), "{first}");
        // 17 significant digits per column
        let omega_field = first.split_whitespace().nth(1).unwrap();
        assert!(omega_field.len() >= 18, "{omega_field}");
    }
}
