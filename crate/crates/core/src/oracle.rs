//! Brute-force verification path: the truncated system as a Gaussian state
//! (mean vector + covariance matrix) evolved exactly through the normal
//! modes, with the dressed-particle marginals read back out for comparison
//! against the closed-form observables.
//!
//! The dressed coordinate map `sqrt(wbar_mu) q'_mu = Σ_r t_mu^r sqrt(Omega_r) Q_r`
//! is completed on the momentum side by `p'_mu = Σ_r t_mu^r sqrt(wbar_mu/Omega_r) P_r`,
//! the unique diagonal-scaling completion that keeps `(q', p')` canonical for
//! an orthogonal `t`.

use serde::Serialize;

use crate::dynamics::{CoherentAmplitude, ThermalConfig};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::model::CavityParams;
use crate::spectrum::Spectrum;

/// Default tolerance for flagging analytic-vs-oracle deviations.
pub const DEFAULT_ORACLE_TOLERANCE: f64 = 1e-8;

/// The linear maps `q' = A Q`, `p' = B P` between dressed and normal
/// coordinates, with `A = D_w^{-1/2} T D_Omega^{1/2}` and
/// `B = D_w^{1/2} T D_Omega^{-1/2}`.
#[derive(Debug, Clone)]
pub struct DressedNormalMap {
    a: Mat,
    b: Mat,
}

impl DressedNormalMap {
    /// Requires a square spectrum (`normal_modes == k_modes + 1`); anything
    /// smaller cannot be symplectic.
    pub fn new(params: &CavityParams, spectrum: &Spectrum) -> Result<Self> {
        let n = spectrum.k_modes() + 1;
        if spectrum.normal_modes() != n {
            return Err(Error::Incompatible(format!(
                "dressed-normal map needs a square spectrum: {} normal modes for {} field modes",
                spectrum.normal_modes(),
                spectrum.k_modes()
            )));
        }
        let mut bare = Vec::with_capacity(n);
        bare.push(params.omega_bar());
        bare.extend(params.mode_frequencies(spectrum.k_modes()));
        let a = Mat::from_fn(n, n, |mu, r| {
            spectrum.element(mu, r) * (spectrum.omega[r] / bare[mu]).sqrt()
        });
        let b = Mat::from_fn(n, n, |mu, r| {
            spectrum.element(mu, r) * (bare[mu] / spectrum.omega[r]).sqrt()
        });
        Ok(DressedNormalMap { a, b })
    }

    pub fn n_modes(&self) -> usize {
        self.a.rows()
    }

    /// Dressed -> normal: `Q = B^T q'`, `P = A^T p'`.
    pub fn to_normal(&self, q: &[f64], p: &[f64]) -> (Vec<f64>, Vec<f64>) {
        (self.b.transpose().matvec(q), self.a.transpose().matvec(p))
    }

    /// Normal -> dressed: `q' = A Q`, `p' = B P`.
    pub fn to_dressed(&self, q_normal: &[f64], p_normal: &[f64]) -> (Vec<f64>, Vec<f64>) {
        (self.a.matvec(q_normal), self.b.matvec(p_normal))
    }

    /// Max deviation of `A B^T` from the identity; zero for an exactly
    /// canonical (symplectic) pair.
    pub fn symplectic_deviation(&self) -> f64 {
        let n = self.n_modes();
        self.a
            .matmul(&self.b.transpose())
            .max_abs_diff(&Mat::identity(n))
    }
}

/// Gaussian state over the dressed modes: mean `(q'_0..q'_K, p'_0..p'_K)` and
/// the matching `2(K+1) x 2(K+1)` covariance matrix.
#[derive(Debug, Clone)]
pub struct CovarianceState {
    pub mean: Vec<f64>,
    pub cov: Mat,
    pub time: f64,
}

impl CovarianceState {
    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean_q(&self, mu: usize) -> f64 {
        self.mean[mu]
    }

    pub fn mean_p(&self, mu: usize) -> f64 {
        self.mean[self.n_modes() + mu]
    }

    pub fn var_q(&self, mu: usize) -> f64 {
        self.cov[(mu, mu)]
    }

    pub fn var_p(&self, mu: usize) -> f64 {
        let n = self.n_modes();
        self.cov[(n + mu, n + mu)]
    }

    /// Determinant of the `(q'_mu, p'_mu)` marginal covariance block.
    pub fn marginal_determinant(&self, mu: usize) -> f64 {
        let n = self.n_modes();
        let qq = self.cov[(mu, mu)];
        let pp = self.cov[(n + mu, n + mu)];
        let qp = self.cov[(mu, n + mu)];
        qq * pp - qp * qp
    }

    /// Smallest margin `det(marginal) - (hbar/2)^2` over all modes; negative
    /// values violate the Robertson bound.
    pub fn robertson_margin(&self, hbar: f64) -> f64 {
        (0..self.n_modes())
            .map(|mu| self.marginal_determinant(mu) - 0.25 * hbar * hbar)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Initial product state: dressed coherent particle at amplitude `lambda`,
/// dressed field modes in thermal equilibrium.
pub fn initial_state(
    params: &CavityParams,
    spectrum: &Spectrum,
    lambda: &CoherentAmplitude,
    thermal: &ThermalConfig,
) -> Result<CovarianceState> {
    if thermal.k_modes() != spectrum.k_modes() {
        return Err(Error::Incompatible(format!(
            "spectrum retains {} field modes but the thermal configuration has {}",
            spectrum.k_modes(),
            thermal.k_modes()
        )));
    }
    let k_modes = spectrum.k_modes();
    let n = k_modes + 1;
    let hbar = params.hbar();
    let wbar = params.omega_bar();
    let freqs = params.mode_frequencies(k_modes);

    let mut mean = vec![0.0; 2 * n];
    mean[0] = (2.0 * hbar / wbar).sqrt() * lambda.value().re;
    mean[n] = (2.0 * hbar * wbar).sqrt() * lambda.value().im;

    let mut cov = Mat::zeros(2 * n, 2 * n);
    cov[(0, 0)] = hbar / (2.0 * wbar);
    cov[(n, n)] = hbar * wbar / 2.0;
    for k in 1..n {
        let w = freqs[k - 1];
        let stretch = 2.0 * thermal.occupations()[k - 1] + 1.0;
        cov[(k, k)] = hbar / (2.0 * w) * stretch;
        cov[(n + k, n + k)] = hbar * w / 2.0 * stretch;
    }
    Ok(CovarianceState {
        mean,
        cov,
        time: 0.0,
    })
}

/// Exact Heisenberg-picture evolution over an interval `t`: normal modes
/// rotate as `Q_r(t) = Q_r cos(Omega_r t) + P_r sin(Omega_r t)/Omega_r`,
/// `P_r(t) = P_r cos(Omega_r t) - Omega_r Q_r sin(Omega_r t)`, conjugated
/// into dressed coordinates. No time stepping is involved.
pub fn evolve(
    state: &CovarianceState,
    params: &CavityParams,
    spectrum: &Spectrum,
    t: f64,
) -> Result<CovarianceState> {
    let map = DressedNormalMap::new(params, spectrum)?;
    Ok(Evolver::new(map, spectrum).evolve(state, t))
}

/// Precomputed maps for repeated [`Evolver::evolve`] calls over one spectrum.
pub struct Evolver {
    map: DressedNormalMap,
    omega: Vec<f64>,
}

impl Evolver {
    pub fn new(map: DressedNormalMap, spectrum: &Spectrum) -> Self {
        Evolver {
            map,
            omega: spectrum.omega.clone(),
        }
    }

    pub fn map(&self) -> &DressedNormalMap {
        &self.map
    }

    /// The dressed-basis symplectic propagator blocks
    /// `S = [[A C B^T, A (S/Ω) A^T], [-B (Ω S) B^T, B C A^T]]`.
    fn propagator(&self, t: f64) -> (Mat, Mat, Mat, Mat) {
        let n = self.map.n_modes();
        let a = &self.map.a;
        let b = &self.map.b;
        let cos: Vec<f64> = self.omega.iter().map(|w| (w * t).cos()).collect();
        let sin_over: Vec<f64> = self.omega.iter().map(|w| (w * t).sin() / w).collect();
        let omega_sin: Vec<f64> = self.omega.iter().map(|w| (w * t).sin() * w).collect();

        let scaled = |m: &Mat, d: &[f64]| {
            let mut out = m.clone();
            for (j, &dj) in d.iter().enumerate() {
                out.scale_col(j, dj);
            }
            out
        };
        let s_qq = scaled(a, &cos).matmul(&b.transpose());
        let s_qp = scaled(a, &sin_over).matmul(&a.transpose());
        let s_pq = {
            let mut m = scaled(b, &omega_sin).matmul(&b.transpose());
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] = -m[(i, j)];
                }
            }
            m
        };
        let s_pp = scaled(b, &cos).matmul(&a.transpose());
        (s_qq, s_qp, s_pq, s_pp)
    }

    pub fn evolve(&self, state: &CovarianceState, t: f64) -> CovarianceState {
        let n = self.map.n_modes();
        assert_eq!(state.n_modes(), n, "state size must match the map");
        let (s_qq, s_qp, s_pq, s_pp) = self.propagator(t);

        // assemble the full 2n x 2n propagator and conjugate
        let mut s = Mat::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                s[(i, j)] = s_qq[(i, j)];
                s[(i, n + j)] = s_qp[(i, j)];
                s[(n + i, j)] = s_pq[(i, j)];
                s[(n + i, n + j)] = s_pp[(i, j)];
            }
        }
        let mean = s.matvec(&state.mean);
        let cov = s.matmul(&state.cov).matmul(&s.transpose());
        CovarianceState {
            mean,
            cov,
            time: state.time + t,
        }
    }

    /// Mean energy `<H> = 1/2 Σ_r (<P_r^2> + Omega_r^2 <Q_r^2>)`, conserved
    /// exactly under the evolution.
    pub fn mean_energy(&self, state: &CovarianceState) -> f64 {
        let n = self.map.n_modes();
        let q_mean: Vec<f64> = state.mean[..n].to_vec();
        let p_mean: Vec<f64> = state.mean[n..].to_vec();
        let (q_normal, p_normal) = self.map.to_normal(&q_mean, &p_mean);

        let bt = self.map.b.transpose();
        let at = self.map.a.transpose();
        let mut energy = 0.0;
        for r in 0..n {
            let brow = bt.row(r);
            let arow = at.row(r);
            // <Q_r^2> = b_r^T C_qq b_r + mean^2, <P_r^2> = a_r^T C_pp a_r + mean^2
            let mut qq = 0.0;
            let mut pp = 0.0;
            for i in 0..n {
                let mut cq = 0.0;
                let mut cp = 0.0;
                for j in 0..n {
                    cq += state.cov[(i, j)] * brow[j];
                    cp += state.cov[(n + i, n + j)] * arow[j];
                }
                qq += brow[i] * cq;
                pp += arow[i] * cp;
            }
            qq += q_normal[r] * q_normal[r];
            pp += p_normal[r] * p_normal[r];
            energy += 0.5 * (pp + self.omega[r] * self.omega[r] * qq);
        }
        energy
    }
}

/// One row of an oracle comparison: analytic vs covariance-oracle values.
#[derive(Debug, Clone, Serialize)]
pub struct OracleRow {
    pub t: f64,
    pub mean_q0_analytic: f64,
    pub mean_q0_oracle: f64,
    pub mean_p0_analytic: f64,
    pub mean_p0_oracle: f64,
    pub var_q0_analytic: f64,
    pub var_q0_oracle: f64,
    pub var_p0_analytic: f64,
    pub var_p0_oracle: f64,
    pub delta_analytic: f64,
    pub delta_oracle: f64,
    pub max_relative_deviation: f64,
}

/// Comparison summary over a list of sample times.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub rows: Vec<OracleRow>,
    pub max_relative_deviation: f64,
    pub threshold: f64,
    pub pass: bool,
}

/// Tabulate analytic vs oracle observables at the given times.
///
/// Both routes share the spectrum (same truncation), so deviations isolate
/// formula errors rather than tail effects. Relative deviations of the means
/// are measured against the coherent-amplitude scale, since the means cross
/// zero.
pub fn oracle_compare(
    params: &CavityParams,
    lambda: &CoherentAmplitude,
    beta: f64,
    k_modes: usize,
    times: &[f64],
    threshold: f64,
) -> Result<OracleReport> {
    use crate::dynamics::{mean_p0, mean_q0, occupations, uncertainty_product, var_p0, var_q0};
    use crate::model::Truncation;

    let truncation = Truncation::full(k_modes)?;
    let spectrum = Spectrum::exact(params, &truncation)?;
    let thermal = occupations(params, beta, k_modes)?;
    let state0 = initial_state(params, &spectrum, lambda, &thermal)?;
    let evolver = Evolver::new(DressedNormalMap::new(params, &spectrum)?, &spectrum);

    let q_scale =
        (2.0 * params.hbar() / params.omega_bar()).sqrt() * lambda.value().norm().max(1.0);
    let p_scale =
        (2.0 * params.hbar() * params.omega_bar()).sqrt() * lambda.value().norm().max(1.0);

    let mut rows = Vec::with_capacity(times.len());
    let mut worst = 0.0_f64;
    for &t in times {
        let state = evolver.evolve(&state0, t);
        let row = {
            let mq_a = mean_q0(params, &spectrum, lambda, t);
            let mp_a = mean_p0(params, &spectrum, lambda, t);
            let vq_a = var_q0(params, &spectrum, &thermal, t)?;
            let vp_a = var_p0(params, &spectrum, &thermal, t)?;
            let dd_a = uncertainty_product(params, &spectrum, &thermal, t)?;
            let mq_o = state.mean_q(0);
            let mp_o = state.mean_p(0);
            let vq_o = state.var_q(0);
            let vp_o = state.var_p(0);
            let dd_o = (vq_o * vp_o).sqrt();
            let rel = [
                (mq_a - mq_o).abs() / q_scale.max(mq_a.abs()),
                (mp_a - mp_o).abs() / p_scale.max(mp_a.abs()),
                (vq_a - vq_o).abs() / vq_a.abs(),
                (vp_a - vp_o).abs() / vp_a.abs(),
                (dd_a - dd_o).abs() / dd_a.abs(),
            ]
            .into_iter()
            .fold(0.0, f64::max);
            OracleRow {
                t,
                mean_q0_analytic: mq_a,
                mean_q0_oracle: mq_o,
                mean_p0_analytic: mp_a,
                mean_p0_oracle: mp_o,
                var_q0_analytic: vq_a,
                var_q0_oracle: vq_o,
                var_p0_analytic: vp_a,
                var_p0_oracle: vp_o,
                delta_analytic: dd_a,
                delta_oracle: dd_o,
                max_relative_deviation: rel,
            }
        };
        worst = worst.max(row.max_relative_deviation);
        rows.push(row);
    }
    Ok(OracleReport {
        rows,
        max_relative_deviation: worst,
        threshold,
        pass: worst <= threshold,
    })
}
