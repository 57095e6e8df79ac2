//! Named consistency checks bundling the cross-validation machinery for the
//! command-line `oracle-check` run: spectrum orthonormality, root-vs-dense
//! agreement, analytic-vs-covariance-oracle agreement, energy conservation
//! and the algebraic identities of the observables.

use serde::Serialize;

use crate::dynamics::{
    occupations, uncertainty_product, uncertainty_product_expanded, CoherentAmplitude,
};
use crate::error::Result;
use crate::model::{CavityParams, Truncation};
use crate::oracle::{initial_state, oracle_compare, DressedNormalMap, Evolver};
use crate::spectrum::Spectrum;

/// Outcome of one named check.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub max_deviation: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: &str, max_deviation: f64, threshold: f64) -> Self {
        Check {
            name: name.to_string(),
            max_deviation,
            threshold,
            pass: max_deviation <= threshold,
        }
    }
}

/// Bundle of check outcomes.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl CheckReport {
    fn from_checks(checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        CheckReport { checks, pass }
    }

    /// Names of failing checks, comma separated.
    pub fn failing(&self) -> String {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Orthonormality of the transformation matrix of one spectrum.
pub fn orthonormality_checks(spectrum: &Spectrum) -> Vec<Check> {
    let rows = spectrum.k_modes().min(64) + 1;
    vec![
        Check::new(
            "column-normalization",
            spectrum.column_norm_deviation(),
            1e-10,
        ),
        Check::new(
            "row-orthonormality",
            spectrum.row_orthonormality_deviation(rows),
            1e-8,
        ),
    ]
}

/// Run the default check suite at the given truncation.
pub fn run_default_checks(
    params: &CavityParams,
    k_modes: usize,
    beta: f64,
    lambda: &CoherentAmplitude,
) -> Result<CheckReport> {
    let truncation = Truncation::full(k_modes)?;
    let exact = Spectrum::exact(params, &truncation)?;
    let dense = Spectrum::dense_oracle(params, k_modes)?;

    let mut checks = orthonormality_checks(&exact);

    // secular roots vs dense eigenvalues, matched truncation
    let freq_dev = exact
        .omega
        .iter()
        .zip(&dense.omega)
        .map(|(a, b)| (a - b).abs() / b)
        .fold(0.0, f64::max);
    checks.push(Check::new("eigenfrequency-crossval", freq_dev, 1e-8));

    // closed-form elements vs dense eigenvectors, sign-aligned
    let mut element_dev = 0.0_f64;
    for r in 0..exact.normal_modes() {
        for mu in 0..=k_modes {
            element_dev = element_dev.max((exact.element(mu, r) - dense.element(mu, r)).abs());
        }
    }
    checks.push(Check::new("element-crossval", element_dev, 1e-8));

    // analytic observables vs covariance oracle
    let times: Vec<f64> = (0..25).map(|i| 0.4 * i as f64).collect();
    let report = oracle_compare(params, lambda, beta, k_modes, &times, 1e-8)?;
    checks.push(Check::new(
        "oracle-variances",
        report.max_relative_deviation,
        report.threshold,
    ));

    // energy conservation and Robertson bound along the evolution
    let thermal = occupations(params, beta, k_modes)?;
    let state0 = initial_state(params, &exact, lambda, &thermal)?;
    let evolver = Evolver::new(DressedNormalMap::new(params, &exact)?, &exact);
    let e0 = evolver.mean_energy(&state0);
    let mut energy_dev = 0.0_f64;
    let mut robertson_violation = 0.0_f64;
    for &t in &[1.0, 10.0, 100.0] {
        let state = evolver.evolve(&state0, t);
        energy_dev = energy_dev.max((evolver.mean_energy(&state) - e0).abs() / e0);
        robertson_violation =
            robertson_violation.max(-state.robertson_margin(params.hbar()).min(0.0));
    }
    checks.push(Check::new("energy-conservation", energy_dev, 1e-10));
    checks.push(Check::new("robertson-bound", robertson_violation, 1e-12));
    checks.push(Check::new(
        "symplectic-map",
        evolver.map().symplectic_deviation(),
        1e-10,
    ));

    // the two algebraic routes to the uncertainty product
    let mut forms_dev = 0.0_f64;
    for &t in &[0.0, 1.1, 2.3, 4.7] {
        let a = uncertainty_product(params, &exact, &thermal, t)?;
        let b = uncertainty_product_expanded(params, &exact, &thermal, t)?;
        forms_dev = forms_dev.max((a - b).abs());
    }
    checks.push(Check::new("uncertainty-forms", forms_dev, 1e-10));

    Ok(CheckReport::from_checks(checks))
}
