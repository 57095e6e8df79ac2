//! Bracketed root finding on the secular function, one root per branch.

use crate::error::{Error, Result};
use crate::model::{CavityParams, Truncation};

use super::secular::{Secular, SumKind};

/// A converged root, kept in branch-local form `x = branch + offset` so that
/// downstream element formulas can evaluate `k^2 - x^2` without cancellation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BranchRoot {
    pub branch: usize,
    pub offset: f64,
}

impl BranchRoot {
    pub fn x(&self) -> f64 {
        self.branch as f64 + self.offset
    }
}

/// Normal-mode frequencies of the system truncated to
/// `truncation.k_modes()` field modes: the lowest `truncation.normal_modes()`
/// roots of the truncated secular equation, ascending, each converged to a
/// relative `1e-12` or better.
pub fn eigenfrequencies(params: &CavityParams, truncation: &Truncation) -> Result<Vec<f64>> {
    let roots = branch_roots(params, truncation)?;
    Ok(roots.iter().map(|r| r.x() * params.delta_omega()).collect())
}

/// Root of the continuum secular equation in the given branch.
pub fn continuum_root(params: &CavityParams, branch: usize) -> Result<f64> {
    let sec = Secular::new(params, SumKind::Continuum);
    let root = branch_root(&sec, branch)?;
    Ok(root.x() * params.delta_omega())
}

pub(crate) fn branch_roots(
    params: &CavityParams,
    truncation: &Truncation,
) -> Result<Vec<BranchRoot>> {
    let sec = Secular::new(params, SumKind::Truncated(truncation.k_modes()));
    (0..truncation.normal_modes())
        .map(|l| branch_root(&sec, l))
        .collect()
}

/// Locate the unique root in branch `l`: bracket against the branch poles,
/// bisect to a tight relative bracket, then polish with guarded Newton.
pub(crate) fn branch_root(sec: &Secular, l: usize) -> Result<BranchRoot> {
    if let Some(n) = sec.branch_count() {
        if l >= n {
            return Err(Error::Bracketing { branch: l });
        }
    }

    // Left edge: F -> +inf at the pole (or F(0) = wbar^2 > 0 for branch 0),
    // so walk toward the pole until the function is positive.
    let est = if l == 0 {
        0.25
    } else {
        (sec.coupling / l as f64).min(0.25)
    };
    let mut a = est;
    let mut fa = sec.eval(l, a);
    let mut tries = 0;
    while fa <= 0.0 {
        a *= 0.5;
        if a < 1e-300 || tries > 1100 {
            return Err(Error::Bracketing { branch: l });
        }
        fa = sec.eval(l, a);
        tries += 1;
    }

    // Right edge: F -> -inf at the next pole; the top truncated branch has no
    // right pole, so expand until the quadratic fall-off wins.
    let mut b;
    let mut fb;
    if sec.has_right_pole(l) {
        b = 1.0 - 1e-9;
        fb = sec.eval(l, b);
        tries = 0;
        while fb >= 0.0 {
            b = 1.0 - (1.0 - b) * 0.5;
            if 1.0 - b < 1e-15 || tries > 60 {
                return Err(Error::Bracketing { branch: l });
            }
            fb = sec.eval(l, b);
            tries += 1;
        }
    } else {
        // x^2 ~ wbar^2 + 2 delta K bounds the detached top root
        let k = l as f64;
        let top = (sec.w_bar * sec.w_bar + 2.0 * sec.coupling * k + (k + 1.0) * (k + 1.0)).sqrt();
        b = (top - k).max(1.0);
        fb = sec.eval(l, b);
        tries = 0;
        while fb >= 0.0 {
            b *= 2.0;
            if tries > 60 {
                return Err(Error::Bracketing { branch: l });
            }
            fb = sec.eval(l, b);
            tries += 1;
        }
    }
    debug_assert!(fa > 0.0 && fb < 0.0);

    // Bisect to a tight relative bracket.
    for _ in 0..200 {
        if b - a <= 1e-3 * b {
            break;
        }
        let m = 0.5 * (a + b);
        if sec.eval(l, m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }

    // Newton polish, falling back to bisection whenever the step leaves the
    // bracket. Convergence target: relative 1e-15 on x = l + eps.
    let mut eps = 0.5 * (a + b);
    let x_scale = l as f64 + b;
    for _ in 0..200 {
        let (f, df) = sec.eval_with_deriv(l, eps);
        if f > 0.0 {
            a = eps;
        } else if f < 0.0 {
            b = eps;
        } else {
            return Ok(BranchRoot {
                branch: l,
                offset: eps,
            });
        }
        let step = f / df;
        let mut next = eps - step;
        if !(next > a && next < b) {
            next = 0.5 * (a + b);
        }
        let done = (next - eps).abs() <= 1e-15 * x_scale || (b - a) <= 2e-16 * x_scale;
        eps = next;
        if done {
            return Ok(BranchRoot {
                branch: l,
                offset: eps,
            });
        }
    }
    Err(Error::RootConvergence { branch: l })
}
