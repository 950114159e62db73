use std::sync::Arc;

use serde::Serialize;

use super::fd::{fd_eigenvalues, EigenProblem};
use crate::algebra::{coefficients, DeformationParams, ModelSpec, Rep};
use crate::error::{Error, Result};
use crate::liouville::{to_potential, TransformResult};
use crate::solutions::solve;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelCheck {
    pub n: usize,
    pub closed: f64,
    pub oracle: f64,
    pub rel_err: f64,
    pub error_estimate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub model: String,
    pub rep: String,
    pub tau: f64,
    pub grid_sizes: Vec<usize>,
    pub levels: Vec<LevelCheck>,
}

impl SpectrumReport {
    pub fn max_rel_err(&self) -> f64 {
        self.levels.iter().map(|l| l.rel_err).fold(0.0, f64::max)
    }
}

/// The potential problem of `(model, rep)` with a real potential, ready for
/// [`fd_eigenvalues`].
pub fn eigen_problem(model: ModelSpec, rep: Rep, params: DeformationParams, grid_size: usize) -> Result<EigenProblem> {
    let tr = to_potential(coefficients(model, rep, params)?)?;
    if tr.energy_sign < 0.0 {
        return Err(Error::NonPhysical);
    }
    check_real(&tr)?;
    let domain = tr.q_domain;
    let singular = domain.lo.is_finite() || domain.hi.is_finite();
    let shared = Arc::new(tr);
    let potential = Arc::new(move |q: f64| match shared.potential(q) {
        Ok(v) => v.re,
        Err(_) => f64::NAN,
    });
    let mut problem = EigenProblem::new(potential, domain, grid_size);
    problem.singular_endpoints = singular;
    Ok(problem)
}

fn check_real(tr: &TransformResult) -> Result<()> {
    let dom = tr.p_domain;
    let (lo, hi) = if dom.is_bounded() {
        (dom.lo, dom.hi)
    } else if dom.lo.is_finite() {
        (dom.lo, dom.lo + 10.0)
    } else {
        (-5.0, 5.0)
    };
    for j in 1..64 {
        let t = lo + (hi - lo) * j as f64 / 64.0;
        let v = tr.potential_at_p(t);
        if v.im.abs() > 1e-9 * (1.0 + v.re.abs()) {
            return Err(Error::ComplexSpectrum);
        }
    }
    Ok(())
}

/// Closed-form energies against the finite-difference oracle on the same
/// potential problem.
pub fn verify_spectrum(
    model: ModelSpec,
    rep: Rep,
    params: DeformationParams,
    count: usize,
    grid_size: usize,
) -> Result<SpectrumReport> {
    let sol = solve(model, rep, params)?;
    let closed = sol.energies(count)?;
    if closed.iter().any(|e| e.im != 0.0) {
        return Err(Error::ComplexSpectrum);
    }
    let problem = eigen_problem(model, rep, params, grid_size)?;
    let fd = fd_eigenvalues(&problem, count)?;
    let levels = closed
        .iter()
        .zip(fd.eigenvalues.iter().zip(&fd.error_estimates))
        .enumerate()
        .map(|(n, (c, (o, err)))| LevelCheck {
            n,
            closed: c.re,
            oracle: *o,
            rel_err: (o - c.re).abs() / c.re.abs().max(1e-300),
            error_estimate: *err,
        })
        .collect();
    Ok(SpectrumReport {
        model: model.kind().label().to_string(),
        rep: rep.label().to_string(),
        tau: params.tau,
        grid_sizes: fd.grid_sizes,
        levels,
    })
}
