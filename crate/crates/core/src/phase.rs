//! PT phase of the Swanson model: the reality discriminant, its zero set
//! β(α) for fixed τ, and scans over α for several τ.
//!
//! For τ > 0 the discriminant is a quadratic in β with positive leading
//! coefficient, so the spectrum is complex strictly between the two roots.
//! Curves report the lower root, which separates the unbroken region below
//! from the broken region above on the usual scan windows.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::DeformationParams;
use crate::error::{Error, Result};
pub use crate::solutions::pt_model_reality;

/// Largest |D| accepted for an emitted boundary point.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// `D = 4(ħ²ω² - 4αβ) + τΩ(τΩ - 4ħω)` with `Ω = α + β + ħω`.
pub fn discriminant(alpha: f64, beta: f64, params: &DeformationParams) -> f64 {
    crate::solutions::swanson_discriminant(alpha, beta, params)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Unbroken,
    Broken,
}

pub fn classify(alpha: f64, beta: f64, params: &DeformationParams) -> Phase {
    if discriminant(alpha, beta, params) >= 0.0 {
        Phase::Unbroken
    } else {
        Phase::Broken
    }
}

/// Real β with `D(α, β) = 0` and `Ω > 0`, ascending.
pub fn boundary_beta(alpha: f64, params: &DeformationParams) -> Result<Vec<f64>> {
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha = {alpha}")));
    }
    let hw = params.hbar * params.omega;
    let tau = params.tau;
    let mut roots = Vec::with_capacity(2);
    if tau == 0.0 {
        if alpha == 0.0 {
            return Err(Error::NoRoot);
        }
        roots.push(hw * hw / (4.0 * alpha));
    } else {
        // D(β) = a β² + b β + c
        let s = alpha + hw;
        let a = tau * tau;
        let b = 2.0 * tau * tau * s - 16.0 * alpha - 4.0 * tau * hw;
        let c = 4.0 * hw * hw + tau * tau * s * s - 4.0 * tau * hw * s;
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            return Err(Error::NoRoot);
        }
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        if q == 0.0 {
            roots.push(0.0);
        } else {
            roots.push(q / a);
            roots.push(c / q);
        }
        for r in roots.iter_mut() {
            *r = polish(alpha, *r, params);
        }
    }
    roots.retain(|&b| alpha + b + hw > 0.0);
    roots.sort_by(f64::total_cmp);
    roots.dedup();
    if roots.is_empty() {
        return Err(Error::NoRoot);
    }
    Ok(roots)
}

fn polish(alpha: f64, mut beta: f64, params: &DeformationParams) -> f64 {
    let hw = params.hbar * params.omega;
    let tau = params.tau;
    for _ in 0..4 {
        let d = discriminant(alpha, beta, params);
        let big = alpha + beta + hw;
        let slope = -16.0 * alpha + 2.0 * tau * tau * big - 4.0 * tau * hw;
        if d == 0.0 || slope == 0.0 {
            break;
        }
        let next = beta - d / slope;
        if discriminant(alpha, next, params).abs() >= d.abs() {
            break;
        }
        beta = next;
    }
    beta
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseQuery {
    pub params: DeformationParams,
    /// `(lo, hi, step)`; `hi` is included when it lies on the grid.
    pub alpha_range: (f64, f64, f64),
    pub tau_list: Vec<f64>,
}

impl PhaseQuery {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi, step) = self.alpha_range;
        if !(lo < hi) || !(step > 0.0) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidParameter(format!("alpha range {:?}", self.alpha_range)));
        }
        if self.tau_list.is_empty() || self.tau_list.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) {
            return Err(Error::InvalidParameter(format!("tau list {:?}", self.tau_list)));
        }
        Ok(())
    }

    pub fn alphas(&self) -> Vec<f64> {
        let (lo, hi, step) = self.alpha_range;
        let count = ((hi - lo) / step * (1.0 + 1e-12)).floor() as usize;
        (0..=count).map(|k| lo + k as f64 * step).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseCurve {
    pub tau: f64,
    /// `(α, β)` on the lower branch.
    pub points: Vec<(f64, f64)>,
    /// `(α, β)` of the second root where it passes the same check; near
    /// τ = 0 this root grows like 16α/τ² and `D` there is not resolvable.
    pub upper: Vec<(f64, f64)>,
    /// α values without an admissible root.
    pub no_root: Vec<f64>,
    pub branch: &'static str,
    pub region_above: &'static str,
    pub region_below: &'static str,
    /// β along the lower branch never changes direction.
    pub monotone: bool,
}

/// One boundary curve per τ; every point is re-checked against the
/// discriminant and for a sign change across it.
pub fn scan(query: &PhaseQuery) -> Result<Vec<PhaseCurve>> {
    query.validate()?;
    let alphas = query.alphas();
    query
        .tau_list
        .par_iter()
        .map(|&tau| {
            let params = DeformationParams { tau, ..query.params };
            params.validate()?;
            let found: Vec<(f64, Result<Vec<f64>>)> =
                alphas.par_iter().map(|&a| (a, boundary_beta(a, &params))).collect();
            let mut curve = PhaseCurve {
                tau,
                points: Vec::new(),
                upper: Vec::new(),
                no_root: Vec::new(),
                branch: "lower",
                region_above: "broken",
                region_below: "unbroken",
                monotone: true,
            };
            for (alpha, roots) in found {
                let roots = match roots {
                    Ok(r) => r,
                    Err(Error::NoRoot) => {
                        curve.no_root.push(alpha);
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                check_point(alpha, roots[0], &params)?;
                curve.points.push((alpha, roots[0]));
                if let Some(&b) = roots.get(1) {
                    if check_point(alpha, b, &params).is_ok() {
                        curve.upper.push((alpha, b));
                    }
                }
            }
            curve.monotone = is_monotone(&curve.points);
            Ok(curve)
        })
        .collect()
}

fn check_point(alpha: f64, beta: f64, params: &DeformationParams) -> Result<()> {
    let d = discriminant(alpha, beta, params);
    if d.abs() >= BOUNDARY_TOL {
        return Err(Error::ConvergenceFailure(format!("|D({alpha}, {beta})| = {d:e}")));
    }
    let h = 1e-6 * beta.abs().max(1e-3);
    let below = discriminant(alpha, beta - h, params);
    let above = discriminant(alpha, beta + h, params);
    if below * above > 0.0 {
        return Err(Error::ConvergenceFailure(format!("D keeps its sign across ({alpha}, {beta})")));
    }
    Ok(())
}

fn is_monotone(points: &[(f64, f64)]) -> bool {
    let steps: Vec<f64> = points.windows(2).map(|w| w[1].1 - w[0].1).collect();
    steps.iter().all(|d| *d <= 0.0) || steps.iter().all(|d| *d >= 0.0)
}
