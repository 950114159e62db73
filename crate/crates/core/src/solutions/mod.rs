//! Exact spectra, eigenfunctions, metrics and norms for every
//! (model, representation) pair.
//!
//! HO and Swanson states are Ferrers functions `P_{n-μ}^{μ}(w)` with
//! `w = sin(√c q)`; Pöschl-Teller states are Jacobi polynomials
//! `P_n^{(a,b)}(w)` with `w = cos(√c q + π/2)`, `q` measured from the middle
//! of the cell. The gauge factor `e^χ` is a power of one base function per
//! representation; its exponent is read off the coefficient table.

mod eval;
pub(crate) use eval::{Gaps, Level};
pub mod stated;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{coefficients, DeformationParams, ModelSpec, Rep};
use crate::error::{Error, Result};
use crate::liouville::{self, Family, FactorizationAnsatz, TransformResult, WMap};
use crate::specfun::quadrature::Span;


/// Outcome of the reality / boundedness analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Physicality {
    Physical,
    UnboundedBelow,
    ComplexSpectrum,
}

/// Which root of the order equation is used. `Normalizable` is `μ₋` for the
/// Legendre family and `(a₊, b₊)` for the Jacobi family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Normalizable,
    Opposite,
}

/// Constants of the special-function ansatz.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpecialParams {
    /// `E_n = c(n² + n + ½) + (2n + 1)·cσ` with `σ = -μ₋`; `cσ` stays finite as τ → 0.
    Legendre { c: f64, c_sigma: Complex64 },
    Jacobi { c: f64, a: Complex64, b: Complex64 },
}

/// Swanson reality discriminant `D = 4(ħ²ω² - 4αβ) + τΩ(τΩ - 4ħω)`.
pub fn swanson_discriminant(alpha: f64, beta: f64, params: &DeformationParams) -> f64 {
    let hw = params.hbar * params.omega;
    let big = alpha + beta + hw;
    let t = params.tau * big;
    4.0 * (hw * hw - 4.0 * alpha * beta) + t * (t - 4.0 * hw)
}

/// Reality region of the Pöschl-Teller model: `α > -τ/4` and `β > -τ²/4`.
pub fn pt_model_reality(alpha: f64, beta: f64, tau: f64) -> bool {
    alpha > -tau / 4.0 && beta > -tau * tau / 4.0
}

pub fn classify_physical(model: ModelSpec, rep: Rep, params: &DeformationParams) -> Physicality {
    if rep == Rep::Pi4Prime {
        return Physicality::UnboundedBelow;
    }
    match model {
        ModelSpec::HarmonicOscillator => Physicality::Physical,
        ModelSpec::Swanson { alpha, beta } => {
            if swanson_discriminant(alpha, beta, params) >= 0.0 {
                Physicality::Physical
            } else {
                Physicality::ComplexSpectrum
            }
        }
        ModelSpec::PoschlTeller { alpha, beta } => {
            if pt_model_reality(alpha, beta, params.tau) {
                Physicality::Physical
            } else {
                Physicality::ComplexSpectrum
            }
        }
    }
}

pub fn special_params(model: ModelSpec, params: &DeformationParams) -> SpecialParams {
    let hw = params.hbar * params.omega;
    let tau = params.tau;
    match model {
        ModelSpec::HarmonicOscillator => SpecialParams::Legendre {
            c: 0.5 * tau * hw,
            c_sigma: Complex64::new(0.5 * hw * (1.0 + 0.25 * tau * tau).sqrt(), 0.0),
        },
        ModelSpec::Swanson { alpha, beta } => {
            let big = alpha + beta + hw;
            let d = swanson_discriminant(alpha, beta, params);
            SpecialParams::Legendre {
                c: 0.5 * tau * big,
                c_sigma: Complex64::new(d, 0.0).sqrt() / 4.0,
            }
        }
        ModelSpec::PoschlTeller { alpha, beta } => SpecialParams::Jacobi {
            c: 2.0 * tau * hw,
            a: Complex64::new(1.0 + 4.0 * alpha / tau, 0.0).sqrt() * 0.5,
            b: Complex64::new(1.0 + 4.0 * beta / (tau * tau), 0.0).sqrt() * 0.5,
        },
    }
}

/// Closed-form solution of one (model, representation) pair.
#[derive(Clone, Debug)]
pub struct ClosedFormSolution {
    pub model: ModelSpec,
    pub rep: Rep,
    pub params: DeformationParams,
    pub physicality: Physicality,
    pub branch: Branch,
    pub special: SpecialParams,
    transform: Option<TransformResult>,
    gauge: f64,
}

pub fn solve(model: ModelSpec, rep: Rep, params: DeformationParams) -> Result<ClosedFormSolution> {
    solve_with_branch(model, rep, params, Branch::Normalizable)
}

pub fn solve_with_branch(model: ModelSpec, rep: Rep, params: DeformationParams, branch: Branch) -> Result<ClosedFormSolution> {
    model.validate(&params)?;
    let (transform, gauge) = if params.tau > 0.0 {
        let tr = liouville::to_potential(coefficients(model, rep, params)?)?;
        let g = if rep == Rep::Pi4Prime { 0.0 } else { gauge_exponent(&tr)? };
        (Some(tr), g)
    } else {
        (None, 0.0)
    };
    Ok(ClosedFormSolution {
        model,
        rep,
        params,
        physicality: classify_physical(model, rep, &params),
        branch,
        special: special_params(model, &params),
        transform,
        gauge,
    })
}

/// `d ln(base)/dt` for the gauge base of each representation.
fn dln_base(rep: Rep, tc: f64, t: f64) -> f64 {
    match rep {
        Rep::Pi1 | Rep::Pi2 | Rep::Pi4Prime => 2.0 * tc * t / (1.0 + tc * t * t),
        Rep::Pi3 => -tc.sqrt() * (tc.sqrt() * t).tan(),
        Rep::Pi4 => -2.0 * tc * t / (1.0 - tc * t * t),
    }
}

pub(crate) fn probe_points(tr: &TransformResult) -> [f64; 2] {
    let dom = tr.p_domain;
    let scale = 1.0 / tr.fgh.params.tau_check().sqrt();
    if dom.is_bounded() {
        [dom.lo + 0.29 * dom.width(), dom.lo + 0.71 * dom.width()]
    } else if dom.lo.is_finite() {
        [dom.lo + 0.6 * scale, dom.lo + 2.3 * scale]
    } else {
        [0.6 * scale, -2.3 * scale]
    }
}

// χ' = κ·(ln base)' must hold identically
fn gauge_exponent(tr: &TransformResult) -> Result<f64> {
    let tc = tr.fgh.params.tau_check();
    let kappa_at = |t: f64| {
        let v = tr.fgh.at(t);
        let chi1 = ((v.df + v.g * 2.0) / (v.f * 4.0)).re;
        chi1 / dln_base(tr.fgh.rep, tc, t)
    };
    let [t1, t2] = probe_points(tr);
    let (k1, k2) = (kappa_at(t1), kappa_at(t2));
    if (k1 - k2).abs() > 1e-9 * (1.0 + k1.abs()) {
        return Err(Error::InvalidParameter(format!(
            "gauge factor of {:?} is not a power of its base ({k1} vs {k2})",
            tr.fgh.rep
        )));
    }
    Ok(k1)
}

impl ClosedFormSolution {
    pub fn physical(&self) -> bool {
        self.physicality == Physicality::Physical
    }

    pub fn transform(&self) -> Result<&TransformResult> {
        self.transform.as_ref().ok_or(Error::CommutativeLimit)
    }

    /// Exponent `κ` in `e^χ = (base/base(p0))^κ`.
    pub fn gauge_exponent(&self) -> f64 {
        self.gauge
    }

    fn branch_sign(&self) -> f64 {
        match self.branch {
            Branch::Normalizable => 1.0,
            Branch::Opposite => -1.0,
        }
    }

    /// Order `μ` of the Ferrers function (Legendre family).
    pub fn mu(&self) -> Option<Complex64> {
        match self.special {
            SpecialParams::Legendre { c, c_sigma } if c > 0.0 => {
                if self.rep == Rep::Pi4Prime {
                    return self.hyperbolic_constants().ok().map(|(_, _, mu)| mu);
                }
                Some(-c_sigma / c * self.branch_sign())
            }
            _ => None,
        }
    }

    /// `(a, b)` of the Jacobi family on the selected branch.
    pub fn jacobi_ab(&self) -> Option<(Complex64, Complex64)> {
        match self.special {
            SpecialParams::Jacobi { a, b, .. } => Some((a * self.branch_sign(), b * self.branch_sign())),
            _ => None,
        }
    }

    pub fn c(&self) -> f64 {
        match self.special {
            SpecialParams::Legendre { c, .. } | SpecialParams::Jacobi { c, .. } => c,
        }
    }

    // V = V0 + A tanh²(√c q) for the hyperbolic Π₄′ problem; μ² = ¼ + A/c
    fn hyperbolic_constants(&self) -> Result<(f64, f64, Complex64)> {
        let tr = self.transform()?;
        let c = self.c();
        let tc = self.params.tau_check();
        let v0 = tr.potential_at_p(0.0).re;
        let v1 = tr.potential_at_p(1.0 / tc.sqrt()).re;
        // tanh²(asinh 1) = 1/2
        let amp = 2.0 * (v1 - v0);
        let mu = -Complex64::new(0.25 + amp / c, 0.0).sqrt();
        Ok((v0, amp, mu))
    }

    /// Energy of level `n`. For Π₄′ this is the formal, unbounded branch.
    pub fn energy(&self, n: usize) -> Result<Complex64> {
        let nf = n as f64;
        match self.special {
            SpecialParams::Legendre { c, c_sigma } => {
                if self.rep == Rep::Pi4Prime {
                    let (v0, amp, mu) = self.hyperbolic_constants()?;
                    let nu = -mu + nf;
                    return Ok(-(nu + 0.5) * (nu + 0.5) * c + v0 + amp);
                }
                Ok(c_sigma * ((2.0 * nf + 1.0) * self.branch_sign()) + c * (nf * nf + nf + 0.5))
            }
            SpecialParams::Jacobi { c, .. } => {
                if self.rep == Rep::Pi4Prime {
                    return Err(Error::NonPhysical);
                }
                let (a, b) = self.jacobi_ab().expect("jacobi family");
                let s = a + b + 1.0 + 2.0 * nf;
                Ok(s * s * (c / 4.0))
            }
        }
    }

    pub fn energies(&self, count: usize) -> Result<Vec<Complex64>> {
        (0..count).map(|n| self.energy(n)).collect()
    }

    /// Factorization ansatz of level `n`; its master identity holds with `energy(n)`.
    pub fn ansatz(&self, n: usize) -> Result<FactorizationAnsatz> {
        let c = self.c();
        if c <= 0.0 {
            return Err(Error::CommutativeLimit);
        }
        let sqrt_c = c.sqrt();
        match self.special {
            SpecialParams::Legendre { .. } => {
                let mu = self.mu().ok_or(Error::CommutativeLimit)?;
                if mu.im.abs() > 1e-14 {
                    return Err(Error::ComplexSpectrum);
                }
                let w = if self.rep == Rep::Pi4Prime {
                    WMap::ISinh { sqrt_c }
                } else {
                    WMap::Sin { sqrt_c, phase: 0.0 }
                };
                Ok(FactorizationAnsatz {
                    family: Family::Legendre { n, mu: mu.re },
                    w,
                })
            }
            SpecialParams::Jacobi { .. } => {
                if self.rep == Rep::Pi4Prime {
                    return Err(Error::NonPhysical);
                }
                let (a, b) = self.jacobi_ab().expect("jacobi family");
                if a.im.abs() > 1e-14 || b.im.abs() > 1e-14 {
                    return Err(Error::ComplexSpectrum);
                }
                Ok(FactorizationAnsatz {
                    family: Family::Jacobi { n, a: a.re, b: b.re },
                    w: WMap::Cos {
                        sqrt_c,
                        phase: std::f64::consts::FRAC_PI_2,
                    },
                })
            }
        }
    }

    /// Master-identity residual of level `n` on `count` interior points.
    pub fn master_residual(&self, n: usize, count: usize) -> Result<f64> {
        let tr = self.transform()?;
        let ansatz = self.ansatz(n)?;
        let e = self.energy(n)?;
        if e.im.abs() > 1e-12 * e.norm() {
            return Err(Error::ComplexSpectrum);
        }
        let grid = liouville::interior_grid(tr.q_domain, count, 6.0 / self.c().sqrt());
        liouville::master_residual(&ansatz, tr, e.re, &grid)
    }

    /// Quadrature span of the momentum (or real segment) variable.
    pub fn span(&self) -> Result<Span> {
        let dom = self.transform()?.p_domain;
        Ok(match (dom.lo.is_finite(), dom.hi.is_finite()) {
            (true, true) => Span::Finite(dom.lo, dom.hi),
            (true, false) => Span::UpperHalf(dom.lo),
            _ => Span::Whole,
        })
    }
}
