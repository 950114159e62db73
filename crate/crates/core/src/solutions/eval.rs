//! Evaluation of states and metrics in log form, so that algebraic tails on
//! the real line and high-order zeros at cell walls stay finite.

use std::f64::consts::{FRAC_PI_4, LN_2};

use num_complex::Complex64;

use super::{ClosedFormSolution, SpecialParams};
use crate::algebra::Rep;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::liouville::{v_from_qw, Family};
use crate::specfun::jacobi::{jacobi_generic, jacobi_norm, JacobiSpec};
use crate::specfun::legendre::{gegenbauer, LegendreSpec};
use crate::specfun::quadrature::{double_exponential, Span};

/// Closed-form pieces of the coordinate `w(t)` in the real parametrization.
/// For the Legendre family `ln_1m + ln_1p = ln(1 - w²)`.
pub(crate) struct Atoms<const N: usize> {
    pub w: Jet<N>,
    pub ln_1m: Jet<N>,
    pub ln_1p: Jet<N>,
    /// `ln |dw/dt|`
    pub ln_dw: Jet<N>,
    /// logarithm of the gauge base
    pub ln_base: Jet<N>,
    /// `ln(f/k)`
    pub ln_shape: Jet<N>,
}

/// Distances `t - lo` and `hi - t` to the ends of a bounded domain, exact
/// near the walls.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Gaps<const N: usize> {
    pub lo: Jet<N>,
    pub hi: Jet<N>,
}

pub(crate) fn atoms<const N: usize>(jacobi: bool, rep: Rep, tc: f64, t: Jet<N>, gaps: Option<Gaps<N>>) -> Option<Atoms<N>> {
    let r = tc.sqrt();
    let u = t * r;
    let zero = Jet::constant(0.0);
    let ln_r = r.ln();
    Some(match (jacobi, rep) {
        (false, Rep::Pi1 | Rep::Pi2) => {
            let l = (u * u + 1.0).ln();
            let rr = (u * u + 1.0).sqrt();
            // 1 - w = (rr - u)/rr, 1 + w = (rr + u)/rr, written without cancellation
            let (ln_1m, ln_1p) = if u.re() >= 0.0 {
                let lp = (rr + u).ln();
                (-lp - l * 0.5, lp - l * 0.5)
            } else {
                let lm = (rr - u).ln();
                (lm - l * 0.5, -lm - l * 0.5)
            };
            Atoms {
                w: u / rr,
                ln_1m,
                ln_1p,
                ln_dw: l * (-1.5) + ln_r,
                ln_base: l,
                ln_shape: l * 2.0,
            }
        }
        (false, Rep::Pi3) => {
            let (sm, sp) = match gaps {
                Some(g) => ((g.hi * (0.5 * r)).sin(), (g.lo * (0.5 * r)).sin()),
                None => ((u * (-0.5) + FRAC_PI_4).sin(), (u * 0.5 + FRAC_PI_4).sin()),
            };
            let ln_1m = sm.ln() * 2.0 + LN_2;
            let ln_1p = sp.ln() * 2.0 + LN_2;
            let ln_cos = (ln_1m + ln_1p) * 0.5;
            Atoms {
                w: u.sin(),
                ln_1m,
                ln_1p,
                ln_dw: ln_cos + ln_r,
                ln_base: ln_cos,
                ln_shape: zero,
            }
        }
        (false, Rep::Pi4) => {
            let (ln_1m, ln_1p) = match gaps {
                Some(g) => ((g.hi * r).ln(), (g.lo * r).ln()),
                None => ((-u + 1.0).ln(), (u + 1.0).ln()),
            };
            Atoms {
                w: u,
                ln_1m,
                ln_1p,
                ln_dw: Jet::constant(ln_r),
                ln_base: ln_1m + ln_1p,
                ln_shape: ln_1m + ln_1p,
            }
        }
        (true, Rep::Pi1 | Rep::Pi2) => {
            let l = (u * u + 1.0).ln();
            let ln_u = u.ln();
            Atoms {
                w: (-(u * u) + 1.0) / (u * u + 1.0),
                ln_1m: ln_u * 2.0 - l + LN_2,
                ln_1p: -l + LN_2,
                ln_dw: ln_u - l * 2.0 + (4.0 * r).ln(),
                ln_base: l,
                ln_shape: l * 2.0,
            }
        }
        (true, Rep::Pi3) => {
            let ls = u.sin().ln();
            let lc = match gaps {
                Some(g) => (g.hi * r).sin().ln(),
                None => u.cos().ln(),
            };
            Atoms {
                w: (u * 2.0).cos(),
                ln_1m: ls * 2.0 + LN_2,
                ln_1p: lc * 2.0 + LN_2,
                ln_dw: ls + lc + (4.0 * r).ln(),
                ln_base: lc,
                ln_shape: zero,
            }
        }
        (true, Rep::Pi4) => {
            let ln_u = u.ln();
            let l1 = match gaps {
                Some(g) => (g.hi * r).ln() + (u + 1.0).ln(),
                None => (-u + 1.0).ln() + (u + 1.0).ln(),
            };
            Atoms {
                w: -(u * u * 2.0) + 1.0,
                ln_1m: ln_u * 2.0 + LN_2,
                ln_1p: l1 + LN_2,
                ln_dw: ln_u + (4.0 * r).ln(),
                ln_base: l1,
                ln_shape: l1,
            }
        }
        (_, Rep::Pi4Prime) => return None,
    })
}

/// Real special-function data of one level.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Level {
    /// `F = exp(ln_k + λ/2 ln(1 - w²)) C_n^{λ+½}(w)`
    Legendre { n: usize, lambda: f64, ln_k: f64 },
    Jacobi(JacobiSpec),
}

impl Level {
    /// `(ln of the weight part of F, polynomial part)` on jets.
    pub(crate) fn split<const N: usize>(&self, a: &Atoms<N>) -> (Jet<N>, Jet<N>) {
        match *self {
            Level::Legendre { n, lambda, ln_k } => {
                ((a.ln_1m + a.ln_1p) * (0.5 * lambda) + ln_k, gegenbauer(n, lambda + 0.5, a.w))
            }
            Level::Jacobi(spec) => (Jet::constant(0.0), jacobi_generic(spec, a.w)),
        }
    }

    /// `ln ϱ(w)`
    pub(crate) fn ln_weight<const N: usize>(&self, a: &Atoms<N>) -> Jet<N> {
        match *self {
            Level::Legendre { .. } => Jet::constant(0.0),
            Level::Jacobi(spec) => a.ln_1m * spec.a + a.ln_1p * spec.b,
        }
    }

    /// `∫ ϱ F² dw`
    pub(crate) fn norm(&self) -> Result<f64> {
        match *self {
            Level::Legendre { n, lambda, ln_k } => double_exponential(Span::Finite(-1.0, 1.0), 1e-13, |z: f64| {
                let c = gegenbauer(n, lambda + 0.5, z);
                (2.0 * ln_k + lambda * ((1.0 - z) * (1.0 + z)).ln()).exp() * c * c
            }),
            Level::Jacobi(spec) => jacobi_norm(spec),
        }
    }

    /// `F(w)` for real `w`.
    pub(crate) fn value(&self, w: f64) -> f64 {
        match *self {
            Level::Legendre { n, lambda, ln_k } => {
                (ln_k + 0.5 * lambda * ((1.0 - w) * (1.0 + w)).ln()).exp() * gegenbauer(n, lambda + 0.5, w)
            }
            Level::Jacobi(spec) => jacobi_generic(spec, w),
        }
    }
}

impl ClosedFormSolution {
    fn jacobi(&self) -> bool {
        matches!(self.special, SpecialParams::Jacobi { .. })
    }

    pub(crate) fn level(&self, n: usize) -> Result<Level> {
        if self.rep == Rep::Pi4Prime {
            return Err(Error::NonPhysical);
        }
        match self.special {
            SpecialParams::Legendre { .. } => {
                let mu = self.mu().ok_or(Error::CommutativeLimit)?;
                if mu.im.abs() > 1e-14 {
                    return Err(Error::ComplexSpectrum);
                }
                let lambda = -mu.re;
                // the divergent branch keeps the Gegenbauer form with unit prefactor
                let ln_k = if lambda >= 0.0 {
                    LegendreSpec::new(n, mu.re).ln_prefactor()
                } else {
                    0.0
                };
                Ok(Level::Legendre { n, lambda, ln_k })
            }
            SpecialParams::Jacobi { .. } => {
                let (a, b) = self.jacobi_ab().expect("jacobi family");
                if a.im.abs() > 1e-14 || b.im.abs() > 1e-14 {
                    return Err(Error::ComplexSpectrum);
                }
                Ok(Level::Jacobi(JacobiSpec::new(n, a.re, b.re)?))
            }
        }
    }

    pub(crate) fn atoms_at<const N: usize>(&self, t: Jet<N>) -> Result<Atoms<N>> {
        atoms(self.jacobi(), self.rep, self.params.tau_check(), t, None).ok_or(Error::NonPhysical)
    }

    /// As [`Self::atoms_at`], with the wall distances supplied by the caller.
    pub(crate) fn atoms_with_gaps<const N: usize>(&self, t: Jet<N>, gaps: Gaps<N>) -> Result<Atoms<N>> {
        atoms(self.jacobi(), self.rep, self.params.tau_check(), t, Some(gaps)).ok_or(Error::NonPhysical)
    }

    /// `ln ρ` from precomputed atoms.
    pub(crate) fn ln_metric_atoms<const N: usize>(&self, a: &Atoms<N>, level: &Level) -> Result<f64> {
        let lp = self.ln_prefactor(a, level)?;
        Ok((level.ln_weight(a) - lp * 2.0 + a.ln_dw).re())
    }

    fn ln_base_ref(&self) -> Result<f64> {
        let p0 = self.transform()?.p0;
        Ok(self.atoms_at(Jet::<1>::variable(p0))?.ln_base.re())
    }

    /// `ln(e^χ |v|)` on jets, `v` as in the generic construction.
    pub(crate) fn ln_prefactor<const N: usize>(&self, a: &Atoms<N>, level: &Level) -> Result<Jet<N>> {
        let tr = self.transform()?;
        let ln_qt = a.ln_shape * (-0.5) - 0.5 * tr_k(tr).ln();
        let ln_v_tail = match *level {
            Level::Legendre { .. } => (a.ln_1m + a.ln_1p) * 0.5,
            Level::Jacobi(spec) => a.ln_1m * (0.5 * (1.0 + spec.a)) + a.ln_1p * (0.5 * (1.0 + spec.b)),
        };
        let ln_v = a.ln_dw * (-0.5) + ln_qt * 0.5 + ln_v_tail;
        Ok((a.ln_base - self.ln_base_ref()?) * self.gauge + ln_v)
    }

    // false on the boundary and far out on the real line, where ψ is zero to
    // working precision
    pub(crate) fn check_inside(&self, t: f64) -> Result<bool> {
        let dom = self.transform()?.p_domain;
        if t < dom.lo || t > dom.hi || t.is_nan() {
            return Err(Error::DomainError(t));
        }
        let far = (t * self.params.tau_check().sqrt()).abs() > 1e60;
        Ok(t > dom.lo && t < dom.hi && !far)
    }

    /// `ln ρ(t)`, with the constant and phase of the generic formula dropped.
    pub fn ln_metric(&self, t: f64) -> Result<f64> {
        let level = self.level(0)?;
        let a = self.atoms_at(Jet::<1>::variable(t))?;
        self.ln_metric_atoms(&a, &level)
    }

    /// Metric `ρ(t) = ϱ e^{-2χ} |v|^{-2} |dw/dt|`, positive on the interior.
    pub fn metric(&self, t: f64) -> Result<f64> {
        if !self.check_inside(t)? {
            return Ok(0.0);
        }
        Ok(self.ln_metric(t)?.exp())
    }

    /// `N_n = ∫ ϱ F_n² dw`
    pub fn norm(&self, n: usize) -> Result<f64> {
        self.level(n)?.norm()
    }

    /// `(ln |ψ_n(t)|, sign)` of the normalized state.
    pub fn ln_psi(&self, n: usize, norm: f64, t: f64) -> Result<(f64, f64)> {
        let level = self.level(n)?;
        let a = self.atoms_at(Jet::<1>::variable(t))?;
        let (lw, poly) = level.split(&a);
        let lp = self.ln_prefactor(&a, &level)?;
        let poly = poly.re();
        Ok(((lp + lw).re() + poly.abs().ln() - 0.5 * norm.ln(), poly.signum()))
    }

    /// Normalized eigenfunction `ψ_n` at points of the real parametrization.
    pub fn wavefunction(&self, n: usize, ts: &[f64]) -> Result<Vec<Complex64>> {
        let norm = self.norm(n)?;
        ts.iter()
            .map(|&t| {
                if !self.check_inside(t)? {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                let (l, s) = self.ln_psi(n, norm, t)?;
                Ok(Complex64::new(s * l.exp(), 0.0))
            })
            .collect()
    }

    /// `⟨ψ_n|ρ ψ_m⟩` by quadrature in the native variable.
    pub fn overlap(&self, n: usize, m: usize) -> Result<f64> {
        let (nn, nm) = (self.norm(n)?, self.norm(m)?);
        let span = self.span()?;
        double_exponential(span, 1e-12, |t: f64| {
            let eval = || -> Result<f64> {
                if !self.check_inside(t)? {
                    return Ok(0.0);
                }
                let (ln_n, s_n) = self.ln_psi(n, nn, t)?;
                let (ln_m, s_m) = self.ln_psi(m, nm, t)?;
                Ok(s_n * s_m * (self.ln_metric(t)? + ln_n + ln_m).exp())
            };
            eval().unwrap_or(f64::NAN)
        })
    }

    /// Metric-weighted Gram matrix of the first `count` states.
    pub fn gram(&self, count: usize) -> Result<Vec<Vec<f64>>> {
        let mut g = vec![vec![0.0; count]; count];
        for n in 0..count {
            for m in n..count {
                let v = self.overlap(n, m)?;
                g[n][m] = v;
                g[m][n] = v;
            }
        }
        Ok(g)
    }

    /// `ψ = e^χ v(q) F(w(q))` assembled from the transform: χ by quadrature,
    /// `v` from the ansatz, `F` at `w(q(t))`. Unnormalized.
    pub fn psi_generic(&self, n: usize, t: f64) -> Result<Complex64> {
        let tr = self.transform()?;
        let ansatz = self.ansatz(n)?;
        let level = self.level(n)?;
        let q = tr.q_of_p(t);
        let w = ansatz.w.eval(q);
        let f = match ansatz.family {
            Family::Legendre { .. } | Family::Jacobi { .. } => level.value(w.re),
        };
        Ok(v_from_qw(&ansatz, q)? * tr.chi(t)?.exp() * f)
    }

    /// Metric `ϱ e^{-2 Re χ} |v|^{-2} dw/dp` assembled from the transform.
    pub fn metric_generic(&self, t: f64) -> Result<Complex64> {
        let tr = self.transform()?;
        let ansatz = self.ansatz(0)?;
        let q = tr.q_of_p(t);
        let wj = ansatz.w.jet(Jet::<2>::variable(q));
        let w = wj.value();
        let dw_dp = wj.derivative_at(1) * tr.dq_dp(t);
        let rho_w = match ansatz.family {
            Family::Legendre { .. } => Complex64::new(1.0, 0.0),
            Family::Jacobi { a, b, .. } => (-w + 1.0).powf(a) * (w + 1.0).powf(b),
        };
        let v = v_from_qw(&ansatz, q)?;
        Ok(rho_w * (-2.0 * tr.chi(t)?).exp() / v.norm_sqr() * dw_dp)
    }
}

fn tr_k(tr: &crate::liouville::TransformResult) -> f64 {
    tr.fgh.at(0.0).f.re * tr.energy_sign
}
