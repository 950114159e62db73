use num_complex::Complex64;

use super::ops::rep_symbols;
use super::{DeformationParams, Interval, ModelSpec, Rep};
use crate::error::Result;
use crate::jet::Jet;

/// Coefficients of `-f ψ'' + g ψ' + h ψ = E ψ` for one (model, representation).
///
/// Two variables are available. The native momentum `p` reproduces the
/// tabulated closed forms (complex on the imaginary segment of Π₄). The real
/// parametrization `t` is `p` itself except for Π₄, where `p = i t`; there
/// `f → -f(it)`, `g → -i g(it)`, `h → h(it)` and the ODE stays real.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FghCoefficients {
    pub model: ModelSpec,
    pub rep: Rep,
    pub params: DeformationParams,
}

/// Values and analytic derivatives at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FghValues {
    pub f: Complex64,
    pub df: Complex64,
    pub ddf: Complex64,
    pub g: Complex64,
    pub dg: Complex64,
    pub h: Complex64,
}

pub fn coefficients(model: ModelSpec, rep: Rep, params: DeformationParams) -> Result<FghCoefficients> {
    model.validate(&params)?;
    Ok(FghCoefficients { model, rep, params })
}

pub(crate) fn tan_scaled<const N: usize>(p: Jet<N>, tc: f64) -> Jet<N> {
    if tc == 0.0 {
        p
    } else {
        let r = tc.sqrt();
        (p * r).tan() / r
    }
}

impl FghCoefficients {
    /// Domain of the real parametrization `t`.
    pub fn domain(&self) -> Interval {
        let full = self.rep.p_domain(&self.params).interval();
        match self.model {
            ModelSpec::PoschlTeller { .. } => Interval::new(0.0, full.hi),
            _ => full,
        }
    }

    /// Tabulated `[f, g, h]` in the native momentum variable.
    pub fn jets<const N: usize>(&self, p: Jet<N>) -> [Jet<N>; 3] {
        let DeformationParams {
            hbar,
            mass: m,
            omega: w,
            tau,
        } = self.params;
        let tc = self.params.tau_check();
        let s2 = p * p * tc + 1.0;
        let zero = Jet::constant(0.0);
        let c = |v: f64| Jet::<N>::constant(v);
        match (self.model, self.rep) {
            (_, Rep::Pi2) => {
                // ψ₁ = s ψ₂ with s = (1 + τ̌p²)^{1/2}: s'/s = τ̌p/s², s''/s = τ̌/s⁴
                let one = FghCoefficients { rep: Rep::Pi1, ..*self };
                let [f, g, h] = one.jets(p);
                let ds = p * tc / s2;
                let dds = c(tc) / (s2 * s2);
                [f, g - f * ds * 2.0, h + g * ds - f * dds]
            }
            (ModelSpec::HarmonicOscillator, rep) => {
                let k = 0.5 * m * w * w * hbar * hbar;
                match rep {
                    Rep::Pi1 => [s2 * s2 * k, p * s2 * (-tau * hbar * w), p * p / (2.0 * m)],
                    Rep::Pi3 => {
                        let t = tan_scaled(p, tc);
                        [c(k), zero, t * t / (2.0 * m)]
                    }
                    Rep::Pi4 => [
                        s2 * (-k),
                        p * (1.5 * tau * hbar * w),
                        -(p * p) / (s2 * (2.0 * m)) + 0.5 * tau * hbar * w,
                    ],
                    Rep::Pi4Prime => [
                        s2 * k,
                        p * (-1.5 * tau * hbar * w),
                        p * p / (s2 * (2.0 * m)) - 0.5 * tau * hbar * w,
                    ],
                    Rep::Pi2 => unreachable!(),
                }
            }
            (ModelSpec::Swanson { alpha, beta }, rep) => {
                let big = alpha + beta + hbar * w;
                let k = 0.5 * m * hbar * w * big;
                let kin = (hbar * w * (1.0 - tau) - alpha - beta) / (2.0 * m * hbar * w);
                let d = beta - alpha;
                match rep {
                    Rep::Pi1 => [
                        s2 * s2 * k,
                        p * s2 * (d - tau * big),
                        p * p * (-(tau * (alpha - beta + hbar * w) + alpha + beta - hbar * w) / (2.0 * m * hbar * w))
                            + d / 2.0,
                    ],
                    Rep::Pi3 => {
                        let t = tan_scaled(p, tc);
                        let tan2 = t * t * tc;
                        let sec2 = tan2 + 1.0;
                        let h = if tc == 0.0 {
                            // the tan²/τ term becomes p²/(mħω) in the limit
                            c(0.5 * d) + p * p * ((hbar * w - alpha - beta) / (2.0 * m * hbar * w))
                        } else {
                            sec2 * (0.5 * (d - hbar * w)) + tan2 * ((hbar * w - alpha - beta) / (2.0 * tau)) + 0.5 * hbar * w
                        };
                        [c(k), t * d, h]
                    }
                    Rep::Pi4 => {
                        let bracket = (alpha + beta - hbar * w + tau * (2.0 * d + hbar * w) + tau * tau * big) / (m * hbar * w);
                        [
                            s2 * (-k),
                            p * (d + 1.5 * tau * big),
                            (p * p * bracket + (d + tau * big)) / (s2 * 2.0),
                        ]
                    }
                    Rep::Pi4Prime => [
                        s2 * k,
                        p * (d - 1.5 * tau * big),
                        (p * p * kin + (p * p * (2.0 * tc) + 1.0) * (0.5 * d)) / s2 - 0.5 * tau * big,
                    ],
                    Rep::Pi2 => unreachable!(),
                }
            }
            (ModelSpec::PoschlTeller { alpha, beta }, rep) => {
                let k = 0.5 * m * w * w * hbar * hbar;
                let e0 = 0.5 * hbar * w * alpha + beta / (2.0 * m * tc);
                let inv = hbar * w * alpha / (2.0 * tc);
                match rep {
                    Rep::Pi1 => [
                        s2 * s2 * k,
                        p * s2 * (-tau * hbar * w),
                        s2 * (p * p * beta + alpha * m * hbar * w) / (p * p * (2.0 * m * tc)),
                    ],
                    Rep::Pi3 => {
                        let t = tan_scaled(p, tc) * tc.sqrt();
                        let sec2 = t * t + 1.0;
                        let csc2 = (t * t).recip() + 1.0;
                        [c(k), zero, sec2 * (beta / (2.0 * m * tc)) + csc2 * (0.5 * hbar * w * alpha)]
                    }
                    Rep::Pi4 => [
                        s2 * (-k),
                        p * (1.5 * tau * hbar * w),
                        -(p * p * beta) / (s2 * (2.0 * m)) - s2 * inv / (p * p) + 0.5 * tau * hbar * w + e0,
                    ],
                    Rep::Pi4Prime => [
                        s2 * k,
                        p * (-1.5 * tau * hbar * w),
                        p * p * beta / (s2 * (2.0 * m)) + s2 * inv / (p * p) - 0.5 * tau * hbar * w + e0,
                    ],
                    Rep::Pi2 => unreachable!(),
                }
            }
        }
    }

    /// `[f, g, h]` in the real parametrization.
    pub fn real_jets<const N: usize>(&self, t: Jet<N>) -> [Jet<N>; 3] {
        if self.rep.imaginary() {
            let i = Complex64::new(0.0, 1.0);
            let [f, g, h] = self.jets(t * i);
            [-f, g * (-i), h]
        } else {
            self.jets(t)
        }
    }

    /// Values and derivatives at a real-parametrization point.
    pub fn at(&self, t: f64) -> FghValues {
        Self::values(self.real_jets(Jet::<3>::variable(t)))
    }

    /// Values and derivatives at a native momentum point.
    pub fn at_momentum(&self, p: Complex64) -> FghValues {
        Self::values(self.jets(Jet::<3>::variable(p)))
    }

    fn values([f, g, h]: [Jet<3>; 3]) -> FghValues {
        FghValues {
            f: f.value(),
            df: f.derivative_at(1),
            ddf: f.derivative_at(2),
            g: g.value(),
            dg: g.derivative_at(1),
            h: h.value(),
        }
    }
}

/// `[f, g, h]` assembled directly from the operator actions `X = a∂ + b`,
/// multiplicative `P = π` and the Hamiltonian form of the model. Used to
/// validate the table; derivatives of the returned jets lose two orders.
pub fn operator_fgh<const N: usize>(
    model: ModelSpec,
    rep: Rep,
    params: &DeformationParams,
    p: Jet<N>,
) -> [Jet<N>; 3] {
    let hf = model.hamiltonian(params);
    let s = rep_symbols(rep, params, p);
    let (a, b, pi) = (s.a, s.b, s.pi);
    let (da, db, dpi) = (a.differentiate(), b.differentiate(), pi.differentiate());
    let lam = hf.x2;
    let f = -(a * a) * lam;
    let g = (a * da + a * b * 2.0) * lam + a * pi * (hf.xp * 2.0);
    let mut h = pi * pi * hf.kinetic + (a * db + b * b) * lam + (a * dpi + b * pi * 2.0) * hf.xp + hf.constant;
    if hf.inv_p2 != 0.0 {
        h = h + (pi * pi).recip() * hf.inv_p2;
    }
    [f, g, h]
}
