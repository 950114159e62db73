//! Metrics and eigenfunctions in the explicit printed forms, as functions of
//! the real parametrization `t` (`p = i t` on the Π₄ segment). Overall
//! constants are kept as printed; wavefunctions are unnormalized.

use num_complex::Complex64;

use crate::algebra::{DeformationParams, ModelSpec, Rep};
use crate::error::{Error, Result};
use crate::specfun::jacobi::{jacobi_generic, JacobiSpec};
use crate::specfun::legendre::{assoc_legendre_with_complement, LegendreSpec};

use super::{special_params, SpecialParams};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn native_p(rep: Rep, t: f64) -> Complex64 {
    if rep == Rep::Pi4 {
        I * t
    } else {
        Complex64::new(t, 0.0)
    }
}

/// Printed metric, or `None` where none is stated.
pub fn metric(model: ModelSpec, rep: Rep, params: &DeformationParams, t: f64) -> Option<Complex64> {
    let tc = params.tau_check();
    let r = tc.sqrt();
    let p = native_p(rep, t);
    let base = p * p * tc + 1.0;
    let one = Complex64::new(1.0, 0.0);
    match model {
        ModelSpec::HarmonicOscillator => match rep {
            Rep::Pi1 => Some(base.inv() * r),
            Rep::Pi3 => Some(one * r),
            Rep::Pi4 => Some(-I * r * base.sqrt()),
            _ => None,
        },
        ModelSpec::Swanson { alpha, beta } => {
            let to = params.tau * (alpha + beta + params.hbar * params.omega);
            match rep {
                Rep::Pi1 => Some(base.powf((alpha - beta - to) / to) * r),
                Rep::Pi3 => Some(one * r * (r * t).cos().powf(2.0 * (beta - alpha) / to)),
                Rep::Pi4 => Some(-I * r * base.powf((beta - alpha) / to + 0.5)),
                _ => None,
            }
        }
        ModelSpec::PoschlTeller { .. } => match rep {
            Rep::Pi1 => Some(base.inv() * (-2.0 * r)),
            Rep::Pi2 => Some(one),
            Rep::Pi3 => Some(one * (-2.0 * r)),
            Rep::Pi4 => Some(I * 2.0 * r * base.sqrt()),
            Rep::Pi4Prime => None,
        },
    }
}

fn legendre(n: usize, mu: f64, z: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    assoc_legendre_with_complement(LegendreSpec::new(n, mu), z, one - z * z)
}

/// Printed eigenfunction of level `n`, unnormalized. Π₂ uses the printed
/// rule `ρ₁^{-1/2} ψ₁`.
pub fn wavefunction(model: ModelSpec, rep: Rep, params: &DeformationParams, n: usize, t: f64) -> Result<Complex64> {
    let tc = params.tau_check();
    let r = tc.sqrt();
    let p = native_p(rep, t);
    let base = p * p * tc + 1.0;
    match (model, special_params(model, params)) {
        (ModelSpec::PoschlTeller { .. }, SpecialParams::Jacobi { a, b, .. }) => {
            let (a, b) = (a.re, b.re);
            let spec = JacobiSpec::new(n, a, b)?;
            let jac = |w: Complex64| -> Complex64 { jacobi_generic(spec, w) };
            match rep {
                Rep::Pi1 => Ok(p.powf(0.5 + a) * base.powf(-(1.0 + a + b) / 2.0) * jac((-p * p * tc + 1.0) / base)),
                Rep::Pi2 => {
                    let rho = metric(model, Rep::Pi1, params, t).expect("stated");
                    Ok(rho.powf(-0.5) * wavefunction(model, Rep::Pi1, params, n, t)?)
                }
                Rep::Pi3 => {
                    let c2 = Complex64::new((2.0 * r * t).cos(), 0.0);
                    let s2 = Complex64::new((2.0 * r * t).sin(), 0.0);
                    let one = Complex64::new(1.0, 0.0);
                    Ok((one - c2).powf((1.0 + a) / 2.0) * (c2 + 1.0).powf((1.0 + b) / 2.0) / s2.sqrt() * jac(c2))
                }
                Rep::Pi4 => Ok(p.powf(a + 0.5) * base.powf((2.0 * b - 1.0) / 4.0) * jac(p * p * (2.0 * tc) + 1.0)),
                Rep::Pi4Prime => Err(Error::NonPhysical),
            }
        }
        (_, SpecialParams::Legendre { c, c_sigma }) => {
            let mu = -(c_sigma / c).re;
            let kappa = match model {
                ModelSpec::Swanson { alpha, beta } => {
                    (alpha - beta) / (params.tau * (alpha + beta + params.hbar * params.omega))
                }
                _ => 0.0,
            };
            match rep {
                Rep::Pi1 => Ok(base.powf(-kappa / 2.0 - 0.25) * legendre(n, mu, p * r / base.sqrt())?),
                Rep::Pi2 => {
                    let rho = metric(model, Rep::Pi1, params, t).expect("stated");
                    Ok(rho.powf(-0.5) * wavefunction(model, Rep::Pi1, params, n, t)?)
                }
                Rep::Pi3 => {
                    let x = r * t;
                    Ok(Complex64::new(x.cos().powf(kappa + 0.5), 0.0) * legendre(n, mu, Complex64::new(x.sin(), 0.0))?)
                }
                Rep::Pi4 => {
                    // the HO block prints exponent -1/2, the Swanson block κ/2 - 1/4
                    let e = match model {
                        ModelSpec::HarmonicOscillator => -0.5,
                        _ => kappa / 2.0 - 0.25,
                    };
                    Ok(base.powf(e) * legendre(n, mu, -I * r * p)?)
                }
                Rep::Pi4Prime => Err(Error::NonPhysical),
            }
        }
        _ => unreachable!("model and family are paired"),
    }
}
