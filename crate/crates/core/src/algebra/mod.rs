//! Deformation parameters, the five momentum-space representations of
//! `[X, P] = iħ(1 + τ̌P²)` and the three model Hamiltonians.

mod fgh;
mod ops;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use fgh::{coefficients, operator_fgh, FghCoefficients, FghValues};
pub use ops::{
    apply_p, apply_x, commutator_residual, gaussian_suite, p_jet, pt_image, pt_signs, rep_symbols,
    x_jet, CommutatorReference, MomentumGrid, PtAction, RepSymbols,
};

/// Physical constants and the dimensionless deformation `τ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeformationParams {
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
    pub tau: f64,
}

impl Default for DeformationParams {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            omega: 1.0,
            tau: 0.1,
        }
    }
}

impl DeformationParams {
    pub fn new(hbar: f64, mass: f64, omega: f64, tau: f64) -> Result<Self> {
        let p = Self {
            hbar,
            mass,
            omega,
            tau,
        };
        p.validate()?;
        Ok(p)
    }

    /// Natural units `ħ = m = ω = 1`.
    pub fn natural(tau: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, tau)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("hbar", self.hbar), ("mass", self.mass), ("omega", self.omega)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        if !(self.tau.is_finite() && self.tau >= 0.0) {
            return Err(Error::InvalidParameter(format!("tau must be finite and >= 0, got {}", self.tau)));
        }
        Ok(())
    }

    /// `τ̌ = τ / (m ω ħ)`.
    pub fn tau_check(&self) -> f64 {
        self.tau / (self.mass * self.omega * self.hbar)
    }

    pub fn with_tau(&self, tau: f64) -> Self {
        Self { tau, ..*self }
    }

    /// Minimal position uncertainty `ħ √τ̌`.
    pub fn minimal_length(&self) -> f64 {
        self.hbar * self.tau_check().sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rep {
    Pi1,
    Pi2,
    Pi3,
    Pi4,
    Pi4Prime,
}

impl Rep {
    pub const ALL: [Rep; 5] = [Rep::Pi1, Rep::Pi2, Rep::Pi3, Rep::Pi4, Rep::Pi4Prime];
    /// Representations satisfying the undeformed-sign relation.
    pub const PHYSICAL: [Rep; 4] = [Rep::Pi1, Rep::Pi2, Rep::Pi3, Rep::Pi4];

    pub fn label(&self) -> &'static str {
        match self {
            Rep::Pi1 => "pi1",
            Rep::Pi2 => "pi2",
            Rep::Pi3 => "pi3",
            Rep::Pi4 => "pi4",
            Rep::Pi4Prime => "pi4prime",
        }
    }

    pub fn p_domain(&self, params: &DeformationParams) -> PDomain {
        let tc = params.tau_check();
        match self {
            Rep::Pi1 | Rep::Pi2 | Rep::Pi4Prime => PDomain::RealLine,
            _ if tc == 0.0 => PDomain::RealLine,
            Rep::Pi3 => PDomain::Symmetric {
                half: std::f64::consts::FRAC_PI_2 / tc.sqrt(),
            },
            Rep::Pi4 => PDomain::Imaginary { half: 1.0 / tc.sqrt() },
        }
    }

    /// Whether momentum samples are taken along the imaginary axis, `p = i s`.
    pub fn imaginary(&self) -> bool {
        matches!(self, Rep::Pi4)
    }
}

impl fmt::Display for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Rep {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pi1" | "1" => Ok(Rep::Pi1),
            "pi2" | "2" => Ok(Rep::Pi2),
            "pi3" | "3" => Ok(Rep::Pi3),
            "pi4" | "4" => Ok(Rep::Pi4),
            "pi4prime" | "pi4'" | "4'" | "4p" => Ok(Rep::Pi4Prime),
            other => Err(Error::InvalidParameter(format!("unknown representation '{other}'"))),
        }
    }
}

/// Natural momentum domain of a representation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PDomain {
    RealLine,
    /// `|p| < half`.
    Symmetric { half: f64 },
    /// `p = i s` with `|s| < half`.
    Imaginary { half: f64 },
}

impl PDomain {
    pub fn contains(&self, t: f64) -> bool {
        match *self {
            PDomain::RealLine => t.is_finite(),
            PDomain::Symmetric { half } | PDomain::Imaginary { half } => t.abs() < half,
        }
    }

    pub fn interval(&self) -> Interval {
        match *self {
            PDomain::RealLine => Interval::new(f64::NEG_INFINITY, f64::INFINITY),
            PDomain::Symmetric { half } | PDomain::Imaginary { half } => Interval::new(-half, half),
        }
    }
}

/// Open interval, possibly unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, t: f64) -> bool {
        t > self.lo && t < self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    HarmonicOscillator,
    Swanson,
    PoschlTeller,
}

impl ModelKind {
    pub fn label(&self) -> &'static str {
        match self {
            ModelKind::HarmonicOscillator => "ho",
            ModelKind::Swanson => "swanson",
            ModelKind::PoschlTeller => "pt",
        }
    }
}

impl FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ho" | "oscillator" | "harmonic" => Ok(ModelKind::HarmonicOscillator),
            "swanson" | "sw" => Ok(ModelKind::Swanson),
            "pt" | "poschl-teller" | "poschlteller" => Ok(ModelKind::PoschlTeller),
            other => Err(Error::InvalidParameter(format!("unknown model '{other}'"))),
        }
    }
}

/// Model Hamiltonian. Swanson couplings carry units of energy; the
/// Pöschl-Teller couplings are dimensionless.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ModelSpec {
    HarmonicOscillator,
    Swanson { alpha: f64, beta: f64 },
    PoschlTeller { alpha: f64, beta: f64 },
}

impl ModelSpec {
    pub fn from_kind(kind: ModelKind, alpha: f64, beta: f64) -> Self {
        match kind {
            ModelKind::HarmonicOscillator => ModelSpec::HarmonicOscillator,
            ModelKind::Swanson => ModelSpec::Swanson { alpha, beta },
            ModelKind::PoschlTeller => ModelSpec::PoschlTeller { alpha, beta },
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            ModelSpec::HarmonicOscillator => ModelKind::HarmonicOscillator,
            ModelSpec::Swanson { .. } => ModelKind::Swanson,
            ModelSpec::PoschlTeller { .. } => ModelKind::PoschlTeller,
        }
    }

    pub fn validate(&self, params: &DeformationParams) -> Result<()> {
        params.validate()?;
        match *self {
            ModelSpec::HarmonicOscillator => Ok(()),
            ModelSpec::Swanson { alpha, beta } | ModelSpec::PoschlTeller { alpha, beta }
                if !(alpha.is_finite() && beta.is_finite()) =>
            {
                Err(Error::InvalidParameter("couplings must be finite".into()))
            }
            ModelSpec::Swanson { .. } => Ok(()),
            ModelSpec::PoschlTeller { .. } if params.tau == 0.0 => Err(Error::IntrinsicNoncommutativity),
            ModelSpec::PoschlTeller { .. } => Ok(()),
        }
    }

    /// `Ω = α + β + ħω` for Swanson, `None` otherwise.
    pub fn omega_big(&self, params: &DeformationParams) -> Option<f64> {
        match *self {
            ModelSpec::Swanson { alpha, beta } => Some(alpha + beta + params.hbar * params.omega),
            _ => None,
        }
    }

    /// The Hamiltonian as `K P² + Λ X² + γ (XP + PX) + C P⁻² + E₀`.
    pub fn hamiltonian(&self, params: &DeformationParams) -> HamiltonianForm {
        let DeformationParams {
            hbar,
            mass: m,
            omega: w,
            tau,
        } = *params;
        let zero = Complex64::new(0.0, 0.0);
        match *self {
            ModelSpec::HarmonicOscillator => HamiltonianForm {
                kinetic: 1.0 / (2.0 * m),
                x2: 0.5 * m * w * w,
                xp: zero,
                inv_p2: 0.0,
                constant: 0.0,
            },
            ModelSpec::Swanson { alpha, beta } => {
                let big = alpha + beta + hbar * w;
                HamiltonianForm {
                    kinetic: (hbar * w * (1.0 - tau) - alpha - beta) / (2.0 * m * hbar * w),
                    x2: big * m * w / (2.0 * hbar),
                    xp: Complex64::new(0.0, (alpha - beta) / (2.0 * hbar)),
                    inv_p2: 0.0,
                    constant: 0.0,
                }
            }
            ModelSpec::PoschlTeller { alpha, beta } => {
                let tc = params.tau_check();
                HamiltonianForm {
                    kinetic: beta / (2.0 * m),
                    x2: 0.5 * m * w * w,
                    xp: zero,
                    inv_p2: hbar * w * alpha / (2.0 * tc),
                    constant: hbar * w * alpha / 2.0 + beta / (2.0 * m * tc),
                }
            }
        }
    }
}

/// Coefficients of the Hamiltonian written in `X` and `P`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HamiltonianForm {
    pub kinetic: f64,
    pub x2: f64,
    pub xp: Complex64,
    pub inv_p2: f64,
    pub constant: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_check_vanishes_only_at_zero() {
        let p = DeformationParams::new(2.0, 0.5, 3.0, 0.6).unwrap();
        assert!((p.tau_check() - 0.2).abs() < 1e-15);
        assert_eq!(p.with_tau(0.0).tau_check(), 0.0);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(DeformationParams::new(0.0, 1.0, 1.0, 0.1).is_err());
        assert!(DeformationParams::new(1.0, 1.0, 1.0, -0.1).is_err());
        assert!(DeformationParams::new(1.0, f64::NAN, 1.0, 0.1).is_err());
    }

    #[test]
    fn domains() {
        let p = DeformationParams::natural(1.0).unwrap();
        assert_eq!(Rep::Pi1.p_domain(&p), PDomain::RealLine);
        assert_eq!(Rep::Pi4Prime.p_domain(&p), PDomain::RealLine);
        assert_eq!(
            Rep::Pi3.p_domain(&p),
            PDomain::Symmetric {
                half: std::f64::consts::FRAC_PI_2
            }
        );
        assert_eq!(Rep::Pi4.p_domain(&p), PDomain::Imaginary { half: 1.0 });
    }

    #[test]
    fn pt_requires_deformation() {
        let m = ModelSpec::PoschlTeller { alpha: 1.0, beta: 0.5 };
        assert_eq!(
            m.validate(&DeformationParams::natural(0.0).unwrap()),
            Err(Error::IntrinsicNoncommutativity)
        );
        assert!(m.validate(&DeformationParams::natural(0.25).unwrap()).is_ok());
    }

    #[test]
    fn parsing_round_trips() {
        for r in Rep::ALL {
            assert_eq!(r.label().parse::<Rep>().unwrap(), r);
        }
        assert_eq!("swanson".parse::<ModelKind>().unwrap(), ModelKind::Swanson);
        assert!("nope".parse::<ModelKind>().is_err());
    }
}
