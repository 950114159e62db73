use num_complex::Complex64;

use super::fgh::tan_scaled;
use super::{DeformationParams, PDomain, Rep};
use crate::diff::{fd8_derivative, spectral_derivative};
use crate::error::{Error, Result};
use crate::jet::Jet;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `X = a ∂_p + b` and `P = π` as jets in the native momentum.
#[derive(Clone, Copy, Debug)]
pub struct RepSymbols<const N: usize> {
    pub a: Jet<N>,
    pub b: Jet<N>,
    pub pi: Jet<N>,
}

pub fn rep_symbols<const N: usize>(rep: Rep, params: &DeformationParams, p: Jet<N>) -> RepSymbols<N> {
    let hbar = params.hbar;
    let tc = params.tau_check();
    let s2 = p * p * tc + 1.0;
    let zero = Jet::constant(0.0);
    let ih = I * hbar;
    match rep {
        Rep::Pi1 => RepSymbols {
            a: s2 * ih,
            b: zero,
            pi: p,
        },
        Rep::Pi2 => RepSymbols {
            a: s2 * ih,
            b: p * (ih * tc),
            pi: p,
        },
        Rep::Pi3 => RepSymbols {
            a: Jet::constant(ih),
            b: zero,
            pi: tan_scaled(p, tc),
        },
        Rep::Pi4 => {
            let s = s2.sqrt();
            RepSymbols {
                a: s * (-hbar),
                b: p * (-hbar * tc) / s,
                pi: p * (-I) / s,
            }
        }
        Rep::Pi4Prime => {
            let s = s2.sqrt();
            RepSymbols {
                a: s * ih,
                b: p * (ih * tc) / s,
                pi: p / s,
            }
        }
    }
}

/// `Xψ` on Taylor jets: `psi` holds the Taylor coefficients of ψ at the
/// expansion point of `p`. One order of validity is consumed.
pub fn x_jet<const N: usize>(rep: Rep, params: &DeformationParams, p: Jet<N>, psi: Jet<N>) -> Jet<N> {
    let s = rep_symbols(rep, params, p);
    s.a * psi.differentiate() + s.b * psi
}

pub fn p_jet<const N: usize>(rep: Rep, params: &DeformationParams, p: Jet<N>, psi: Jet<N>) -> Jet<N> {
    rep_symbols(rep, params, p).pi * psi
}

/// Cell-centred uniform grid `p_j = lo + (j + 1/2) h`, `h = (hi - lo)/n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentumGrid {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl MomentumGrid {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo < hi && lo.is_finite() && hi.is_finite()) || n < 16 {
            return Err(Error::InvalidParameter(format!("grid [{lo}, {hi}] with {n} points")));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / self.n as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.n).map(|j| self.lo + (j as f64 + 0.5) * h).collect()
    }

    pub fn sample(&self, f: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
        self.points().into_iter().map(f).collect()
    }
}

// Finite-interval data gets stencils; decaying real-line data gets FFTs.
fn derivative(rep: Rep, params: &DeformationParams, psi: &[Complex64], grid: &MomentumGrid) -> Vec<Complex64> {
    match rep.p_domain(params) {
        PDomain::Symmetric { .. } => fd8_derivative(psi, grid.spacing()),
        _ => spectral_derivative(psi, grid.spacing()),
    }
}

fn check(rep: Rep, params: &DeformationParams, psi: &[Complex64], grid: &MomentumGrid) -> Result<()> {
    if psi.len() != grid.n {
        return Err(Error::InvalidParameter(format!("{} samples on a {}-point grid", psi.len(), grid.n)));
    }
    // Π₄ is exercised on the real line, where its expressions are analytic.
    if let PDomain::Symmetric { half } = rep.p_domain(params) {
        if grid.lo < -half || grid.hi > half {
            return Err(Error::DomainMismatch(rep));
        }
    }
    Ok(())
}

fn multiplier(rep: Rep, params: &DeformationParams, p: f64) -> Complex64 {
    rep_symbols::<1>(rep, params, Jet::variable(p)).pi.value()
}

/// `Xψ` on samples, keeping each representation's operator order.
pub fn apply_x(rep: Rep, params: &DeformationParams, psi: &[Complex64], grid: &MomentumGrid) -> Result<Vec<Complex64>> {
    check(rep, params, psi, grid)?;
    let hbar = params.hbar;
    let tc = params.tau_check();
    let ps = grid.points();
    let s: Vec<f64> = ps.iter().map(|p| (1.0 + tc * p * p).sqrt()).collect();
    let times_s: Vec<Complex64> = psi.iter().zip(&s).map(|(v, s)| v * s).collect();
    let out = match rep {
        Rep::Pi1 => {
            let d = derivative(rep, params, psi, grid);
            d.iter().zip(&s).map(|(d, s)| d * (I * hbar * s * s)).collect()
        }
        Rep::Pi2 => {
            let d = derivative(rep, params, psi, grid);
            d.iter()
                .zip(psi)
                .zip(&ps)
                .map(|((d, v), p)| (d * (1.0 + tc * p * p) + v * (tc * p)) * (I * hbar))
                .collect()
        }
        Rep::Pi3 => derivative(rep, params, psi, grid).into_iter().map(|d| d * (I * hbar)).collect(),
        Rep::Pi4 => derivative(rep, params, &times_s, grid).into_iter().map(|d| d * (-hbar)).collect(),
        Rep::Pi4Prime => derivative(rep, params, &times_s, grid)
            .into_iter()
            .map(|d| d * (I * hbar))
            .collect(),
    };
    Ok(out)
}

pub fn apply_p(rep: Rep, params: &DeformationParams, psi: &[Complex64], grid: &MomentumGrid) -> Result<Vec<Complex64>> {
    check(rep, params, psi, grid)?;
    Ok(grid
        .points()
        .iter()
        .zip(psi)
        .map(|(&p, v)| v * multiplier(rep, params, p))
        .collect())
}

/// Right-hand side used by [`commutator_residual`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommutatorReference {
    /// `iħ(1 + τ̌P²)`
    Deformed,
    /// `iħ(1 - τ̌P²)`
    SignFlipped,
}

impl CommutatorReference {
    /// The relation a representation is built to satisfy.
    pub fn native(rep: Rep) -> Self {
        if rep == Rep::Pi4Prime {
            Self::SignFlipped
        } else {
            Self::Deformed
        }
    }
}

/// `‖[X, P]ψ - iħ(1 ± τ̌P²)ψ‖₂ / ‖ψ‖₂`.
pub fn commutator_residual(
    rep: Rep,
    params: &DeformationParams,
    psi: &[Complex64],
    grid: &MomentumGrid,
    reference: CommutatorReference,
) -> Result<f64> {
    let xp = apply_x(rep, params, &apply_p(rep, params, psi, grid)?, grid)?;
    let px = apply_p(rep, params, &apply_x(rep, params, psi, grid)?, grid)?;
    let pp = apply_p(rep, params, &apply_p(rep, params, psi, grid)?, grid)?;
    let sign = match reference {
        CommutatorReference::Deformed => 1.0,
        CommutatorReference::SignFlipped => -1.0,
    };
    let tc = params.tau_check();
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..psi.len() {
        let rhs = (psi[j] + pp[j] * (sign * tc)) * (I * params.hbar);
        num += (xp[j] - px[j] - rhs).norm_sqr();
        den += psi[j].norm_sqr();
    }
    Ok((num / den).sqrt())
}

/// Five smooth test functions: `e^{-σu²}` for `σ ∈ {1/2, 1, 2}` and two odd
/// variants `u e^{-σu²}`. On a finite Π₃ interval `u = tan(√τ̌p)/√τ̌`, so the
/// samples vanish to all orders at the endpoints.
pub fn gaussian_suite(rep: Rep, params: &DeformationParams, grid: &MomentumGrid) -> Vec<Vec<Complex64>> {
    let tc = params.tau_check();
    let finite = matches!(rep.p_domain(params), PDomain::Symmetric { .. });
    let u = move |p: f64| if finite { (tc.sqrt() * p).tan() / tc.sqrt() } else { p };
    let even = |sigma: f64| grid.sample(|p| Complex64::new((-sigma * u(p) * u(p)).exp(), 0.0));
    let odd = |sigma: f64| grid.sample(|p| Complex64::new(u(p) * (-sigma * u(p) * u(p)).exp(), 0.0));
    vec![even(0.5), even(1.0), even(2.0), odd(1.0), odd(0.5)]
}

/// Antilinear maps on momentum samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PtAction {
    /// `ψ(p) ↦ ψ(p)*`: PT in momentum space.
    Conjugate,
    /// `ψ(p) ↦ ψ(-p)*`.
    ConjugateFlip,
}

/// Image of samples on a grid symmetric about zero.
pub fn pt_image(action: PtAction, psi: &[Complex64]) -> Vec<Complex64> {
    match action {
        PtAction::Conjugate => psi.iter().map(|v| v.conj()).collect(),
        PtAction::ConjugateFlip => psi.iter().rev().map(|v| v.conj()).collect(),
    }
}

/// Signs `(σ_X, σ_P)` with `X T = σ_X T X` and `P T = σ_P T P`.
pub fn pt_signs(rep: Rep, action: PtAction) -> (f64, f64) {
    let base = match rep {
        Rep::Pi4 => (1.0, -1.0),
        _ => (-1.0, 1.0),
    };
    match action {
        PtAction::Conjugate => base,
        PtAction::ConjugateFlip => (-base.0, -base.1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn real_grid() -> MomentumGrid {
        MomentumGrid::new(-14.0, 14.0, 2048).unwrap()
    }

    fn grid_for(rep: Rep, params: &DeformationParams) -> MomentumGrid {
        match rep.p_domain(params) {
            PDomain::Symmetric { half } => MomentumGrid::new(-half, half, 2048).unwrap(),
            _ => real_grid(),
        }
    }

    fn gaussian(g: &MomentumGrid) -> Vec<Complex64> {
        g.sample(|p| Complex64::new((-p * p).exp(), 0.0))
    }

    #[test]
    fn canonical_limit_is_standard_position() {
        let params = DeformationParams::natural(0.0).unwrap();
        let g = real_grid();
        let x = apply_x(Rep::Pi1, &params, &gaussian(&g), &g).unwrap();
        for (p, v) in g.points().iter().zip(&x) {
            let exact = I * (-2.0 * p * (-p * p).exp());
            assert!((v - exact).norm() < 1e-12);
        }
    }

    #[test]
    fn pi3_position_is_canonical() {
        let params = DeformationParams::natural(0.3).unwrap();
        let g = grid_for(Rep::Pi3, &params);
        let psi = gaussian(&g);
        let x = apply_x(Rep::Pi3, &params, &psi, &g).unwrap();
        for (p, v) in g.points().iter().zip(&x) {
            let exact = I * (-2.0 * p * (-p * p).exp());
            assert!((v - exact).norm() < 1e-9, "{p}");
        }
    }

    #[test]
    fn pi4_position_by_product_rule() {
        let params = DeformationParams::natural(0.2).unwrap();
        let g = real_grid();
        let x = apply_x(Rep::Pi4, &params, &gaussian(&g), &g).unwrap();
        let pts = g.points();
        for j in [300usize, 700, 1024, 1200, 1500] {
            let p = pts[j];
            let s = (1.0 + 0.2 * p * p).sqrt();
            let e = (-p * p).exp();
            let exact = -(0.2 * p / s * e + s * (-2.0 * p) * e);
            assert!((x[j].re - exact).abs() < 1e-12 && x[j].im.abs() < 1e-12);
        }
    }

    #[test]
    fn momentum_multipliers() {
        let params = DeformationParams::natural(1.0).unwrap();
        let m3 = multiplier(Rep::Pi3, &params, std::f64::consts::FRAC_PI_4);
        assert!((m3.re - 1.0).abs() < 1e-15);
        let m4 = multiplier(Rep::Pi4Prime, &params, 1.0);
        assert!((m4.re - 0.5f64.sqrt()).abs() < 1e-15);
        let g = real_grid();
        let psi = gaussian(&g);
        let p1 = apply_p(Rep::Pi1, &params, &psi, &g).unwrap();
        for ((p, a), b) in g.points().iter().zip(&p1).zip(&psi) {
            assert_eq!(*a, b * p);
        }
    }

    #[test]
    fn grid_outside_pi3_domain_is_rejected() {
        let params = DeformationParams::natural(1.0).unwrap();
        let g = MomentumGrid::new(-2.0, 2.0, 64).unwrap();
        let psi = vec![Complex64::new(0.0, 0.0); 64];
        assert_eq!(apply_x(Rep::Pi3, &params, &psi, &g), Err(Error::DomainMismatch(Rep::Pi3)));
    }

    #[test]
    fn commutator_suite() {
        for tau in [0.0, 0.3, 1.0] {
            let params = DeformationParams::natural(tau).unwrap();
            for rep in Rep::ALL {
                let g = grid_for(rep, &params);
                for psi in gaussian_suite(rep, &params, &g) {
                    let r = commutator_residual(rep, &params, &psi, &g, CommutatorReference::native(rep)).unwrap();
                    assert!(r < 1e-7, "{rep:?} tau={tau}: {r}");
                }
            }
        }
    }

    #[test]
    fn sign_flipped_representation_fails_deformed_relation() {
        let params = DeformationParams::natural(0.3).unwrap();
        let g = real_grid();
        let psi = gaussian(&g);
        let good = commutator_residual(Rep::Pi4Prime, &params, &psi, &g, CommutatorReference::SignFlipped).unwrap();
        let bad = commutator_residual(Rep::Pi4Prime, &params, &psi, &g, CommutatorReference::Deformed).unwrap();
        assert!(good < 1e-8 && bad > 0.1, "{good} {bad}");
    }

    #[test]
    fn pi2_is_similar_to_pi1() {
        let params = DeformationParams::natural(0.4).unwrap();
        let g = real_grid();
        let s: Vec<f64> = g.points().iter().map(|p| (1.0 + 0.4 * p * p).sqrt()).collect();
        for psi in gaussian_suite(Rep::Pi2, &params, &g) {
            let spsi: Vec<Complex64> = psi.iter().zip(&s).map(|(v, s)| v * s).collect();
            let x1 = apply_x(Rep::Pi1, &params, &spsi, &g).unwrap();
            let x2 = apply_x(Rep::Pi2, &params, &psi, &g).unwrap();
            for j in 0..g.n {
                assert!((x1[j] / s[j] - x2[j]).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn antilinear_symmetry_signs() {
        let params = DeformationParams::natural(0.5).unwrap();
        for rep in Rep::ALL {
            let g = grid_for(rep, &params);
            // a genuinely complex, asymmetric state
            let psi = g.sample(|p| Complex64::new(0.3 * p, 1.0 + 0.2 * p * p) * (-(p - 0.4) * (p - 0.4)).exp() * Complex64::new(1.0, 0.0));
            let psi = if matches!(rep.p_domain(&params), PDomain::Symmetric { .. }) {
                let half = (rep_half(rep, &params)).unwrap();
                psi.iter()
                    .zip(g.points())
                    .map(|(v, p)| v * (-(1.0 / (half * half - p * p))).exp())
                    .collect()
            } else {
                psi
            };
            for action in [PtAction::Conjugate, PtAction::ConjugateFlip] {
                let (sx, sp) = pt_signs(rep, action);
                let t = pt_image(action, &psi);
                let lhs_x = apply_x(rep, &params, &t, &g).unwrap();
                let rhs_x = pt_image(action, &apply_x(rep, &params, &psi, &g).unwrap());
                let lhs_p = apply_p(rep, &params, &t, &g).unwrap();
                let rhs_p = pt_image(action, &apply_p(rep, &params, &psi, &g).unwrap());
                for j in 0..g.n {
                    assert!((lhs_x[j] - rhs_x[j] * sx).norm() < 1e-8, "{rep:?} {action:?} X");
                    assert!((lhs_p[j] - rhs_p[j] * sp).norm() < 1e-12, "{rep:?} {action:?} P");
                }
            }
        }
    }

    fn rep_half(rep: Rep, params: &DeformationParams) -> Option<f64> {
        match rep.p_domain(params) {
            PDomain::Symmetric { half } => Some(half),
            _ => None,
        }
    }

    #[test]
    fn jet_actions_match_samples() {
        let params = DeformationParams::natural(0.7).unwrap();
        let g = real_grid();
        let psi = gaussian(&g);
        let pts = g.points();
        for rep in [Rep::Pi1, Rep::Pi2, Rep::Pi4, Rep::Pi4Prime] {
            let xs = apply_x(rep, &params, &psi, &g).unwrap();
            for j in [900usize, 1100] {
                let p = Jet::<4>::variable(pts[j]);
                let e = (-(p * p)).exp();
                let xj = x_jet(rep, &params, p, e);
                assert!((xj.value() - xs[j]).norm() < 1e-10, "{rep:?}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn commutator_holds_for_random_gaussians(
            sigma in 0.4f64..3.0,
            shift in -1.5f64..1.5,
            tau in 0.0f64..1.5,
            rep_ix in 0usize..4,
        ) {
            let rep = Rep::PHYSICAL[rep_ix];
            let params = DeformationParams::natural(tau).unwrap();
            let g = grid_for(rep, &params);
            let tc = params.tau_check();
            let finite = matches!(rep.p_domain(&params), PDomain::Symmetric { .. });
            let psi = g.sample(|p| {
                let u = if finite { (tc.sqrt() * p).tan() / tc.sqrt() } else { p };
                Complex64::new((-sigma * (u - shift) * (u - shift)).exp(), 0.0)
            });
            let r = commutator_residual(rep, &params, &psi, &g, CommutatorReference::Deformed).unwrap();
            prop_assert!(r < 1e-7, "{:?} residual {}", rep, r);
        }
    }
}
