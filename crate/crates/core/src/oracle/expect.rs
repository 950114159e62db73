use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::Serialize;

use super::words::{Observable, Symbol, MAX_WORD_LEN};
use crate::algebra::{rep_symbols, RepSymbols};
use crate::algebra::{DeformationParams, ModelSpec, Rep};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::solutions::{solve, ClosedFormSolution, Gaps, Level};
use crate::specfun::jacobi::jacobi_generic;
use crate::specfun::legendre::gegenbauer;
use crate::specfun::quadrature::{double_exponential, QuadValue, Span};

const ORDER: usize = MAX_WORD_LEN + 2;
type J = Jet<ORDER>;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const QUAD_TOL: f64 = 1e-12;

/// `⟨n|ρ F|m⟩` numerator and the two norms, accumulated in one pass.
#[derive(Clone, Copy, Debug)]
struct Moments {
    f: Complex64,
    nn: f64,
    mm: f64,
}

impl Add for Moments {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Moments { f: self.f + o.f, nn: self.nn + o.nn, mm: self.mm + o.mm }
    }
}

impl Sub for Moments {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Moments { f: self.f - o.f, nn: self.nn - o.nn, mm: self.mm - o.mm }
    }
}

impl Mul<f64> for Moments {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Moments { f: self.f * s, nn: self.nn * s, mm: self.mm * s }
    }
}

impl QuadValue for Moments {
    fn zero() -> Self {
        Moments { f: Complex64::new(0.0, 0.0), nn: 0.0, mm: 0.0 }
    }
    fn magnitude(&self) -> f64 {
        self.f.norm() + self.nn.abs() + self.mm.abs()
    }
    fn finite(&self) -> bool {
        self.f.re.is_finite() && self.f.im.is_finite() && self.nn.is_finite() && self.mm.is_finite()
    }
}

impl Moments {
    fn nan() -> Self {
        Moments { f: Complex64::new(f64::NAN, 0.0), nn: f64::NAN, mm: f64::NAN }
    }

    fn ratio(self) -> Complex64 {
        self.f / (self.nn * self.mm).sqrt()
    }
}

/// Operators conjugated by the state envelope `e^ℓ`: `X̃ = a(∂ + ℓ') + b`,
/// `P̃ = π`, all as jets in the integration variable.
struct Conjugated {
    a: J,
    b: J,
    pi: J,
    dl: J,
}

impl Conjugated {
    fn apply(&self, obs: &Observable, u: J) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (c, word) in &obs.terms {
            let mut v = u;
            for (sym, sign) in word.letters_right_to_left() {
                v = match (sym, sign) {
                    (Symbol::X, _) => self.a * (v.differentiate() + self.dl * v) + self.b * v,
                    (Symbol::P, 1) => self.pi * v,
                    (Symbol::P, _) => v / self.pi,
                };
            }
            total = total + c * v.value();
        }
        total
    }
}

/// Worst-case exponents of the integrand at `z = 1` and `z = -1` for each
/// term, with the state written in the Π₃ variable.
fn check_integrable(level: &Level, obs: &Observable) -> Result<()> {
    let (base_hi, base_lo, p_hi, p_lo) = match *level {
        Level::Legendre { lambda, .. } => (lambda, lambda, -0.5, -0.5),
        Level::Jacobi(spec) => (spec.a, spec.b, 0.5, -0.5),
    };
    for (_, word) in &obs.terms {
        let (mut hi, mut lo) = (base_hi, base_lo);
        for (sym, sign) in word.letters_right_to_left() {
            match sym {
                Symbol::X => {
                    hi -= 0.5;
                    lo -= 0.5;
                }
                Symbol::P => {
                    hi += sign as f64 * p_hi;
                    lo += sign as f64 * p_lo;
                }
            }
        }
        if hi <= -1.0 || lo <= -1.0 {
            return Err(Error::NonIntegrable(format!(
                "{word}: endpoint exponents {hi:.3} and {lo:.3}"
            )));
        }
    }
    Ok(())
}

fn check_word_model(model: ModelSpec, obs: &Observable) -> Result<()> {
    let inverse = obs.terms.iter().any(|(_, w)| w.has_inverse_momentum());
    if inverse && !matches!(model, ModelSpec::PoschlTeller { .. }) {
        return Err(Error::InvalidParameter("P^-2 is only defined for the Pöschl-Teller model".into()));
    }
    Ok(())
}

/// `⟨ψ_n|ρ F ψ_m⟩` with normalized states, by quadrature in the native
/// variable of `rep` (the real segment `p = i t` for Π₄).
pub fn matrix_element_direct(
    model: ModelSpec,
    rep: Rep,
    params: DeformationParams,
    n: usize,
    m: usize,
    obs: &Observable,
) -> Result<Complex64> {
    check_word_model(model, obs)?;
    if rep == Rep::Pi4Prime {
        return Err(Error::NonPhysical);
    }
    let sol = solve(model, rep, params)?;
    let (lv_n, lv_m) = (sol.level(n)?, sol.level(m)?);
    check_integrable(&lv_n, obs)?;
    let dom = sol.transform()?.p_domain;
    let total = if dom.is_bounded() {
        // each half in the distance to its wall
        let half = 0.5 * dom.width();
        let side = |right: bool| {
            double_exponential(Span::Finite(0.0, half), QUAD_TOL, |g: f64| {
                let (t, gaps) = if right {
                    (dom.hi - g, (dom.width() - g, g))
                } else {
                    (dom.lo + g, (g, dom.width() - g))
                };
                direct_sample(&sol, &lv_n, &lv_m, obs, t, Some(gaps)).unwrap_or_else(|_| Moments::nan())
            })
        };
        side(false)? + side(true)?
    } else {
        double_exponential(sol.span()?, QUAD_TOL, |t| {
            direct_sample(&sol, &lv_n, &lv_m, obs, t, None).unwrap_or_else(|_| Moments::nan())
        })?
    };
    Ok(total.ratio())
}

fn direct_sample(
    sol: &ClosedFormSolution,
    lv_n: &Level,
    lv_m: &Level,
    obs: &Observable,
    t: f64,
    gaps: Option<(f64, f64)>,
) -> Result<Moments> {
    let tj = J::variable(t);
    let atoms = match gaps {
        Some((lo, hi)) => {
            // O(gap^e) with e > -1; the jets overflow closer in
            let floor = 1e-60 * (lo + hi);
            if !(lo > floor && hi > floor) {
                return Ok(Moments::zero());
            }
            sol.atoms_with_gaps(tj, Gaps { lo: affine(lo, 1.0), hi: affine(hi, -1.0) })?
        }
        None => {
            if !sol.check_inside(t)? {
                return Ok(Moments::zero());
            }
            sol.atoms_at(tj)?
        }
    };
    let (pj, dt_dp) = if sol.rep == Rep::Pi4 {
        (tj * I, -I)
    } else {
        (tj, Complex64::new(1.0, 0.0))
    };
    let sym = match gaps {
        Some((lo, hi)) => wall_symbols(sol, tj, lo, hi),
        None => rep_symbols(sol.rep, &sol.params, pj),
    };
    let (lw_n, u_n) = lv_n.split(&atoms);
    let (lw_m, u_m) = lv_m.split(&atoms);
    let ell_n = sol.ln_prefactor(&atoms, lv_n)? + lw_n;
    let ell_m = sol.ln_prefactor(&atoms, lv_m)? + lw_m;
    let ln_rho = sol.ln_metric_atoms(&atoms, lv_n)?;
    let op = Conjugated {
        a: sym.a * dt_dp,
        b: sym.b,
        pi: sym.pi,
        dl: ell_m.differentiate(),
    };
    let fu = op.apply(obs, u_m);
    let (un, um) = (u_n.re(), u_m.re());
    let (en, em) = (ell_n.re(), ell_m.re());
    let moments = Moments {
        f: fu * un * (ln_rho + en + em).exp(),
        nn: un * un * (ln_rho + 2.0 * en).exp(),
        mm: um * um * (ln_rho + 2.0 * em).exp(),
    };
    // past overflow of the jets the contribution is below rounding
    if !moments.finite() && (ln_rho + en + em) < -600.0 {
        return Ok(Moments::zero());
    }
    Ok(moments)
}

/// Operator symbols on a bounded domain with the trigonometric and square-root
/// factors taken from the wall distances.
fn wall_symbols(sol: &ClosedFormSolution, t: J, lo: f64, hi: f64) -> RepSymbols<ORDER> {
    let dom = sol.transform().expect("bounded domain has a transform").p_domain;
    let tc = sol.params.tau_check();
    let r = tc.sqrt();
    let hbar = sol.params.hbar;
    let (g_lo, g_hi) = (affine(lo, 1.0), affine(hi, -1.0));
    match sol.rep {
        Rep::Pi3 => {
            let tan = if hi <= lo {
                (g_hi * r).tan().recip()
            } else if dom.lo == 0.0 {
                (g_lo * r).tan()
            } else {
                -(g_lo * r).tan().recip()
            };
            RepSymbols { a: J::constant(I * hbar), b: J::constant(0.0), pi: tan * (1.0 / r) }
        }
        Rep::Pi4 => {
            let one_p = if dom.lo == 0.0 { t * r + 1.0 } else { g_lo * r };
            let s = (g_hi * r * one_p).sqrt();
            RepSymbols {
                a: s * (-hbar),
                b: t * (-I * hbar * tc) / s,
                pi: t / s,
            }
        }
        _ => rep_symbols(sol.rep, &sol.params, t),
    }
}

pub fn expectation_direct(
    model: ModelSpec,
    rep: Rep,
    params: DeformationParams,
    n: usize,
    obs: &Observable,
) -> Result<Complex64> {
    matrix_element_direct(model, rep, params, n, n, obs)
}

// jet of an affine function with value `v` and slope `d`
fn affine(v: f64, d: f64) -> J {
    let mut c = [Complex64::new(0.0, 0.0); ORDER];
    c[0] = Complex64::new(v, 0.0);
    c[1] = Complex64::new(d, 0.0);
    J::from_coeffs(c)
}

/// `⟨ψ_n|ρ F ψ_m⟩` from the single integral over the Π₃ variable
/// `z ∈ (-1, 1)`, with `X̂ = A(z)∂_z` and `P̂ = π(z)`:
///
/// * HO and Swanson, `z = sin(√τ̌ p)`: `A = iħ√(τ̌(1-z²))`,
///   `π = z/√(τ̌(1-z²))`, weight `(1-z²)^λ`.
/// * Pöschl-Teller, `z = cos(2√τ̌ p)`: `A = -2iħ√(τ̌(1-z²))`,
///   `π = √((1-z)/(1+z))/√τ̌`, weight `(1-z)^a (1+z)^b`.
///
/// The derivative acts on the special-function basis through jets; each half
/// of the interval is integrated in the distance to its wall.
pub fn matrix_element_unified(
    model: ModelSpec,
    params: DeformationParams,
    n: usize,
    m: usize,
    obs: &Observable,
) -> Result<Complex64> {
    check_word_model(model, obs)?;
    let sol = solve(model, Rep::Pi3, params)?;
    let (lv_n, lv_m) = (sol.level(n)?, sol.level(m)?);
    check_integrable(&lv_n, obs)?;
    let kappa = sol.gauge_exponent();
    let tc = params.tau_check();
    let r = tc.sqrt();
    let hbar = params.hbar;
    let sample = |side: f64, y: f64| -> Moments {
        // the integrand is O(y^e) with e > -1 and the jets overflow near y = 0
        if !(y > 1e-60 && y <= 1.0) {
            return Moments::zero();
        }
        // 1 - z and 1 + z with full precision next to the wall
        let (om, op) = if side > 0.0 {
            (affine(y, -1.0), affine(2.0 - y, 1.0))
        } else {
            (affine(2.0 - y, -1.0), affine(y, 1.0))
        };
        let (om0, op0) = (om.re(), op.re());
        let z = affine(side * (1.0 - y), 1.0);
        let s2 = om * op;
        let sq = s2.sqrt();
        let (a, pi, dl, ln_w, u_n, u_m) = match (lv_n, lv_m) {
            (Level::Legendre { n, lambda, .. }, Level::Legendre { n: m, .. }) => (
                sq * (I * hbar * r),
                z / sq * (1.0 / r),
                z / s2 * (-(kappa + 0.5 + lambda)),
                lambda * (om0.ln() + op0.ln()),
                gegenbauer(n, lambda + 0.5, z),
                gegenbauer(m, lambda + 0.5, z),
            ),
            (Level::Jacobi(sn), Level::Jacobi(sm)) => (
                sq * (-2.0 * I * hbar * r),
                (om / op).sqrt() * (1.0 / r),
                om.recip() * (-(0.5 * sn.a + 0.25)) + op.recip() * (0.5 * sn.b + 0.25 + 0.5 * kappa),
                sn.a * om0.ln() + sn.b * op0.ln(),
                jacobi_generic(sn, z),
                jacobi_generic(sm, z),
            ),
            _ => return Moments::nan(),
        };
        let conj = Conjugated { a, b: J::constant(0.0), pi, dl };
        let fu = conj.apply(obs, u_m);
        let w = ln_w.exp();
        let (un, um) = (u_n.re(), u_m.re());
        Moments { f: fu * un * w, nn: un * un * w, mm: um * um * w }
    };
    let right = double_exponential(Span::Finite(0.0, 1.0), QUAD_TOL, |y| sample(1.0, y))?;
    let left = double_exponential(Span::Finite(0.0, 1.0), QUAD_TOL, |y| sample(-1.0, y))?;
    Ok((right + left).ratio())
}

pub fn expectation_unified(model: ModelSpec, params: DeformationParams, n: usize, obs: &Observable) -> Result<Complex64> {
    matrix_element_unified(model, params, n, n, obs)
}

/// Uncertainty data of one state against the deformed bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Uncertainty {
    pub n: usize,
    pub delta_x: f64,
    pub delta_p: f64,
    pub p2: f64,
    /// `ħ√τ̌`
    pub min_length: f64,
    /// `(ħ/2)(1 + τ̌⟨P²⟩)`
    pub product_bound: f64,
}

/// Relative slack in the bound checks; ground states saturate the product
/// bound to rounding.
pub const BOUND_SLACK: f64 = 1e-10;

impl Uncertainty {
    pub fn length_ok(&self) -> bool {
        self.delta_x >= self.min_length * (1.0 - BOUND_SLACK)
    }

    pub fn product_ok(&self) -> bool {
        self.delta_x * self.delta_p >= self.product_bound * (1.0 - BOUND_SLACK)
    }
}

/// `ΔX`, `ΔP` from the unified engine; variances use the real part of
/// `⟨F²⟩ - ⟨F⟩²`.
pub fn uncertainty(model: ModelSpec, params: DeformationParams, n: usize) -> Result<Uncertainty> {
    let get = |src: &str| Observable::parse(src, model, &params).and_then(|o| expectation_unified(model, params, n, &o));
    let (x, x2, p, p2) = (get("X")?, get("X^2")?, get("P")?, get("P^2")?);
    let var_x = (x2 - x * x).re;
    let var_p = (p2 - p * p).re;
    let tc = params.tau_check();
    Ok(Uncertainty {
        n,
        delta_x: var_x.max(0.0).sqrt(),
        delta_p: var_p.max(0.0).sqrt(),
        p2: p2.re,
        min_length: params.hbar * tc.sqrt(),
        product_bound: 0.5 * params.hbar * (1.0 + tc * p2.re),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn natural(tau: f64) -> DeformationParams {
        DeformationParams::natural(tau).unwrap()
    }

    fn obs(model: ModelSpec, tau: f64, src: &str) -> Observable {
        Observable::parse(src, model, &natural(tau)).unwrap()
    }

    const HO: ModelSpec = ModelSpec::HarmonicOscillator;

    #[test]
    fn identity_is_one() {
        for rep in [Rep::Pi1, Rep::Pi3, Rep::Pi4] {
            let v = expectation_direct(HO, rep, natural(0.2), 2, &obs(HO, 0.2, "1")).unwrap();
            assert!((v - 1.0).norm() < 1e-12);
        }
        let v = expectation_unified(HO, natural(0.2), 2, &obs(HO, 0.2, "1")).unwrap();
        assert!((v - 1.0).norm() < 1e-12);
    }

    #[test]
    fn oscillator_energy_and_parity() {
        let tau = 0.2;
        let sol = solve(HO, Rep::Pi1, natural(tau)).unwrap();
        for n in 0..4 {
            let e = sol.energy(n).unwrap();
            let h = expectation_unified(HO, natural(tau), n, &obs(HO, tau, "H")).unwrap();
            assert!((h - e).norm() < 1e-8, "{n}: {h} vs {e}");
            let p = expectation_unified(HO, natural(tau), n, &obs(HO, tau, "P")).unwrap();
            assert!(p.norm() < 1e-10);
        }
    }

    #[test]
    fn hamiltonian_decomposition() {
        let tau = 0.2;
        let e0 = solve(HO, Rep::Pi1, natural(tau)).unwrap().energy(0).unwrap();
        let x2 = expectation_unified(HO, natural(tau), 0, &obs(HO, tau, "X^2")).unwrap();
        let p2 = expectation_unified(HO, natural(tau), 0, &obs(HO, tau, "P^2")).unwrap();
        assert!((p2 - (e0 - x2 * 0.5) * 2.0).norm() < 1e-9);
    }

    #[test]
    fn direct_matches_unified() {
        let tau = 0.2;
        let u = expectation_unified(HO, natural(tau), 0, &obs(HO, tau, "X^2")).unwrap();
        let d = expectation_direct(HO, Rep::Pi3, natural(tau), 0, &obs(HO, tau, "X^2")).unwrap();
        assert!((u - d).norm() < 1e-7, "{u} {d}");
        let sw = ModelSpec::Swanson { alpha: 0.3, beta: 0.2 };
        let a = expectation_direct(sw, Rep::Pi1, natural(0.5), 1, &obs(sw, 0.5, "P^2")).unwrap();
        let b = expectation_direct(sw, Rep::Pi3, natural(0.5), 1, &obs(sw, 0.5, "P^2")).unwrap();
        assert!((a - b).norm() < 1e-7, "{a} {b}");
    }

    #[test]
    fn hamiltonian_matrix_is_diagonal() {
        let tau = 0.5;
        let sw = ModelSpec::Swanson { alpha: 0.3, beta: 0.2 };
        let h = obs(sw, tau, "H");
        let sol = solve(sw, Rep::Pi1, natural(tau)).unwrap();
        for (n, m) in [(0, 2), (1, 3), (2, 2)] {
            let v = matrix_element_direct(sw, Rep::Pi1, natural(tau), n, m, &h).unwrap();
            let target = if n == m { sol.energy(n).unwrap() } else { Complex64::new(0.0, 0.0) };
            assert!((v - target).norm() < 1e-8, "({n},{m}) {v}");
        }
    }

    #[test]
    fn inverse_momentum_rules() {
        let pt = ModelSpec::PoschlTeller { alpha: 1.0, beta: 0.5 };
        assert!(expectation_unified(pt, natural(0.25), 0, &obs(pt, 0.25, "P^-2")).is_ok());
        assert!(matches!(
            expectation_unified(HO, natural(0.25), 0, &obs(HO, 0.25, "P^-2")),
            Err(Error::InvalidParameter(_))
        ));
        // λ ≈ 0.22 at this point; X^4 is not integrable at the walls
        let sw = ModelSpec::Swanson { alpha: 15.0, beta: 0.1 };
        assert!(matches!(
            expectation_unified(sw, natural(0.5), 0, &obs(sw, 0.5, "X^4")),
            Err(Error::NonIntegrable(_))
        ));
    }

    #[test]
    fn minimal_length_oscillator() {
        for tau in [0.1, 0.5] {
            for n in 0..3 {
                let u = uncertainty(HO, natural(tau), n).unwrap();
                assert!(u.length_ok() && u.product_ok(), "{u:?}");
            }
        }
        let g = uncertainty(HO, natural(0.1), 0).unwrap();
        assert!((g.delta_x * g.delta_p / g.product_bound - 1.0).abs() < 1e-10);
    }
}
