//! Liouville-type reduction of `-f ψ'' + g ψ' + h ψ = E ψ` to a potential
//! problem `-φ'' + V φ = E φ`, with `ψ = e^χ φ`, `χ' = (f' + 2g)/(4f)` and
//! `q' = f^{-1/2}`, and the factorization `φ = v(q) F(w(q))` used to read off
//! exact solutions.
//!
//! All maps act on the real parametrization of [`FghCoefficients`], so the
//! imaginary momentum segment of Π₄ is handled through `p = i s`.

use num_complex::Complex64;

use crate::algebra::{FghCoefficients, Interval, ModelSpec, Rep};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::specfun::quadrature::gauss_kronrod;

/// Closed-form shape of `f` in the real parametrization, `f = k·shape(t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Shape {
    /// `(1 + τ̌t²)²`
    Squared,
    /// `1`
    Flat,
    /// `1 - τ̌t²`
    Segment,
    /// `1 + τ̌t²`
    Linear,
}

/// Output of [`to_potential`].
#[derive(Clone, Debug)]
pub struct TransformResult {
    pub fgh: FghCoefficients,
    /// Reference point where `χ` and `q` vanish.
    pub p0: f64,
    pub p_domain: Interval,
    pub q_domain: Interval,
    /// `-1` when the ODE was multiplied through by `-1` to make `f > 0`; the
    /// potential problem then has eigenvalue `-E`.
    pub energy_sign: f64,
    k: f64,
    shape: Shape,
    q_offset: f64,
}

fn shape_of(rep: Rep) -> Shape {
    match rep {
        Rep::Pi1 | Rep::Pi2 => Shape::Squared,
        Rep::Pi3 => Shape::Flat,
        Rep::Pi4 => Shape::Segment,
        Rep::Pi4Prime => Shape::Linear,
    }
}

/// Reference point: the origin on symmetric domains; for half-line models the
/// preimage of the midpoint of a bounded `q` interval, else `1/√τ̌`.
pub fn reference_point(fgh: &FghCoefficients) -> f64 {
    let tc = fgh.params.tau_check();
    match fgh.model {
        ModelSpec::PoschlTeller { .. } => match fgh.rep {
            Rep::Pi1 | Rep::Pi2 | Rep::Pi4Prime => 1.0 / tc.sqrt(),
            Rep::Pi3 => std::f64::consts::FRAC_PI_4 / tc.sqrt(),
            Rep::Pi4 => 1.0 / (2.0 * tc).sqrt(),
        },
        _ => 0.0,
    }
}

/// Build the transform with the default reference point.
pub fn to_potential(fgh: FghCoefficients) -> Result<TransformResult> {
    let p0 = reference_point(&fgh);
    to_potential_at(fgh, p0)
}

pub fn to_potential_at(fgh: FghCoefficients, p0: f64) -> Result<TransformResult> {
    let p_domain = fgh.domain();
    if !p_domain.contains(p0) {
        return Err(Error::InvalidParameter(format!("reference point {p0} outside the domain")));
    }
    // f must keep one sign and stay real on the interior
    let probe = |t: f64| fgh.at(t).f;
    let lo = if p_domain.lo.is_finite() { p_domain.lo } else { -50.0 };
    let hi = if p_domain.hi.is_finite() { p_domain.hi } else { 50.0 };
    let f0 = probe(p0);
    if f0.im.abs() > 1e-12 * f0.norm() {
        return Err(Error::NonMonotoneMap(format!("f is complex at the reference point: {f0}")));
    }
    let energy_sign = f0.re.signum();
    for j in 1..256 {
        let t = lo + (hi - lo) * j as f64 / 256.0;
        let v = probe(t);
        if v.re * energy_sign <= 0.0 {
            return Err(Error::SingularCoefficient(t));
        }
    }
    let tc = fgh.params.tau_check();
    let shape = shape_of(fgh.rep);
    let k = fgh.at(0.0).f.re * energy_sign;
    let mut out = TransformResult {
        fgh,
        p0,
        p_domain,
        q_domain: Interval::new(0.0, 0.0),
        energy_sign,
        k,
        shape,
        q_offset: 0.0,
    };
    // closed form must agree with f itself
    let check_t = 0.5 * (lo + hi) + 0.123 * (hi - lo) * 0.5;
    let fv = fgh.at(check_t).f.re * energy_sign;
    let shape_v = out.shape_value(check_t, tc);
    if ((k * shape_v) - fv).abs() > 1e-10 * fv.abs() {
        return Err(Error::NonMonotoneMap(format!(
            "f does not follow the expected closed form at {check_t}"
        )));
    }
    out.q_offset = out.raw_q(p0);
    out.q_domain = Interval::new(out.q_of_p(p_domain.lo), out.q_of_p(p_domain.hi));
    Ok(out)
}

impl TransformResult {
    fn shape_value(&self, t: f64, tc: f64) -> f64 {
        match self.shape {
            Shape::Squared => (1.0 + tc * t * t).powi(2),
            Shape::Flat => 1.0,
            Shape::Segment => 1.0 - tc * t * t,
            Shape::Linear => 1.0 + tc * t * t,
        }
    }

    // ∫_0^t f^{-1/2}
    fn raw_q(&self, t: f64) -> f64 {
        let tc = self.fgh.params.tau_check();
        let sk = self.k.sqrt();
        if tc == 0.0 {
            return t / sk;
        }
        let r = tc.sqrt();
        let u = r * t;
        let v = match self.shape {
            Shape::Squared => u.atan() / r,
            Shape::Flat => t,
            Shape::Segment => u.clamp(-1.0, 1.0).asin() / r,
            Shape::Linear => u.asinh() / r,
        };
        v / sk
    }

    /// `q(p) = ∫_{p0}^{p} f^{-1/2}`; infinite arguments give the domain ends.
    pub fn q_of_p(&self, t: f64) -> f64 {
        self.raw_q(t) - self.q_offset
    }

    /// `dq/dp = f^{-1/2}`.
    pub fn dq_dp(&self, t: f64) -> f64 {
        let tc = self.fgh.params.tau_check();
        1.0 / (self.k * self.shape_value(t, tc)).sqrt()
    }

    /// The same map by adaptive Gauss-Kronrod (abs. tol 1e-12), for finite `t`.
    pub fn q_of_p_quadrature(&self, t: f64) -> Result<f64> {
        let sign = self.energy_sign;
        let fgh = self.fgh;
        gauss_kronrod(|s| 1.0 / (fgh.at(s).f.re * sign).sqrt(), self.p0, t, 1e-12)
    }

    /// Inverse map by bracketing bisection with Newton polish (tol 1e-12).
    pub fn p_of_q(&self, q: f64) -> Result<f64> {
        if !(q > self.q_domain.lo && q < self.q_domain.hi) {
            return Err(Error::InvalidParameter(format!("q = {q} outside {:?}", self.q_domain)));
        }
        let dom = self.p_domain;
        let mut lo = if dom.lo.is_finite() { dom.lo } else { self.p0 - 1.0 };
        let mut hi = if dom.hi.is_finite() { dom.hi } else { self.p0 + 1.0 };
        while !dom.lo.is_finite() && self.q_of_p(lo) > q {
            lo = self.p0 - 2.0 * (self.p0 - lo);
        }
        while !dom.hi.is_finite() && self.q_of_p(hi) < q {
            hi = self.p0 + 2.0 * (hi - self.p0);
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.q_of_p(mid) < q {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-6 * (1.0 + mid.abs()) {
                break;
            }
        }
        let mut t = 0.5 * (lo + hi);
        for _ in 0..50 {
            let step = (self.q_of_p(t) - q) / self.dq_dp(t);
            let next = (t - step).clamp(lo, hi);
            let done = (next - t).abs() <= 1e-12 * (1.0 + t.abs());
            t = next;
            if done {
                break;
            }
        }
        Ok(t)
    }

    /// `χ(p) = ∫_{p0}^{p} (f' + 2g)/(4f)` by Gauss-Kronrod.
    pub fn chi(&self, t: f64) -> Result<f64> {
        let fgh = self.fgh;
        gauss_kronrod(
            |s| {
                let v = fgh.at(s);
                ((v.df + v.g * 2.0) / (v.f * 4.0)).re
            },
            self.p0,
            t,
            1e-13,
        )
    }

    /// Potential as a function of the original variable.
    pub fn potential_at_p(&self, t: f64) -> Complex64 {
        let v = self.fgh.at(t);
        let s = self.energy_sign;
        let (f, df, ddf, g, dg, h) = (v.f * s, v.df * s, v.ddf * s, v.g * s, v.dg * s, v.h * s);
        (g * g * 4.0 + df * df * 3.0 + g * df * 8.0) / (f * 16.0) - ddf / 4.0 - dg / 2.0 + h
    }

    pub fn potential(&self, q: f64) -> Result<Complex64> {
        Ok(self.potential_at_p(self.p_of_q(q)?))
    }
}

/// Special-function family in the factorization `φ = v F(w)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    /// `P_ν^μ` with `ν = n - μ`.
    Legendre { n: usize, mu: f64 },
    /// `P_n^{(a,b)}`.
    Jacobi { n: usize, a: f64, b: f64 },
}

/// Coordinate `w(q)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WMap {
    /// `sin(√c q + phase)`, with `(w')² / (1 - w²) = c`.
    Sin { sqrt_c: f64, phase: f64 },
    /// `cos(√c q + phase)`, with `(w')² / (1 - w²) = c`.
    Cos { sqrt_c: f64, phase: f64 },
    /// `i sinh(√c q)`, with `(w')² / (1 - w²) = -c`.
    ISinh { sqrt_c: f64 },
}

impl WMap {
    pub fn jet<const N: usize>(&self, q: Jet<N>) -> Jet<N> {
        match *self {
            WMap::Sin { sqrt_c, phase } => (q * sqrt_c + phase).sin(),
            WMap::Cos { sqrt_c, phase } => (q * sqrt_c + phase).cos(),
            WMap::ISinh { sqrt_c } => (q * sqrt_c).sinh_cosh().0 * Complex64::new(0.0, 1.0),
        }
    }

    pub fn eval(&self, q: f64) -> Complex64 {
        self.jet(Jet::<1>::variable(q)).value()
    }

    /// `+1` for the trigonometric maps, `-1` for the hyperbolic one.
    pub fn sign(&self) -> f64 {
        match self {
            WMap::ISinh { .. } => -1.0,
            _ => 1.0,
        }
    }

    pub fn c(&self) -> f64 {
        match *self {
            WMap::Sin { sqrt_c, .. } | WMap::Cos { sqrt_c, .. } | WMap::ISinh { sqrt_c } => sqrt_c * sqrt_c,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FactorizationAnsatz {
    pub family: Family,
    pub w: WMap,
}

impl FactorizationAnsatz {
    /// `Q(w)` and `dQ/dw`.
    pub fn q_coeff(&self, w: Complex64) -> (Complex64, Complex64) {
        let one = Complex64::new(1.0, 0.0);
        let d = one - w * w;
        match self.family {
            Family::Legendre { .. } => (-w * 2.0 / d, -(one + w * w) * 2.0 / (d * d)),
            Family::Jacobi { a, b, .. } => {
                let num = -w * (2.0 + a + b) + (b - a);
                let q = num / d;
                let dq = (-(2.0 + a + b) * d + num * w * 2.0) / (d * d);
                (q, dq)
            }
        }
    }

    pub fn r_coeff(&self, w: Complex64) -> Complex64 {
        let d = Complex64::new(1.0, 0.0) - w * w;
        match self.family {
            Family::Legendre { n, mu } => {
                let nu = n as f64 - mu;
                (-(mu * mu) / d + nu * (nu + 1.0)) / d
            }
            Family::Jacobi { n, a, b } => Complex64::new(n as f64 * (n as f64 + 1.0 + a + b), 0.0) / d,
        }
    }

    /// Right-hand side of the master identity
    /// `E - V = w'''/(2w') - 3/4 (w''/w')² + w'² (R - Q_w/2 - Q²/4)`.
    pub fn master_rhs(&self, q: f64) -> Complex64 {
        let w = self.w.jet(Jet::<4>::variable(q));
        let (w0, w1, w2, w3) = (w.value(), w.derivative_at(1), w.derivative_at(2), w.derivative_at(3));
        let (qq, dq) = self.q_coeff(w0);
        let r = self.r_coeff(w0);
        w3 / (w1 * 2.0) - (w2 / w1) * (w2 / w1) * 0.75 + w1 * w1 * (r - dq / 2.0 - qq * qq / 4.0)
    }

    /// `(w')² / (1 - w²) - sign·c` at `q`.
    pub fn c_defect(&self, q: f64) -> f64 {
        let w = self.w.jet(Jet::<2>::variable(q));
        let (w0, w1) = (w.value(), w.derivative_at(1));
        (w1 * w1 / (Complex64::new(1.0, 0.0) - w0 * w0) - self.w.sign() * self.w.c()).norm()
    }
}

/// `max_q |RHS(q) - (E - V(q))|` over an interior grid.
pub fn master_residual(ansatz: &FactorizationAnsatz, transform: &TransformResult, energy: f64, q_grid: &[f64]) -> Result<f64> {
    let e = energy * transform.energy_sign;
    let mut worst: f64 = 0.0;
    for &q in q_grid {
        let lhs = Complex64::new(e, 0.0) - transform.potential(q)?;
        worst = worst.max((ansatz.master_rhs(q) - lhs).norm());
    }
    Ok(worst)
}

/// `v(q) = (w')^{-1/2} exp(½∫^{w} Q dw)` with the antiderivative in closed form
/// for both families.
pub fn v_from_qw(ansatz: &FactorizationAnsatz, q: f64) -> Result<Complex64> {
    let w = ansatz.w.jet(Jet::<2>::variable(q));
    let (w0, w1) = (w.value(), w.derivative_at(1));
    let one = Complex64::new(1.0, 0.0);
    let integrated = match ansatz.family {
        Family::Legendre { .. } => {
            let d = one - w0 * w0;
            if d.im.abs() < 1e-300 && d.re < 0.0 {
                return Err(Error::BranchAmbiguity);
            }
            d.sqrt()
        }
        Family::Jacobi { a, b, .. } => (one - w0).powf(0.5 * (1.0 + a)) * (one + w0).powf(0.5 * (1.0 + b)),
    };
    Ok(integrated / w1.sqrt())
}

/// Check that `1 - w²` keeps its sign over the grid.
pub fn check_branch(ansatz: &FactorizationAnsatz, q_grid: &[f64]) -> Result<()> {
    let mut seen = 0.0f64;
    for &q in q_grid {
        let w = ansatz.w.eval(q);
        let d = Complex64::new(1.0, 0.0) - w * w;
        if d.im.abs() > 1e-12 {
            continue;
        }
        let s = d.re.signum();
        if seen != 0.0 && s != seen {
            return Err(Error::BranchAmbiguity);
        }
        seen = s;
    }
    Ok(())
}

/// Uniform interior grid with `count` points, avoiding the ends of `q_domain`.
pub fn interior_grid(q_domain: Interval, count: usize, span: f64) -> Vec<f64> {
    let (lo, hi) = if q_domain.is_bounded() {
        (q_domain.lo, q_domain.hi)
    } else {
        (q_domain.lo.max(-span), q_domain.hi.min(span))
    };
    (1..=count).map(|j| lo + (hi - lo) * j as f64 / (count + 1) as f64).collect()
}
