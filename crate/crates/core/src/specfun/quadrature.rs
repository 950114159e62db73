//! Quadrature rules.
//!
//! * Gauss-Legendre nodes by Newton iteration on `P_n`, with an order-doubling
//!   driver.
//! * Adaptive Gauss-Kronrod (7/15) for the coordinate and gauge integrals.
//! * Double-exponential rules (tanh-sinh, sinh-sinh, exp-sinh) for integrands
//!   with algebraic endpoint behaviour, which is what `(1 - z^2)^lambda`
//!   weights and slowly decaying momentum-space states produce.

use std::f64::consts::{FRAC_PI_2, PI};
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values a quadrature can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
    fn finite(&self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Nodes and weights of the `count`-point Gauss-Legendre rule on [-1, 1],
/// nodes in ascending order.
pub fn gauss_legendre_nodes(count: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(count > 0, "rule needs at least one node");
    let n = count;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        // Tricomi initial guess
        let theta = PI * (i as f64 + 0.75) / (nf + 0.5);
        let mut z = theta.cos() * (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Fixed-order Gauss-Legendre rule with an order-doubling driver.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(count: usize) -> Self {
        let (nodes, weights) = gauss_legendre_nodes(count);
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate<T: QuadValue>(&self, a: f64, b: f64, f: impl Fn(f64) -> T) -> T {
        let c = 0.5 * (a + b);
        let d = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + f(c + d * x) * (w * d))
    }

    /// Start at order 128 and double until two successive results agree to
    /// `tol` (absolute, relative to max(1, |I|)).
    pub fn integrate_adaptive<T: QuadValue>(
        a: f64,
        b: f64,
        tol: f64,
        f: impl Fn(f64) -> T,
    ) -> Result<T> {
        let mut order = 128;
        let mut prev = GaussLegendre::new(order).integrate(a, b, &f);
        while order < 8192 {
            order *= 2;
            let next = GaussLegendre::new(order).integrate(a, b, &f);
            if (next - prev).magnitude() <= tol * next.magnitude().max(1.0) {
                return Ok(next);
            }
            prev = next;
        }
        Err(Error::Quadrature(format!(
            "Gauss-Legendre doubling reached order {order} without agreement"
        )))
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_3,
    0.949_107_912_342_758_524_526_189_684_047_9,
    0.864_864_423_359_769_072_789_712_788_640_9,
    0.741_531_185_599_394_439_863_864_773_280_8,
    0.586_087_235_467_691_130_294_144_845_693_0,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_2,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_20,
    0.104_790_010_322_250_183_839_876_322_541_5,
    0.140_653_259_715_525_918_745_189_590_510_2,
    0.169_004_726_639_267_902_826_583_426_598_6,
    0.190_350_578_064_785_409_913_256_402_421_0,
    0.204_432_940_075_298_892_414_161_999_234_6,
    0.209_482_141_084_727_828_012_999_174_891_7,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_1,
    0.279_705_391_489_276_667_901_467_771_423_8,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_3,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let d = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = d * XGK[j];
        let s = f(c - x) + f(c + x);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * d, ((kron - gauss) * d).abs())
}

/// Adaptive Gauss-Kronrod on a finite interval with absolute tolerance.
pub fn gauss_kronrod(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut stack = vec![(a, b, 0usize)];
    let mut total = 0.0;
    let mut evaluations = 0usize;
    while let Some((lo, hi, depth)) = stack.pop() {
        let (val, err) = gk15(&f, lo, hi);
        evaluations += 1;
        if !val.is_finite() {
            return Err(Error::Quadrature(format!("non-finite integrand on [{lo}, {hi}]")));
        }
        let share = abs_tol * ((hi - lo) / (b - a)).abs();
        if err <= share.max(1e-15 * val.abs()) || depth > 60 {
            total += val;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
        if evaluations > 200_000 {
            return Err(Error::Quadrature("Gauss-Kronrod subdivision limit".into()));
        }
    }
    Ok(total)
}

/// Interval kinds for the double-exponential rules.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Span {
    Finite(f64, f64),
    /// (a, +inf)
    UpperHalf(f64),
    Whole,
}

/// Double-exponential quadrature on `span`; levels are halved until two
/// successive trapezoid sums agree to `rel_tol`.
pub fn double_exponential<T: QuadValue>(span: Span, rel_tol: f64, f: impl Fn(f64) -> T) -> Result<T> {
    // (node, jacobian) at parameter t
    let map = |t: f64| -> Option<(f64, f64)> {
        match span {
            Span::Finite(a, b) => {
                let d = 0.5 * (b - a);
                let u = FRAC_PI_2 * t.sinh();
                let e = (-2.0 * u.abs()).exp();
                // distance to the nearer endpoint
                let comp = d * 2.0 * e / (1.0 + e);
                let edge = if t >= 0.0 { b } else { a };
                // an endpoint at zero keeps full relative precision
                if comp <= 4.0 * f64::EPSILON * edge.abs() || comp < 1e-300 {
                    return None;
                }
                let x = if t >= 0.0 { b - comp } else { a + comp };
                let ch = u.cosh();
                let jac = d * FRAC_PI_2 * t.cosh() / (ch * ch);
                Some((x, jac))
            }
            Span::UpperHalf(a) => {
                let u = FRAC_PI_2 * t.sinh();
                if u.abs() > 700.0 {
                    return None;
                }
                let ex = u.exp();
                let x = a + ex;
                if x == a {
                    return None;
                }
                Some((x, ex * FRAC_PI_2 * t.cosh()))
            }
            Span::Whole => {
                let u = FRAC_PI_2 * t.sinh();
                if u.abs() > 700.0 {
                    return None;
                }
                Some((u.sinh(), u.cosh() * FRAC_PI_2 * t.cosh()))
            }
        }
    };
    let tmax = 6.5;
    let sample = |t: f64| -> Result<T> {
        match map(t) {
            None => Ok(T::zero()),
            Some((x, jac)) => {
                if jac == 0.0 || !jac.is_finite() {
                    return Ok(T::zero());
                }
                let v = f(x);
                if !v.finite() {
                    return Err(Error::Quadrature(format!("non-finite integrand at x = {x}")));
                }
                Ok(v * jac)
            }
        }
    };
    // running sums of the integrand and of its magnitude; the latter sets the
    // scale for integrals that cancel to zero
    let mut h = 0.5;
    let first = sample(0.0)?;
    let (mut sum, mut mass) = (first, first.magnitude());
    let mut k = 1;
    while k as f64 * h <= tmax {
        let t = k as f64 * h;
        let (u, v) = (sample(t)?, sample(-t)?);
        sum = sum + u + v;
        mass += u.magnitude() + v.magnitude();
        k += 1;
    }
    let mut estimate = sum * h;
    for _level in 0..9 {
        h *= 0.5;
        // add the odd nodes of the refined grid
        let mut k = 1;
        let mut fresh = T::zero();
        while k as f64 * h <= tmax {
            let t = k as f64 * h;
            let (u, v) = (sample(t)?, sample(-t)?);
            fresh = fresh + u + v;
            mass += u.magnitude() + v.magnitude();
            k += 2;
        }
        sum = sum + fresh;
        let next = sum * h;
        let diff = (next - estimate).magnitude();
        estimate = next;
        if diff <= rel_tol * next.magnitude().max(mass * h).max(1e-300) {
            return Ok(next);
        }
    }
    // nine halvings without agreement: accept only if the last change is tiny in
    // absolute terms (integrand identically negligible)
    if estimate.magnitude() < 1e-200 {
        return Ok(estimate);
    }
    Err(Error::Quadrature("double-exponential refinement did not settle".into()))
}
