//! Truncated Taylor arithmetic.
//!
//! A [`Jet<N>`] holds the first `N` Taylor coefficients `c_k = f^(k)(t0) / k!`
//! of a complex function around an expansion point. Arithmetic on jets
//! propagates exact derivatives through rational operations and the
//! elementary functions used by the coefficient tables, so derivatives of
//! `f`, `g`, `h`, of the special-function recurrences and of operator words
//! are exact up to rounding.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Minimal numeric interface shared by `f64`, `Complex64` and jets, enough to
/// run polynomial recurrences and power prefactors generically.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Mul<f64, Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn powf(self, e: f64) -> Self;
    fn sqrt(self) -> Self;
}

impl Scalar for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn powf(self, e: f64) -> Self {
        f64::powf(self, e)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
}

impl Scalar for Complex64 {
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn powf(self, e: f64) -> Self {
        // exact zero stays zero for positive exponents
        if self == Complex64::new(0.0, 0.0) && e > 0.0 {
            return self;
        }
        Complex64::powf(self, e)
    }
    fn sqrt(self) -> Self {
        Complex64::sqrt(self)
    }
}

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet<const N: usize> {
    c: [Complex64; N],
}

impl<const N: usize> Jet<N> {
    pub fn constant(v: impl Into<Complex64>) -> Self {
        let mut c = [ZERO; N];
        c[0] = v.into();
        Self { c }
    }

    /// The identity function `t` expanded at `t0`.
    pub fn variable(t0: impl Into<Complex64>) -> Self {
        let mut c = [ZERO; N];
        c[0] = t0.into();
        if N > 1 {
            c[1] = Complex64::new(1.0, 0.0);
        }
        Self { c }
    }

    pub fn from_coeffs(c: [Complex64; N]) -> Self {
        Self { c }
    }

    pub fn coeffs(&self) -> &[Complex64; N] {
        &self.c
    }

    pub fn value(&self) -> Complex64 {
        self.c[0]
    }

    pub fn re(&self) -> f64 {
        self.c[0].re
    }

    /// k-th derivative at the expansion point.
    pub fn derivative_at(&self, k: usize) -> Complex64 {
        let mut fact = 1.0;
        for j in 2..=k {
            fact *= j as f64;
        }
        self.c[k] * fact
    }

    /// Jet of the derivative. The top coefficient is unknown and set to zero,
    /// so every application consumes one order of validity.
    pub fn differentiate(&self) -> Self {
        let mut c = [ZERO; N];
        for k in 0..N.saturating_sub(1) {
            c[k] = self.c[k + 1] * (k as f64 + 1.0);
        }
        Self { c }
    }

    /// Antiderivative with the given constant term.
    fn integrate(&self, c0: Complex64) -> Self {
        let mut c = [ZERO; N];
        c[0] = c0;
        for k in 1..N {
            c[k] = self.c[k - 1] / k as f64;
        }
        Self { c }
    }

    pub fn scale(&self, s: impl Into<Complex64>) -> Self {
        let s = s.into();
        let mut c = self.c;
        for x in c.iter_mut() {
            *x *= s;
        }
        Self { c }
    }

    pub fn conj(&self) -> Self {
        let mut c = self.c;
        for x in c.iter_mut() {
            *x = x.conj();
        }
        Self { c }
    }

    pub fn recip(&self) -> Self {
        Self::constant(1.0) / *self
    }

    pub fn exp(&self) -> Self {
        let mut y = [ZERO; N];
        y[0] = self.c[0].exp();
        for k in 1..N {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += self.c[j] * y[k - j] * j as f64;
            }
            y[k] = acc / k as f64;
        }
        Self { c: y }
    }

    pub fn ln(&self) -> Self {
        let x0 = self.c[0];
        let mut y = [ZERO; N];
        y[0] = x0.ln();
        for k in 1..N {
            let mut acc = ZERO;
            for j in 1..k {
                acc += y[j] * self.c[k - j] * j as f64;
            }
            y[k] = (self.c[k] - acc / k as f64) / x0;
        }
        Self { c: y }
    }

    /// Real power via the recurrence `x y' = e x' y`.
    pub fn powf(&self, e: f64) -> Self {
        let x0 = self.c[0];
        let mut y = [ZERO; N];
        if x0 == ZERO {
            // only the exactly-constant zero case is well defined here
            return Self { c: y };
        }
        y[0] = x0.powf(e);
        for k in 1..N {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += self.c[j] * y[k - j] * ((e + 1.0) * j as f64 - k as f64);
            }
            y[k] = acc / (x0 * k as f64);
        }
        Self { c: y }
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let mut s = [ZERO; N];
        let mut c = [ZERO; N];
        s[0] = self.c[0].sin();
        c[0] = self.c[0].cos();
        for k in 1..N {
            let mut as_ = ZERO;
            let mut ac = ZERO;
            for j in 1..=k {
                let t = self.c[j] * j as f64;
                as_ += t * c[k - j];
                ac += t * s[k - j];
            }
            s[k] = as_ / k as f64;
            c[k] = -ac / k as f64;
        }
        (Self { c: s }, Self { c })
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    pub fn tan(&self) -> Self {
        let (s, c) = self.sin_cos();
        s / c
    }

    pub fn sinh_cosh(&self) -> (Self, Self) {
        let e = self.exp();
        let em = (-*self).exp();
        ((e - em).scale(0.5), (e + em).scale(0.5))
    }

    pub fn atan(&self) -> Self {
        let d = self.differentiate() / (Self::constant(1.0) + *self * *self);
        d.integrate(self.c[0].atan())
    }

    pub fn asin(&self) -> Self {
        let d = self.differentiate() / (Self::constant(1.0) - *self * *self).sqrt();
        d.integrate(self.c[0].asin())
    }

    pub fn asinh(&self) -> Self {
        let d = self.differentiate() / (Self::constant(1.0) + *self * *self).sqrt();
        d.integrate(self.c[0].asinh())
    }

    /// Compose with a function whose Taylor coefficients at `self.value()`
    /// are given (outer series in powers of `(x - x0)`).
    pub fn compose(&self, outer: &[Complex64; N]) -> Self {
        let mut dx = *self;
        dx.c[0] = ZERO;
        let mut acc = Self::constant(outer[0]);
        let mut pw = Self::constant(1.0);
        for k in 1..N {
            pw = pw * dx;
            acc = acc + pw.scale(outer[k]);
        }
        acc
    }
}

impl<const N: usize> Scalar for Jet<N> {
    fn from_f64(x: f64) -> Self {
        Self::constant(x)
    }
    fn powf(self, e: f64) -> Self {
        Jet::powf(&self, e)
    }
    fn sqrt(self) -> Self {
        Jet::sqrt(&self)
    }
}

impl<const N: usize> Add for Jet<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for k in 0..N {
            self.c[k] += rhs.c[k];
        }
        self
    }
}

impl<const N: usize> Sub for Jet<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for k in 0..N {
            self.c[k] -= rhs.c[k];
        }
        self
    }
}

impl<const N: usize> Neg for Jet<N> {
    type Output = Self;
    fn neg(mut self) -> Self {
        for k in 0..N {
            self.c[k] = -self.c[k];
        }
        self
    }
}

impl<const N: usize> Mul for Jet<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut c = [ZERO; N];
        for i in 0..N {
            if self.c[i] == ZERO {
                continue;
            }
            for j in 0..N - i {
                c[i + j] += self.c[i] * rhs.c[j];
            }
        }
        Self { c }
    }
}

impl<const N: usize> Div for Jet<N> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let mut q = [ZERO; N];
        let d0 = rhs.c[0];
        for k in 0..N {
            let mut acc = self.c[k];
            for j in 1..=k {
                acc -= rhs.c[j] * q[k - j];
            }
            q[k] = acc / d0;
        }
        Self { c: q }
    }
}

impl<const N: usize> Mul<f64> for Jet<N> {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

impl<const N: usize> Mul<Complex64> for Jet<N> {
    type Output = Self;
    fn mul(self, rhs: Complex64) -> Self {
        self.scale(rhs)
    }
}

impl<const N: usize> Add<f64> for Jet<N> {
    type Output = Self;
    fn add(mut self, rhs: f64) -> Self {
        self.c[0] += rhs;
        self
    }
}

impl<const N: usize> Sub<f64> for Jet<N> {
    type Output = Self;
    fn sub(mut self, rhs: f64) -> Self {
        self.c[0] -= rhs;
        self
    }
}

impl<const N: usize> Div<f64> for Jet<N> {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        self.scale(1.0 / rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type J = Jet<6>;

    fn fd_derivs(f: impl Fn(f64) -> f64, x: f64) -> [f64; 3] {
        let h = 2e-3;
        let d1 = (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
        let d2 = (-f(x - 2.0 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h)
            - f(x + 2.0 * h))
            / (12.0 * h * h);
        let d3 = (-f(x + 3.0 * h) + 8.0 * f(x + 2.0 * h) - 13.0 * f(x + h) + 13.0 * f(x - h)
            - 8.0 * f(x - 2.0 * h)
            + f(x - 3.0 * h))
            / (8.0 * h * h * h);
        [d1, d2, d3]
    }

    fn check(jf: impl Fn(J) -> J, f: impl Fn(f64) -> f64, x: f64) {
        let j = jf(J::variable(x));
        assert!((j.value().re - f(x)).abs() < 1e-12 * (1.0 + f(x).abs()));
        let fd = fd_derivs(&f, x);
        for k in 0..3 {
            let got = j.derivative_at(k + 1).re;
            assert!(
                (got - fd[k]).abs() < 1e-5 * (1.0 + fd[k].abs()),
                "order {} at {}: {} vs {}",
                k + 1,
                x,
                got,
                fd[k]
            );
        }
    }

    #[test]
    fn elementary_functions_match_finite_differences() {
        for &x in &[-0.7, 0.1, 0.45] {
            check(|t| t.sin() * t.cos(), |t| t.sin() * t.cos(), x);
            check(|t| t.tan(), f64::tan, x);
            check(|t| t.atan(), f64::atan, x);
            check(|t| t.asin(), f64::asin, x);
            check(|t| t.asinh(), f64::asinh, x);
            check(|t| (t * t + 1.0).powf(-0.75), |t| (t * t + 1.0).powf(-0.75), x);
            check(|t| (t * t + 2.0).ln() / (t + 3.0), |t| (t * t + 2.0).ln() / (t + 3.0), x);
            check(|t| t.exp().sqrt(), |t| t.exp().sqrt(), x);
        }
    }

    #[test]
    fn differentiate_shifts_coefficients() {
        let x = J::variable(2.0);
        let cube = x * x * x;
        let d = cube.differentiate();
        assert!((d.value().re - 12.0).abs() < 1e-14);
        assert!((d.derivative_at(1).re - 12.0).abs() < 1e-14);
        assert!((d.derivative_at(2).re - 6.0).abs() < 1e-14);
    }

    #[test]
    fn compose_matches_direct_evaluation() {
        // exp(sin t) via composing exp's series with sin's jet
        let x0 = 0.3;
        let s = J::variable(x0).sin();
        let e0 = s.value().exp();
        let mut outer = [Complex64::new(0.0, 0.0); 6];
        let mut fact = 1.0;
        for (k, o) in outer.iter_mut().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            *o = e0 / fact;
        }
        let composed = s.compose(&outer);
        let direct = s.exp();
        for k in 0..6 {
            assert!((composed.coeffs()[k] - direct.coeffs()[k]).norm() < 1e-13);
        }
    }
}
