//! Ferrers associated Legendre functions `P_nu^mu(z)` on (-1, 1) along the
//! family `nu - mu = n`, with `mu <= 0` real.
//!
//! For `lambda = -mu >= 0` the Gegenbauer connection
//!
//! ```text
//! P_{n+lambda}^{-lambda}(z) = k_n(lambda) (1 - z^2)^{lambda/2} C_n^{lambda+1/2}(z),
//! k_n(lambda) = n! Gamma(2 lambda + 1) / (2^lambda Gamma(lambda + 1) Gamma(n + 2 lambda + 1))
//! ```
//!
//! reduces everything to a polynomial recurrence. The normalization is the
//! hypergeometric one: `P_nu^{-nu}(z) = (1 - z^2)^{nu/2} / (2^nu Gamma(nu + 1))`.
//! Evaluation is generic over [`Scalar`] so the same code serves real, complex
//! (imaginary-argument) and Taylor-jet inputs.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jet::Scalar;
use crate::specfun::ln_gamma;

/// Order `mu` and polynomial index `n`; degree is `nu = n - mu`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LegendreSpec {
    pub n: usize,
    pub mu: f64,
}

impl LegendreSpec {
    pub fn new(n: usize, mu: f64) -> Self {
        Self { n, mu }
    }

    pub fn degree(&self) -> f64 {
        self.n as f64 - self.mu
    }

    /// `ln k_n(lambda)` for `lambda = -mu >= 0`.
    pub(crate) fn ln_prefactor(&self) -> f64 {
        let lambda = -self.mu;
        let n = self.n as f64;
        ln_gamma(n + 1.0) + ln_gamma(2.0 * lambda + 1.0)
            - lambda * std::f64::consts::LN_2
            - ln_gamma(lambda + 1.0)
            - ln_gamma(n + 2.0 * lambda + 1.0)
    }

    fn check_order(&self) -> Result<()> {
        if self.mu > 0.0 {
            return Err(Error::UnsupportedOrder(self.mu));
        }
        if !self.mu.is_finite() {
            return Err(Error::InvalidParameter(format!("order {}", self.mu)));
        }
        Ok(())
    }
}

/// Gegenbauer polynomial `C_n^alpha(z)` by the three-term recurrence.
pub fn gegenbauer<T: Scalar>(n: usize, alpha: f64, z: T) -> T {
    let mut c0 = T::from_f64(1.0);
    if n == 0 {
        return c0;
    }
    let mut c1 = z * (2.0 * alpha);
    for k in 2..=n {
        let kf = k as f64;
        let c2 = (z * c1 * (2.0 * (kf + alpha - 1.0)) - c0 * (kf + 2.0 * alpha - 2.0)) * (1.0 / kf);
        c0 = c1;
        c1 = c2;
    }
    c1
}

/// `P_{n-mu}^{mu}(z)` with the factor `1 - z^2` supplied by the caller, which
/// keeps the endpoint behaviour accurate when `1 - z^2` is known in closed form.
pub fn assoc_legendre_with_complement<T: Scalar>(spec: LegendreSpec, z: T, one_minus_z2: T) -> Result<T> {
    spec.check_order()?;
    let lambda = -spec.mu;
    let k = spec.ln_prefactor().exp();
    let poly = gegenbauer(spec.n, lambda + 0.5, z);
    let weight = if lambda == 0.0 {
        T::from_f64(1.0)
    } else {
        one_minus_z2.powf(0.5 * lambda)
    };
    Ok(weight * poly * k)
}

/// Real Ferrers function on [-1, 1].
pub fn assoc_legendre(spec: LegendreSpec, z: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&z) {
        return Err(Error::DomainError(z));
    }
    if spec.mu > 0.0 && spec.mu.fract() == 0.0 {
        return positive_integer_order(spec, z);
    }
    assoc_legendre_with_complement(spec, z, (1.0 - z) * (1.0 + z))
}

/// Imaginary or general complex argument; the recurrence is polynomial in `z`.
pub fn assoc_legendre_complex(spec: LegendreSpec, z: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    assoc_legendre_with_complement(spec, z, one - z * z)
}

// P^m_nu = (-1)^m Gamma(nu+m+1)/Gamma(nu-m+1) P^{-m}_nu for integer m (Ferrers);
// vanishes when nu - m + 1 is a non-positive integer.
fn positive_integer_order(spec: LegendreSpec, z: f64) -> Result<f64> {
    let m = spec.mu as i64;
    let nu = spec.n as i64 - m;
    if nu < m {
        return Ok(0.0);
    }
    let lower = LegendreSpec::new((nu - m) as usize, -(m as f64));
    let base = assoc_legendre_with_complement(lower, z, (1.0 - z) * (1.0 + z))?;
    let ratio = (ln_gamma((nu + m + 1) as f64) - ln_gamma((nu - m + 1) as f64)).exp();
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * ratio * base)
}

/// Analytic `d/dz P_{n-mu}^{mu}(z)` from `d/dz C_n^a = 2a C_{n-1}^{a+1}`.
pub fn assoc_legendre_derivative(spec: LegendreSpec, z: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&z) {
        return Err(Error::DomainError(z));
    }
    if spec.mu > 0.0 && spec.mu.fract() == 0.0 && spec.mu <= spec.n as f64 {
        // integer order: differentiate the reduced form numerically exact via identity
        let m = spec.mu as i64;
        let nu = spec.n as i64 - m;
        if nu < m {
            return Ok(0.0);
        }
        let lower = LegendreSpec::new((nu - m) as usize, -(m as f64));
        let ratio = (ln_gamma((nu + m + 1) as f64) - ln_gamma((nu - m + 1) as f64)).exp();
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(sign * ratio * assoc_legendre_derivative(lower, z)?);
    }
    spec.check_order()?;
    let lambda = -spec.mu;
    let alpha = lambda + 0.5;
    let k = spec.ln_prefactor().exp();
    let w = (1.0 - z) * (1.0 + z);
    let c = gegenbauer(spec.n, alpha, z);
    let dc = if spec.n == 0 {
        0.0
    } else {
        2.0 * alpha * gegenbauer(spec.n - 1, alpha + 1.0, z)
    };
    let weight = if lambda == 0.0 { 1.0 } else { w.powf(0.5 * lambda) };
    let dweight = if lambda == 0.0 {
        0.0
    } else {
        -lambda * z * w.powf(0.5 * lambda - 1.0)
    };
    Ok(k * (dweight * c + weight * dc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::quadrature::{double_exponential, Span};

    #[test]
    fn lowest_member_closed_form() {
        // P_2^{-2}(0) = 1 / (2^2 Gamma(3)) = 0.125
        let v = assoc_legendre(LegendreSpec::new(0, -2.0), 0.0).unwrap();
        assert!((v - 0.125).abs() < 1e-15);
        // independent series check of P_nu^{-nu}(z) = (1-z^2)^{nu/2}/(2^nu Gamma(nu+1))
        for &(nu, z) in &[(1.7f64, 0.3f64), (3.25, -0.8), (0.4, 0.95)] {
            let v = assoc_legendre(LegendreSpec::new(0, -nu), z).unwrap();
            let oracle = (1.0 - z * z).powf(nu / 2.0) / (2f64.powf(nu) * ln_gamma(nu + 1.0).exp());
            assert!((v - oracle).abs() < 1e-14 * oracle.abs().max(1e-300));
        }
    }

    #[test]
    fn reference_values_against_hypergeometric_evaluation() {
        // values from an arbitrary-precision hypergeometric evaluation of Ferrers P (type 2)
        let v = assoc_legendre(LegendreSpec::new(2, -1.3), 0.4).unwrap();
        assert!((v - (-0.007_026_748_663_493_896)).abs() < 1e-15);
        let v = assoc_legendre(LegendreSpec::new(3, -3.7), -0.6).unwrap();
        assert!((v - (-0.000_204_070_761_992_784_6)).abs() < 1e-16);
    }

    #[test]
    fn classical_legendre_at_zero_order() {
        let v = assoc_legendre(LegendreSpec::new(2, 0.0), 0.5).unwrap();
        assert!((v + 0.125).abs() < 1e-15);
        let d = assoc_legendre_derivative(LegendreSpec::new(1, 0.0), 0.3).unwrap();
        assert!((d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vanishes_at_endpoints_for_negative_order() {
        // decay is (1 - z)^{lambda/2}: a 1e-3 drop at distance 1e-6 needs lambda above ~1.1
        for n in 0..5 {
            for &mu in &[-1.5, -4.2, -10.0] {
                let s = LegendreSpec::new(n, mu);
                assert_eq!(assoc_legendre(s, 1.0).unwrap(), 0.0);
                assert_eq!(assoc_legendre(s, -1.0).unwrap(), 0.0);
                let interior = (0..=200)
                    .map(|i| assoc_legendre(s, -0.99 + 1.98 * i as f64 / 200.0).unwrap().abs())
                    .fold(0.0, f64::max);
                let edge = assoc_legendre(s, 1.0 - 1e-6).unwrap().abs();
                assert!(edge < 1e-3 * interior, "n={n} mu={mu}");
            }
        }
    }

    #[test]
    fn endpoint_decay_rate_for_small_order() {
        let s = LegendreSpec::new(2, -0.3);
        let (a, b) = (assoc_legendre(s, 1.0 - 1e-6).unwrap(), assoc_legendre(s, 1.0 - 1e-8).unwrap());
        assert!(((a / b).ln() / 100f64.ln() - 0.15).abs() < 1e-3);
    }

    #[test]
    fn errors() {
        assert_eq!(
            assoc_legendre(LegendreSpec::new(1, -1.0), 1.5),
            Err(Error::DomainError(1.5))
        );
        assert_eq!(
            assoc_legendre(LegendreSpec::new(1, 0.5), 0.2),
            Err(Error::UnsupportedOrder(0.5))
        );
    }

    #[test]
    fn positive_integer_order_matches_textbook() {
        // P_1^1(z) = -(1-z^2)^{1/2} in the Ferrers convention; here n = 2, mu = 1
        let z: f64 = 0.35;
        let v = assoc_legendre(LegendreSpec::new(2, 1.0), z).unwrap();
        assert!((v + (1.0 - z * z).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn derivative_matches_sixth_order_differences() {
        let h = 1e-3;
        for &(n, mu, z) in &[(0usize, -1.2, 0.1), (3, -2.5, -0.4), (4, -0.7, 0.6), (2, 0.0, 0.2)] {
            let s = LegendreSpec::new(n, mu);
            let f = |x: f64| assoc_legendre(s, x).unwrap();
            let fd = (-f(z - 3.0 * h) + 9.0 * f(z - 2.0 * h) - 45.0 * f(z - h) + 45.0 * f(z + h)
                - 9.0 * f(z + 2.0 * h)
                + f(z + 3.0 * h))
                / (60.0 * h);
            let d = assoc_legendre_derivative(s, z).unwrap();
            assert!((d - fd).abs() < 1e-7 * fd.abs().max(1e-3), "{n} {mu} {z}: {d} vs {fd}");
        }
    }

    #[test]
    fn fixed_order_orthogonality() {
        for &mu in &[-0.4, -1.0, -3.3, -10.0] {
            for n in 0..=4 {
                for m in 0..n {
                    let a = LegendreSpec::new(n, mu);
                    let b = LegendreSpec::new(m, mu);
                    let v = double_exponential(Span::Finite(-1.0, 1.0), 1e-13, |z| {
                        assoc_legendre(a, z).unwrap() * assoc_legendre(b, z).unwrap()
                    })
                    .unwrap();
                    assert!(v.abs() < 1e-9, "mu={mu} n={n} m={m}: {v}");
                }
            }
        }
    }

    #[test]
    fn complex_argument_matches_real_on_real_axis() {
        let s = LegendreSpec::new(3, -2.2);
        let r = assoc_legendre(s, 0.3).unwrap();
        let c = assoc_legendre_complex(s, Complex64::new(0.3, 0.0)).unwrap();
        assert!((c.re - r).abs() < 1e-15 && c.im.abs() < 1e-15);
    }
}
