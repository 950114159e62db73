//! Jacobi polynomials `P_n^{(a,b)}(x)` for real `a, b > -1`.

use crate::error::{Error, Result};
use crate::jet::Scalar;
use crate::specfun::ln_gamma;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiSpec {
    pub n: usize,
    pub a: f64,
    pub b: f64,
}

impl JacobiSpec {
    pub fn new(n: usize, a: f64, b: f64) -> Result<Self> {
        if !(a > -1.0 && b > -1.0) {
            return Err(Error::JacobiParameter { a, b });
        }
        Ok(Self { n, a, b })
    }
}

/// Three-term recurrence, generic over the argument type.
pub fn jacobi_generic<T: Scalar>(spec: JacobiSpec, x: T) -> T {
    let JacobiSpec { n, a, b } = spec;
    let mut p0 = T::from_f64(1.0);
    if n == 0 {
        return p0;
    }
    let mut p1 = x * (0.5 * (a + b + 2.0)) + T::from_f64(0.5 * (a - b));
    for k in 2..=n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        let c1 = 2.0 * kf * (kf + a + b) * (s - 2.0);
        let c2 = (s - 1.0) * (a * a - b * b);
        let c3 = (s - 1.0) * s * (s - 2.0);
        let c4 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * s;
        let p2 = (p1 * c2 + x * p1 * c3 - p0 * c4) * (1.0 / c1);
        p0 = p1;
        p1 = p2;
    }
    p1
}

pub fn jacobi(spec: JacobiSpec, x: f64) -> Result<f64> {
    JacobiSpec::new(spec.n, spec.a, spec.b)?;
    Ok(jacobi_generic(spec, x))
}

/// `d/dx P_n^{(a,b)} = (n + a + b + 1)/2 P_{n-1}^{(a+1,b+1)}`.
pub fn jacobi_derivative(spec: JacobiSpec, x: f64) -> Result<f64> {
    JacobiSpec::new(spec.n, spec.a, spec.b)?;
    if spec.n == 0 {
        return Ok(0.0);
    }
    let lower = JacobiSpec {
        n: spec.n - 1,
        a: spec.a + 1.0,
        b: spec.b + 1.0,
    };
    Ok(0.5 * (spec.n as f64 + spec.a + spec.b + 1.0) * jacobi_generic(lower, x))
}

/// Squared norm against the weight `(1-x)^a (1+x)^b`:
/// `N_n = 2^{a+b+1} Γ(a+n+1) Γ(b+n+1) / (n! Γ(a+b+n+1) (a+b+2n+1))`.
pub fn jacobi_norm(spec: JacobiSpec) -> Result<f64> {
    let JacobiSpec { n, a, b } = JacobiSpec::new(spec.n, spec.a, spec.b)?;
    let nf = n as f64;
    let ln = (a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + nf + 1.0) + ln_gamma(b + nf + 1.0)
        - ln_gamma(nf + 1.0)
        - ln_gamma(a + b + nf + 1.0);
    Ok(ln.exp() / (a + b + 2.0 * nf + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::quadrature::{double_exponential, Span};

    #[test]
    fn low_orders() {
        let s = JacobiSpec::new(0, 0.7, -0.2).unwrap();
        assert_eq!(jacobi(s, 0.4).unwrap(), 1.0);
        let s = JacobiSpec::new(1, 0.0, 0.0).unwrap();
        assert!((jacobi(s, 0.3).unwrap() - 0.3).abs() < 1e-16);
    }

    #[test]
    fn degree_two_explicit_expansion() {
        // P_2^{(a,b)}(x) = (a+b+3)(a+b+4)/8 (x-1)^2 + (a+2)(a+b+3)/2 (x-1) + (a+1)(a+2)/2
        let (a, b) = (0.5 * 17f64.sqrt(), 0.5 * 33f64.sqrt());
        let s = JacobiSpec::new(2, a, b).unwrap();
        for &x in &[0.0, 0.37, -0.81] {
            let t = x - 1.0;
            let oracle = (a + b + 3.0) * (a + b + 4.0) / 8.0 * t * t
                + (a + 2.0) * (a + b + 3.0) / 2.0 * t
                + (a + 1.0) * (a + 2.0) / 2.0;
            assert!((jacobi(s, x).unwrap() - oracle).abs() < 1e-13 * oracle.abs().max(1.0));
        }
    }

    #[test]
    fn norms() {
        let n = |n, a, b| jacobi_norm(JacobiSpec::new(n, a, b).unwrap()).unwrap();
        assert!((n(0, 0.0, 0.0) - 2.0).abs() < 1e-14);
        assert!((n(1, 0.0, 0.0) - 2.0 / 3.0).abs() < 1e-14);
        // ∫(1-x)(1+x)^2 dx over [-1, 1] = 4/3
        assert!((n(0, 1.0, 2.0) - 4.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(
            JacobiSpec::new(1, -1.0, 0.0),
            Err(Error::JacobiParameter { a: -1.0, b: 0.0 })
        );
    }

    #[test]
    fn weighted_orthogonality_matches_norm() {
        let (a, b) = (2.061_552_812_808_830_3, 2.872_281_323_269_014_5);
        for n in 0..=4 {
            for m in 0..=n {
                let sn = JacobiSpec::new(n, a, b).unwrap();
                let sm = JacobiSpec::new(m, a, b).unwrap();
                let v = double_exponential(Span::Finite(-1.0, 1.0), 1e-14, |x: f64| {
                    (1.0 - x).powf(a) * (1.0 + x).powf(b) * jacobi(sn, x).unwrap() * jacobi(sm, x).unwrap()
                })
                .unwrap();
                if n == m {
                    let norm = jacobi_norm(sn).unwrap();
                    assert!((v / norm - 1.0).abs() < 1e-10, "n={n}: {v} vs {norm}");
                } else {
                    assert!(v.abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let s = JacobiSpec::new(3, 0.5, 1.5).unwrap();
        let x = 0.2;
        let h = 1e-3;
        let f = |x: f64| jacobi(s, x).unwrap();
        let fd = (-f(x - 3.0 * h) + 9.0 * f(x - 2.0 * h) - 45.0 * f(x - h) + 45.0 * f(x + h)
            - 9.0 * f(x + 2.0 * h)
            + f(x + 3.0 * h))
            / (60.0 * h);
        assert!((jacobi_derivative(s, x).unwrap() - fd).abs() < 1e-7 * fd.abs());
        assert_eq!(jacobi_derivative(JacobiSpec::new(0, 0.5, 1.5).unwrap(), x).unwrap(), 0.0);
    }
}
