//! Special functions: log-gamma, quadrature rules, Ferrers associated
//! Legendre functions of non-integer degree and Jacobi polynomials.

pub mod jacobi;
pub mod legendre;
pub mod quadrature;

pub use jacobi::{jacobi, jacobi_derivative, jacobi_norm, JacobiSpec};
pub use legendre::{assoc_legendre, assoc_legendre_derivative, gegenbauer, LegendreSpec};
pub use quadrature::{gauss_legendre_nodes, GaussLegendre};

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Pochhammer symbol `(a)_k`.
pub fn pochhammer(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (a + j as f64))
}
