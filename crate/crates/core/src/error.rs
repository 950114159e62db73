use thiserror::Error;

use crate::algebra::{ModelKind, Rep};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no published coefficients for {model:?} in representation {rep:?}")]
    UnsupportedPair { model: ModelKind, rep: Rep },
    #[error("the Poschl-Teller model has no commutative limit; tau must be > 0")]
    IntrinsicNoncommutativity,
    #[error("grid leaves the momentum domain of {0:?}")]
    DomainMismatch(Rep),
    #[error("argument {0} outside the domain [-1, 1]")]
    DomainError(f64),
    #[error("positive non-integer order mu = {0} is not supported")]
    UnsupportedOrder(f64),
    #[error("Jacobi parameters must exceed -1 (a = {a}, b = {b})")]
    JacobiParameter { a: f64, b: f64 },
    #[error("coefficient f vanishes inside the domain at p = {0}")]
    SingularCoefficient(f64),
    #[error("coordinate map is not monotone: {0}")]
    NonMonotoneMap(String),
    #[error("1 - w^2 changes sign on the q-domain")]
    BranchAmbiguity,
    #[error("eigenvalue extrapolation did not converge: {0}")]
    ConvergenceFailure(String),
    #[error("operator word is not integrable against this state: {0}")]
    NonIntegrable(String),
    #[error("spectrum is complex for these parameters; eigenfunctions are not real-regime states")]
    ComplexSpectrum,
    #[error("representation is unphysical (spectrum unbounded below)")]
    NonPhysical,
    #[error("commutative limit tau = 0 has no deformed eigenfunctions")]
    CommutativeLimit,
    #[error("discriminant stays positive for every admissible beta")]
    NoRoot,
    #[error("quadrature failed to converge: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;
