//! Solvable quantum models on a one-dimensional noncommutative space with
//! `[X, P] = iħ(1 + τ̌P²)`.
//!
//! The crate covers the momentum-space representations of the deformed
//! algebra, the Liouville-type reduction of their Schrödinger equations to
//! potential problems, exact spectra, eigenfunctions and metrics of the
//! harmonic oscillator, the Swanson model and a Pöschl-Teller type model, an
//! independent finite-difference eigensolver, and PT phase analysis.

pub mod algebra;
pub mod cli;
pub mod diff;
pub mod error;
pub mod jet;
pub mod liouville;
pub mod oracle;
pub mod phase;
pub mod solutions;
pub mod specfun;

pub use error::{Error, Result};
