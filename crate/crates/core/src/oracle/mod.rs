//! Independent checks of the closed forms: a finite-difference eigensolver on
//! the transformed potential problems and metric-weighted expectation values.

mod expect;
mod fd;
mod verify;
mod words;

pub use expect::{
    expectation_direct, expectation_unified, matrix_element_direct, matrix_element_unified, uncertainty, Uncertainty, BOUND_SLACK,
};
pub use fd::{fd_eigenvalues, observed_orders, Boundary, EigenProblem, Potential, SpectrumResult};
pub use verify::{eigen_problem, verify_spectrum, LevelCheck, SpectrumReport};
pub use words::{Factor, Observable, Symbol, Word, MAX_WORD_LEN};
