//! Exact rational arithmetic: scalars, dense matrices, polynomials and
//! integer lattices.

pub mod lattice;
pub mod matrix;
pub mod poly;
pub mod rational;

pub use lattice::{hnf, integer_kernel, lattice_integral_solve, IntegralSolutions};
pub use matrix::{naive_rank_kernel, MatrixQ};
pub use poly::{homogeneous_monomials, MPoly, Mono};
pub use rational::{fmt_rational, frac, int, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("malformed rational: {0:?}")]
    MalformedRational(String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
}
