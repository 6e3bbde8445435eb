//! Exact multivariate polynomials with rational coefficients.
//!
//! Every structural identity checked by this crate is reduced to the question
//! "is this [`Poly`] the zero polynomial?". Polynomials are kept in canonical
//! form (no zero coefficients, fixed variable order), so that question is a
//! structural comparison.

mod linear;
mod polynomial;
mod rational;
mod varset;

pub use linear::{rank, rref, LinearSystem, SolutionSpace};
pub use polynomial::{CompiledPoly, Monomial, Poly};
pub use rational::{int, rat, rational_from_f64, Rational};
pub use varset::VarSet;
