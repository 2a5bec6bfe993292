//! Exact arithmetic: rationals, multivariate polynomials, truncated jets and
//! rational linear algebra. Nothing in here ever rounds.

mod jet;
mod matrix;
mod monomial;
mod poly;
mod rational;

pub use jet::{jet_arith, Jet, JetOp};
pub use matrix::{exact_nullspace, exact_nullspace_with, ExactMatrix, PivotRule, SparseSystem};
pub use monomial::{monomials_of_degree, monomials_up_to, MultiIndex};
pub use poly::{poly_arith, poly_diff, MultiPoly, PolyOp};
pub use rational::{binomial_q, fmt_q, parse_q, q, qi, Q};
