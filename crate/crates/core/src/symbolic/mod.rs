//! Exact arithmetic: graded polynomials in `q^(1/2)`, (q-)binomials for any
//! integer argument, multivariate polynomials and rational functions, and
//! descending Laurent expansions.

mod graded;
mod laurent;
mod multipoly;
mod rational;
mod series;

pub use graded::{binom_ext, qbinom, qbinom_q, GradedPoly, HalfInt};
pub use laurent::LaurentPoly;
pub use multipoly::{Division, Monomial, MultiPoly, VarSet, MAX_VARS};
pub use rational::Rational;
pub use series::{expand_at_infinity, expand_laurent_at_infinity, LaurentSeries};
