//! Exact symbolic substrate: rationals, Laurent polynomials and rational
//! functions with formal derivatives and substitution.

pub mod mgcd;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod univariate;

pub use poly::{Exponents, LaurentPoly};
pub use ratfunc::RationalFunc;
pub use scalar::{format_rational, int, parse_rational, rat, Gaussian, Rational};
pub use univariate::UniPoly;
