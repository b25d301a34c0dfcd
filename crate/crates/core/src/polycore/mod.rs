//! Exact polynomial algebra: rationals, sparse multivariate polynomials,
//! monomial orders, Buchberger's algorithm, elimination and interval
//! evaluation.

mod groebner;
mod interval;
mod order;
mod parse;
mod poly;

/// Arbitrary-precision rational; always in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub use groebner::{
    buchberger, eliminate, is_groebner_basis, reduce, s_polynomial, GbLimits, GroebnerError,
};
pub use interval::{
    default_sqrt_precision, eval_interval, eval_with, sqrt_bounds, EvalError, Interval, SqrtDef,
};
pub use order::TermOrder;
pub use parse::{parse_poly, parse_poly_list, parse_rational, PolyParseError};
pub use poly::{display_cmp, poly_arith, substitute, ArithOp, Monomial, Polynomial};
pub(crate) use poly::render_rational;

/// Shorthand for `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
