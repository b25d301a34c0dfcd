//! Exact real algebraic numbers: root isolation, refinement, comparison,
//! closed radical forms and decimal approximations.

mod number;
mod radical;
pub mod upoly;

pub use number::{isolate_real_roots, isolate_upoly, AlgError, AlgebraicNumber};
pub use radical::{to_radical, RadicalForm};
pub use upoly::{sturm_count, UPoly};

/// Free-function form of [`AlgebraicNumber::refine`].
pub fn refine(a: &AlgebraicNumber, width: &crate::polycore::Rational) -> AlgebraicNumber {
    a.refine(width)
}

/// Free-function form of [`AlgebraicNumber::approx_decimal`].
pub fn approx_decimal(a: &AlgebraicNumber, digits: usize) -> String {
    a.approx_decimal(digits)
}
