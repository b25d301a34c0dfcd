//! The `.gct` construction language and its translation into polynomial
//! systems.

mod algebra;
mod ast;
pub mod numeric;
mod parse;

pub use algebra::{
    algebraize, check_homogeneity, pin_coordinates, statement_polys, AlgebraicTranslation,
    ConstructError, SignCond, StatementVars,
};
pub use ast::{ConstructionProgram, Constraint, GeomExpr, Item, Statement, Step};
pub use parse::{parse_construction, ParseError};
