//! Symbolic comparison of two quantities defined on a planar geometric
//! construction.
//!
//! A construction written in the `.gct` language is translated into a
//! polynomial system. The comparison first tries elimination to find an
//! exact constant ratio `lhs = mu * rhs`; when no such constant exists it
//! falls back to a certified interval branch-and-bound that encloses the
//! infimum and supremum of `lhs / rhs` over all nondegenerate figures.
//!
//! ```
//! use geocompare::construct::parse_construction;
//! use geocompare::frontend::{compare, CompareConfig};
//!
//! let prog = parse_construction(
//!     "point A; point B; point C; rightangle A C B\n\
//!      segment a B C; segment b A C; segment c A B\n\
//!      compare a^2+b^2 vs c^2",
//! ).unwrap();
//! let result = compare(&prog, &CompareConfig::default()).unwrap();
//! assert_eq!(result.render_relation(), "(a^2 + b^2) = 1 · c^2");
//! assert_eq!(result.result, "m = 1");
//! ```

pub mod algnum;
pub mod construct;
pub mod corpus;
pub mod delin;
pub mod eqpath;
pub mod frontend;
pub mod ineqpath;
pub mod polycore;
