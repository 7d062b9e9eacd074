//! Optimal systems of equivalence subalgebras: constructive reduction of
//! one-dimensional generators and verification of the two- and
//! three-dimensional lists.

mod canon;
mod matcher;
mod subalgebra;
pub mod tables;

pub use canon::{canonicalize_1d, check_class, CanonError, CanonicalClass1D};
pub use matcher::{match_row, MatchVerdict};
pub use subalgebra::{check_subalgebra, signature, verify_optimal_tables, RowSignature, SubalgebraError, SubalgebraReport};
pub use tables::{find_row, rows, Params, RowSpec};
