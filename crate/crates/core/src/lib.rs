//! Lie symmetry classification of charged-particle motion in stationary
//! electromagnetic fields.

pub mod dynamics;
pub mod expr;
pub mod fields;
pub mod liealg;
pub mod linalg;
pub mod optimal;
pub mod sampling;
pub mod verify;
pub mod scalar;

pub use expr::{Expr, VecExpr, Var};
pub use scalar::Scalar;
