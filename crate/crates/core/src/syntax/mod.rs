//! Formula syntax: AST, variables, and the Σ^B_i classifier.

pub mod ast;
pub mod classify;
pub mod vars;

pub use ast::*;
pub use classify::{check_bound_independence, classify, BoundViolation, FormulaClass};
pub use vars::{free_vars, Subst};
