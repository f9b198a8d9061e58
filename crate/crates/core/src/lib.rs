//! Finitary inductive definitions over two-sorted bounded arithmetic.

pub mod bitstr;
pub mod engine;
pub mod eval;
pub mod parser;
pub mod stdlib;
pub mod syntax;
pub mod tm;

pub use bitstr::{BitStr, HyperStr};
