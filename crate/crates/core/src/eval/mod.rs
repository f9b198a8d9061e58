//! Evaluation in the standard model: numbers are naturals, strings are finite
//! bit sets, and `X(i)` reads bit `i`.
//!
//! [`naive`] is the reference evaluator. [`compiled`] resolves variables to
//! slots, works in 64-bit arithmetic and caches subterms that stay fixed
//! while the index variable varies; it falls back to the reference path
//! whenever it cannot answer on its own, so the two always agree.

pub mod compiled;
pub mod naive;

use std::collections::HashMap;

use thiserror::Error;

use crate::bitstr::{BitStr, HyperStr};
use crate::syntax::{Natural, Sort, Var};

pub use compiled::CompiledFormula;
pub use naive::{eval_formula, eval_formula_with, eval_num, eval_str};

/// Budgets that turn runaway enumerations into errors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Candidate strings a single string-quantifier block may enumerate.
    pub string_candidates: u64,
    /// Values a single number-quantifier block may enumerate.
    pub number_candidates: u64,
    /// Longest string a term may build, in bits.
    pub string_length: u64,
    /// Iterations a fixed-point atom may run before period detection is
    /// needed to shortcut it.
    pub iterations: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { string_candidates: 1 << 24, number_candidates: 1 << 32, string_length: 1 << 28, iterations: 1 << 24 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable {0}")]
    UnboundVariable(Var),
    #[error("resource limit: {what} needs {needed}, budget is {budget}")]
    ResourceLimit { what: &'static str, needed: String, budget: u64 },
    #[error("unbounded quantifier over {0}")]
    Unbounded(Var),
    #[error("fixed-point atom P[{name}]: {reason}")]
    Operator { name: String, reason: String },
}

/// Values of the free variables of a formula.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Env {
    pub nums: HashMap<String, Natural>,
    pub strs: HashMap<String, BitStr>,
    /// Hyper strings are carried along but never quantified.
    pub hypers: HashMap<String, HyperStr>,
    pub limits: Limits,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn with_num(mut self, name: &str, value: impl Into<Natural>) -> Self {
        self.nums.insert(name.to_string(), value.into());
        self
    }

    pub fn with_str(mut self, name: &str, value: BitStr) -> Self {
        self.strs.insert(name.to_string(), value);
        self
    }

    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn set_num(&mut self, name: &str, value: impl Into<Natural>) {
        self.nums.insert(name.to_string(), value.into());
    }

    pub fn set_str(&mut self, name: &str, value: BitStr) {
        self.strs.insert(name.to_string(), value);
    }

    pub fn num(&self, name: &str) -> Result<&Natural, EvalError> {
        self.nums.get(name).ok_or_else(|| EvalError::UnboundVariable(Var::num(name)))
    }

    pub fn str(&self, name: &str) -> Result<&BitStr, EvalError> {
        self.strs.get(name).ok_or_else(|| EvalError::UnboundVariable(Var::str(name)))
    }

    pub fn binds(&self, var: &Var) -> bool {
        match var.sort {
            Sort::Num => self.nums.contains_key(&var.name),
            Sort::Str => self.strs.contains_key(&var.name),
        }
    }
}
