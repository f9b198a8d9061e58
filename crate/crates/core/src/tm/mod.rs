//! Single-tape Turing machines, their configuration encoding, and their
//! compilation into Σ^B_0 operators.
//!
//! A configuration on an input of length `n` occupies exactly `q(n)` bits.
//! From the least significant end: `p(n)` cell records of `k + 1` bits
//! each (`k` symbol bits, then a head marker), the state field, and a
//! sentinel 1 at position `q(n) - 1`. Cell `j` of the initial tape holds
//! bit `j` of the input.

mod compile;
mod formulas;
mod machine;

pub use compile::{CompiledOperator, Flavor, ViaIdRun};
pub use machine::{BoundKind, Config, DirectRun, Layout, Machine, Move, Poly, Transition};

use thiserror::Error;

use crate::engine::EngineError;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TmError {
    #[error("machine description: {0}")]
    Format(String),
    #[error("invalid machine: {0}")]
    Invalid(String),
    #[error("input of length {needed} does not fit in {cells} cells")]
    OutOfSpace { needed: usize, cells: usize },
    #[error("declared {kind} bound exceeded: {detail}")]
    BoundExceeded { kind: BoundKind, detail: String },
    #[error("configuration is not final")]
    NotFinal,
    #[error("no transition from state {state} on symbol {symbol}")]
    NoTransition { state: String, symbol: String },
    #[error("not a configuration: {0}")]
    Decode(String),
    #[error("simulation budget of {0} steps exhausted")]
    Budget(u64),
    #[error(transparent)]
    Engine(#[from] EngineError),
}
