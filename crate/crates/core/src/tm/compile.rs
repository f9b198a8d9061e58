//! Operators whose iteration runs a machine.

use std::fmt;
use std::str::FromStr;

use super::formulas;
use super::machine::{BoundKind, Layout, Machine};
use super::TmError;
use crate::bitstr::BitStr;
use crate::engine::Operator;
use crate::eval::{Env, Limits};
use crate::parser::{parse_formula_with, print_formula};
use crate::stdlib::last_bits;
use crate::syntax::Formula;

/// Which construction turns the machine into an operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Appends one configuration per step; the answer is a fixed point.
    Ptime,
    /// Keeps only the current configuration; the answer is a period-1 state.
    Pspace,
}

impl Flavor {
    pub fn for_bound(kind: BoundKind) -> Self {
        match kind {
            BoundKind::Time => Flavor::Ptime,
            BoundKind::Space => Flavor::Pspace,
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Ptime => "ptime",
            Flavor::Pspace => "pspace",
        })
    }
}

impl FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ptime" => Ok(Flavor::Ptime),
            "pspace" => Ok(Flavor::Pspace),
            _ => Err(format!("unknown flavor {s:?}, expected ptime or pspace")),
        }
    }
}

/// An operator for one machine on one input.
#[derive(Clone, Debug)]
pub struct CompiledOperator {
    pub op: Operator,
    pub flavor: Flavor,
    pub layout: Layout,
}

impl CompiledOperator {
    pub fn width(&self) -> usize {
        self.op.width()
    }
}

/// Outcome of running a machine through its operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViaIdRun {
    pub output: BitStr,
    pub iterations: u64,
    pub width: usize,
    /// The fixed point (ptime) or the period-1 state (pspace).
    pub state: BitStr,
}

impl Machine {
    /// Helper definitions `init`, `conf`, `next` and `next_prime` as
    /// concrete syntax.
    pub fn program_source(&self) -> String {
        formulas::program_source(self)
    }

    fn body(&self, name: &str) -> Formula {
        formulas::program(self).get(name).expect("generated definition").body.clone()
    }

    /// `Init(i, X)`: bit `i` of the initial configuration on input `X`.
    pub fn init_formula(&self) -> Formula {
        self.body("init")
    }

    /// `Conf(X, Y)`: `Y` encodes a configuration for input length `|X|`.
    pub fn conf_formula(&self) -> Formula {
        self.body("conf")
    }

    /// `Next(i, X, Y)`: bit `i` of the successor of configuration `Y`;
    /// false everywhere when `Y` is not a configuration or has no successor.
    pub fn next_formula(&self) -> Formula {
        self.body("next")
    }

    /// `Next′`: like `Next`, but a final configuration is its own successor.
    pub fn next_prime_formula(&self) -> Formula {
        self.body("next_prime")
    }

    /// Operator body with free `i`, `X` and `Y`.
    pub fn operator_formula(&self, flavor: Flavor) -> Formula {
        self.operator_formula_guarded(flavor, true)
    }

    /// Variant without the guard that keeps the transition part of the
    /// ptime body (or the initial part of the pspace body) in its place.
    /// The unguarded variants are incorrect and exist for comparison.
    pub fn operator_formula_guarded(&self, flavor: Flavor, guarded: bool) -> Formula {
        let src = match flavor {
            Flavor::Ptime => formulas::ptime_source(self, guarded),
            Flavor::Pspace => formulas::pspace_source(self, guarded),
        };
        parse_formula_with(&src, &formulas::program(self).defs).expect("generated operator parses")
    }

    /// Operator width: `q(n)·(p(n) + 1)` for ptime, `q(n) + 1` for pspace.
    pub fn width(&self, n: usize, flavor: Flavor) -> usize {
        let l = self.layout(n);
        match flavor {
            Flavor::Ptime => l.q() * (l.cells + 1),
            Flavor::Pspace => l.q() + 1,
        }
    }

    pub fn compile(&self, x: &BitStr, flavor: Flavor, limits: Limits) -> Result<CompiledOperator, TmError> {
        let slot = &self.templates[flavor as usize];
        let template = match slot.get() {
            Some(op) => op,
            None => {
                let op = Operator::from_formula(self.operator_formula(flavor), "i", "Y", 0, &Env::new())?;
                slot.get_or_init(|| op)
            }
        };
        self.initial(x)?;
        let env = Env::new().with_str("X", x.clone()).with_limits(limits);
        let op = template.rebind(self.width(x.len(), flavor), &env)?;
        Ok(CompiledOperator { op, flavor, layout: self.layout(x.len()) })
    }

    /// Compiles an arbitrary body in place of the generated one.
    pub fn compile_from_formula(
        &self,
        body: Formula,
        x: &BitStr,
        flavor: Flavor,
        limits: Limits,
    ) -> Result<CompiledOperator, TmError> {
        self.initial(x)?;
        let env = Env::new().with_str("X", x.clone()).with_limits(limits);
        let op = Operator::from_formula(body, "i", "Y", self.width(x.len(), flavor), &env)?;
        Ok(CompiledOperator { op, flavor, layout: self.layout(x.len()) })
    }

    pub fn compile_ptime(&self, x: &BitStr, limits: Limits) -> Result<CompiledOperator, TmError> {
        self.compile(x, Flavor::Ptime, limits)
    }

    pub fn compile_pspace(&self, x: &BitStr, limits: Limits) -> Result<CompiledOperator, TmError> {
        self.compile(x, Flavor::Pspace, limits)
    }

    /// Runs the machine by iterating its operator and decodes the answer.
    pub fn run_via_id(&self, x: &BitStr, flavor: Flavor, limits: Limits) -> Result<ViaIdRun, TmError> {
        let compiled = self.compile(x, flavor, limits)?;
        let n = x.len();
        let q = compiled.layout.q();
        let width = compiled.width();
        match flavor {
            Flavor::Ptime => {
                let (k, fix) = compiled.op.find_fixpoint_inflationary()?;
                let c = self.decode(&last_bits(&q.into(), &fix), n)?;
                if !self.is_final(&c) {
                    // The configuration had no successor: either the machine is
                    // stuck or it ran out of steps or cells.
                    self.step(&c)?;
                    return Err(TmError::BoundExceeded {
                        kind: BoundKind::Time,
                        detail: format!("no final configuration among the first {}", compiled.layout.cells + 1),
                    });
                }
                Ok(ViaIdRun { output: self.output(&c)?, iterations: k, width, state: fix })
            }
            Flavor::Pspace => {
                let report = compiled.op.find_period(&BitStr::empty())?;
                if report.v != 1 {
                    return Err(TmError::BoundExceeded {
                        kind: BoundKind::Space,
                        detail: format!("configurations cycle with period {} instead of halting", report.v),
                    });
                }
                let c = self.decode(&report.state_at_u, n)?;
                if !self.is_final(&c) {
                    return Err(TmError::BoundExceeded {
                        kind: BoundKind::Space,
                        detail: "a non-final configuration repeats".into(),
                    });
                }
                Ok(ViaIdRun { output: self.output(&c)?, iterations: report.u, width, state: report.state_at_u })
            }
        }
    }

    /// The operator body printed as one formula with all helpers expanded.
    pub fn operator_source(&self, flavor: Flavor) -> String {
        print_formula(&self.operator_formula(flavor))
    }
}
