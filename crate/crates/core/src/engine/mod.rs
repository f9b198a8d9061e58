//! Finite inductive definitions as algorithms.
//!
//! An [`Operator`] packages a Σ^B_0 formula `φ(i, Y)`, a width `x` and the
//! values of any further free variables. One step maps a state `Y` to the
//! set of `i < x` at which `φ(i, Y)` holds, where `Y` is clipped to its
//! first `x` bits before being read. Everything else here (iteration,
//! fixed points, periods, traces) is built on that step.

mod period;
mod trace;

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bitstr::{BitStr, HyperStr};
use crate::eval::compiled::Bound;
use crate::eval::naive::Evaluator;
use crate::eval::{CompiledFormula, Env, EvalError};
use crate::syntax::*;

pub use period::PeriodReport;
pub use trace::{read_trace, write_trace, IterationTrace, TraceFormatError, TraceVerdict, TRACE_SCHEMA, TRACE_VERSION};

/// Widths up to this are checked state by state in exhaustive mode.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("resource limit: {what} needs {needed}, budget is {budget}")]
    ResourceLimit { what: &'static str, needed: String, budget: u64 },
    #[error("operator formula must be SigmaB(0), found {0}")]
    NotSigma0(FormulaClass),
    #[error("operator lost bit {bit} at step {step}, so it is not inflationary")]
    NotInflationary { step: u64, bit: usize },
    #[error("definition {name}: {reason}")]
    BadDefinition { name: String, reason: String },
}

impl EngineError {
    fn budget(what: &'static str, needed: impl ToString, budget: u64) -> Self {
        EngineError::ResourceLimit { what, needed: needed.to_string(), budget }
    }
}

/// How [`Operator::is_inflationary`] decides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InflationMode {
    /// Every state below `2^x`; answers `Unknown` above `cap`.
    Exhaustive { cap: usize },
    /// Only recognizes the shape `Y(i) || ψ`.
    Syntactic,
    /// Random states; can refute but never confirm.
    Sampled { samples: u64, seed: u64 },
}

impl InflationMode {
    pub fn exhaustive() -> Self {
        InflationMode::Exhaustive { cap: DEFAULT_EXHAUSTIVE_CAP }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inflationary {
    Yes,
    /// `Y(i)` holds but `φ(i, Y)` does not.
    No { state: BitStr, index: usize },
    Unknown,
}

/// A Σ^B_0 operator at a fixed width.
#[derive(Clone, Debug)]
pub struct Operator {
    name: String,
    body: Arc<Formula>,
    index: String,
    state: String,
    width: usize,
    env: Env,
    compiled: Option<Arc<CompiledFormula>>,
}

// Evaluates φ at one state for varying `i`.
enum Probe<'a> {
    Fast(Bound<'a>),
    Slow(Box<Evaluator>, &'a Operator),
}

impl Probe<'_> {
    fn eval(&mut self, i: usize) -> Result<bool, EvalError> {
        match self {
            Probe::Fast(b) => b.eval(i as u64),
            Probe::Slow(e, op) => {
                e.env.set_num(&op.index, i as u64);
                e.formula(&op.body)
            }
        }
    }
}

impl Operator {
    /// The operator of a definition `def name(i, Y, ...) := φ`. The first
    /// number parameter is the index and the first string parameter the
    /// state; `env` supplies every other free variable.
    pub fn new(def: Arc<Definition>, width: usize, env: &Env) -> Result<Self, EngineError> {
        let bad = |reason: &str| EngineError::BadDefinition { name: def.name.clone(), reason: reason.to_string() };
        let index = def.index_param().ok_or_else(|| bad("needs a number parameter for the bit index"))?;
        // A definition without a string parameter ignores the state.
        let state = def.state_param().unwrap_or("Y");
        Self::build(&def.name, def.body.clone(), index, state, width, env)
    }

    /// The operator `i ↦ φ(i, state)` for a bare formula.
    pub fn from_formula(
        body: Formula,
        index: &str,
        state: &str,
        width: usize,
        env: &Env,
    ) -> Result<Self, EngineError> {
        Self::build("phi", body, index, state, width, env)
    }

    fn build(name: &str, body: Formula, index: &str, state: &str, width: usize, env: &Env) -> Result<Self, EngineError> {
        let class = classify(&body);
        if class != FormulaClass::SigmaB(0) {
            return Err(EngineError::NotSigma0(class));
        }
        let limit = env.limits.string_length;
        if width as u64 > limit {
            return Err(EngineError::budget("operator width", width, limit));
        }
        let compiled = CompiledFormula::compile(&body, Some(index)).map(Arc::new);
        Ok(Operator {
            name: name.to_string(),
            body: Arc::new(body),
            index: index.to_string(),
            state: state.to_string(),
            width,
            env: env.clone(),
            compiled,
        })
    }

    /// The same body at another width and with other values for its extra
    /// variables, reusing the compiled form.
    pub fn rebind(&self, width: usize, env: &Env) -> Result<Self, EngineError> {
        let limit = env.limits.string_length;
        if width as u64 > limit {
            return Err(EngineError::budget("operator width", width, limit));
        }
        Ok(Operator { width, env: env.clone(), ..self.clone() })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn formula(&self) -> &Formula {
        &self.body
    }

    pub fn index_var(&self) -> &str {
        &self.index
    }

    pub fn state_var(&self) -> &str {
        &self.state
    }

    /// Whether steps run on the compiled path.
    pub fn is_compiled(&self) -> bool {
        self.compiled.is_some()
    }

    /// The same operator evaluated only by the reference evaluator.
    pub fn without_compilation(&self) -> Self {
        Operator { compiled: None, ..self.clone() }
    }

    fn budget(&self) -> u64 {
        self.env.limits.iterations
    }

    fn state_env(&self, state: &BitStr) -> Env {
        let mut env = self.env.clone();
        env.set_str(&self.state, state.clip(self.width));
        env
    }

    fn probe<'a>(&'a self, env: &'a Env) -> Probe<'a> {
        match &self.compiled {
            Some(c) => Probe::Fast(c.bind(env)),
            None => Probe::Slow(Box::new(Evaluator::new(env.clone())), self),
        }
    }

    /// `{ i < x : φ(i, state↾x) }`.
    pub fn step(&self, state: &BitStr) -> Result<BitStr, EngineError> {
        let env = self.state_env(state);
        let mut probe = self.probe(&env);
        let mut out = BitStr::empty();
        for i in 0..self.width {
            if probe.eval(i)? {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// `n` steps from `start`, stopping early at a fixed point.
    fn run(&self, start: &BitStr, n: u64) -> Result<BitStr, EngineError> {
        let mut state = start.clip(self.width);
        for _ in 0..n {
            let next = self.step(&state)?;
            if next == state {
                break;
            }
            state = next;
        }
        Ok(state)
    }

    /// The `n`-fold step applied to `start`.
    pub fn iterate(&self, start: &BitStr, n: u64) -> Result<BitStr, EngineError> {
        self.iterate_natural(start, &BigUint::from(n), self.budget())
    }

    /// Like [`Operator::iterate`] for counters of any size. Up to `budget`
    /// steps are run directly; larger counters are reduced modulo the
    /// period, which must itself be found within `budget` steps.
    pub fn iterate_natural(&self, start: &BitStr, n: &Natural, budget: u64) -> Result<BitStr, EngineError> {
        if let Some(n) = n.to_u64().filter(|&n| n <= budget) {
            return self.run(start, n);
        }
        let report = self.find_period_within(start, budget).map_err(|e| match e {
            EngineError::ResourceLimit { budget, .. } => {
                EngineError::budget("iterations without a detected period", n, budget)
            }
            e => e,
        })?;
        let reduced = report.reduce(n);
        self.run(&report.state_at_u, reduced - report.u)
    }

    /// States `Z[0] = start↾x, ..., Z[n]`.
    pub fn iterate_with_trace(&self, start: &BitStr, n: u64) -> Result<IterationTrace, EngineError> {
        let budget = self.budget();
        if n > budget {
            return Err(EngineError::budget("trace length", n, budget));
        }
        let mut states = vec![start.clip(self.width)];
        for _ in 0..n {
            let next = self.step(states.last().expect("nonempty"))?;
            states.push(next);
        }
        Ok(IterationTrace { width: self.width, states })
    }

    /// The first index at which `trace` departs from the iteration of
    /// `start`, if any.
    pub fn verify_trace(&self, trace: &IterationTrace, start: &BitStr) -> Result<TraceVerdict, EngineError> {
        let Some(first) = trace.states.first() else {
            return Ok(TraceVerdict::Fault(0));
        };
        if *first != start.clip(self.width) {
            return Ok(TraceVerdict::Fault(0));
        }
        for (j, pair) in trace.states.windows(2).enumerate() {
            if pair[1] != self.step(&pair[0])? {
                return Ok(TraceVerdict::Fault(j + 1));
            }
        }
        Ok(TraceVerdict::Ok)
    }

    /// `{ iterate(start, m) : m < n }`.
    pub fn visited_states(&self, start: &BitStr, n: u64) -> Result<HyperStr, EngineError> {
        let budget = self.budget();
        let mut seen = HyperStr::new();
        let mut state = start.clip(self.width);
        for m in 0..n {
            // Once a state repeats, every later state has been seen.
            if !seen.insert(state.clone()) {
                break;
            }
            if m >= budget {
                return Err(EngineError::budget("visited-state enumeration", n, budget));
            }
            if m + 1 < n {
                state = self.step(&state)?;
            }
        }
        Ok(seen)
    }

    /// Whether `m` steps followed by `n` steps agree with `m + n` steps.
    pub fn check_composition(&self, z: &BitStr, m: u64, n: u64) -> Result<bool, EngineError> {
        let total = m.checked_add(n).ok_or_else(|| EngineError::budget("composition length", "2^64", self.budget()))?;
        let split = self.iterate(&self.iterate(z, m)?, n)?;
        Ok(split == self.iterate(z, total)?)
    }

    /// Decides whether `Y(i) → φ(i, Y)` for all `Y` and `i < x`.
    pub fn is_inflationary(&self, mode: InflationMode) -> Result<Inflationary, EngineError> {
        match mode {
            InflationMode::Syntactic => Ok(if self.has_identity_disjunct(&self.body) {
                Inflationary::Yes
            } else {
                Inflationary::Unknown
            }),
            InflationMode::Exhaustive { cap } => {
                if self.width > cap || self.width >= 64 {
                    return Ok(Inflationary::Unknown);
                }
                for v in 0..1u64 << self.width {
                    if let Some(found) = self.refute(&BitStr::from_u64(v))? {
                        return Ok(found);
                    }
                }
                Ok(Inflationary::Yes)
            }
            InflationMode::Sampled { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..samples {
                    let state = BitStr::from_positions((0..self.width).filter(|_| rng.gen_bool(0.5)));
                    if let Some(found) = self.refute(&state)? {
                        return Ok(found);
                    }
                }
                Ok(Inflationary::Unknown)
            }
        }
    }

    // Checks φ only at the set bits of `state`.
    fn refute(&self, state: &BitStr) -> Result<Option<Inflationary>, EngineError> {
        let env = self.state_env(state);
        let mut probe = self.probe(&env);
        for i in state.ones() {
            if !probe.eval(i)? {
                return Ok(Some(Inflationary::No { state: state.clone(), index: i }));
            }
        }
        Ok(None)
    }

    fn has_identity_disjunct(&self, f: &Formula) -> bool {
        match f {
            Formula::Or(a, b) => self.has_identity_disjunct(a) || self.has_identity_disjunct(b),
            Formula::And(a, b) => {
                (self.holds_on_members(a) && self.has_identity_disjunct(b))
                    || (self.holds_on_members(b) && self.has_identity_disjunct(a))
            }
            Formula::Member(StrTerm::Var(y), NumTerm::Var(i)) => *y == self.state && *i == self.index,
            _ => false,
        }
    }

    /// Recognizes conjuncts `i < |Y| + t` and `i <= |Y| + t`, which every
    /// `i` with `Y(i)` satisfies.
    fn holds_on_members(&self, f: &Formula) -> bool {
        fn has_len(t: &NumTerm, state: &str) -> bool {
            match t {
                NumTerm::Len(y) => matches!(&**y, StrTerm::Var(y) if y == state),
                NumTerm::Add(a, b) => has_len(a, state) || has_len(b, state),
                _ => false,
            }
        }
        match f {
            Formula::Const(true) => true,
            Formula::Lt(NumTerm::Var(i), t) | Formula::Le(NumTerm::Var(i), t) => {
                *i == self.index && has_len(t, &self.state)
            }
            _ => false,
        }
    }

    /// Least `k` with `iterate(∅, k + 1) = iterate(∅, k)`, together with that
    /// state. Fails as soon as a step drops a bit.
    pub fn find_fixpoint_inflationary(&self) -> Result<(u64, BitStr), EngineError> {
        let mut state = BitStr::empty();
        let mut k = 0u64;
        loop {
            let next = self.step(&state)?;
            if let Some(bit) = state.first_missing_from(&next) {
                return Err(EngineError::NotInflationary { step: k, bit });
            }
            if next == state {
                return Ok((k, state));
            }
            // Each step adds a bit, so this runs at most x + 1 times.
            state = next;
            k += 1;
        }
    }
}
