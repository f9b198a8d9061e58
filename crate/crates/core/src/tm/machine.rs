//! Machine descriptions, configurations and direct simulation.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::TmError;
use crate::bitstr::BitStr;
use crate::engine::Operator;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    L,
    R,
    S,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Time,
    Space,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundKind::Time => "time",
            BoundKind::Space => "space",
        })
    }
}

/// A polynomial with natural coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poly(pub Vec<u64>);

impl Poly {
    pub fn eval(&self, n: u64) -> u64 {
        self.0.iter().rev().fold(0, |acc, &c| acc * n + c)
    }

    /// The polynomial in `n` as concrete syntax, e.g. `(2 + 3 * n * n)`.
    pub fn to_source(&self, n: &str) -> String {
        let mut parts = Vec::new();
        for (k, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut term = c.to_string();
            for _ in 0..k {
                term.push_str(" * ");
                term.push_str(n);
            }
            parts.push(term);
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            format!("({})", parts.join(" + "))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transition {
    pub next: usize,
    pub write: usize,
    pub mv: Move,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct TransitionFile {
    state: String,
    read: String,
    next: String,
    write: String,
    #[serde(rename = "move")]
    mv: Move,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct BoundFile {
    kind: BoundKind,
    poly: Vec<u64>,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct MachineFile {
    name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    description: String,
    states: Vec<String>,
    start: String,
    #[serde(rename = "final")]
    final_state: String,
    alphabet: Vec<String>,
    transitions: Vec<TransitionFile>,
    bound: BoundFile,
}

/// A deterministic single-tape machine with a declared polynomial bound.
#[derive(Clone, Debug)]
pub struct Machine {
    pub name: String,
    pub states: Vec<String>,
    pub start: usize,
    pub final_state: usize,
    /// Symbol names by code: blank is 0, `0` is 1, `1` is 2.
    pub symbols: Vec<String>,
    pub delta: HashMap<(usize, usize), Transition>,
    pub bound: BoundKind,
    pub poly: Poly,
    /// Operators built on first use, one per flavor, width and input unset.
    pub(super) templates: [OnceLock<Operator>; 2],
}

pub const BLANK: usize = 0;
pub const ZERO: usize = 1;
pub const ONE: usize = 2;

/// Bit positions of the configuration encoding for one input length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub cells: usize,
    pub symbol_bits: usize,
    pub state_bits: usize,
}

impl Layout {
    /// Bits per cell record.
    pub fn cell_bits(&self) -> usize {
        self.symbol_bits + 1
    }

    pub fn head_bit(&self, cell: usize) -> usize {
        cell * self.cell_bits() + self.symbol_bits
    }

    pub fn state_base(&self) -> usize {
        self.cells * self.cell_bits()
    }

    /// `q(n)`, the length of every configuration.
    pub fn q(&self) -> usize {
        self.state_base() + self.state_bits + 1
    }
}

/// `⌈log2 m⌉`.
fn bits_for(m: usize) -> usize {
    (usize::BITS - m.saturating_sub(1).leading_zeros()) as usize
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Config {
    pub state: usize,
    pub head: usize,
    pub tape: Vec<usize>,
}

/// Result of a direct simulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectRun {
    pub output: BitStr,
    pub steps: u64,
    pub configs: Vec<Config>,
}

impl Machine {
    pub fn from_json(text: &str) -> Result<Self, TmError> {
        let file: MachineFile = serde_json::from_str(text).map_err(|e| TmError::Format(e.to_string()))?;
        Self::from_file(file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TmError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| TmError::Format(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn from_file(file: MachineFile) -> Result<Self, TmError> {
        let invalid = |m: String| Err(TmError::Invalid(m));
        let mut states: HashMap<&str, usize> = HashMap::new();
        for (k, s) in file.states.iter().enumerate() {
            if states.insert(s, k).is_some() {
                return invalid(format!("state {s:?} listed twice"));
            }
        }
        let mut symbols = vec!["_".to_string(), "0".to_string(), "1".to_string()];
        for s in &file.alphabet {
            if s.is_empty() {
                return invalid("empty symbol name".into());
            }
            if !symbols.contains(s) {
                symbols.push(s.clone());
            } else if file.alphabet.iter().filter(|t| *t == s).count() > 1 {
                return invalid(format!("symbol {s:?} listed twice"));
            }
        }
        for required in ["_", "0", "1"] {
            if !file.alphabet.iter().any(|s| s == required) {
                return invalid(format!("alphabet must contain {required:?}"));
            }
        }
        let state = |name: &str| states.get(name).copied().ok_or_else(|| TmError::Invalid(format!("unknown state {name:?}")));
        let symbol = |name: &str| {
            symbols.iter().position(|s| s == name).ok_or_else(|| TmError::Invalid(format!("unknown symbol {name:?}")))
        };
        let start = state(&file.start)?;
        let final_state = state(&file.final_state)?;
        let mut delta = HashMap::new();
        for t in &file.transitions {
            let from = state(&t.state)?;
            if from == final_state {
                return invalid(format!("final state {:?} has an outgoing transition", t.state));
            }
            let read = symbol(&t.read)?;
            let tr = Transition { next: state(&t.next)?, write: symbol(&t.write)?, mv: t.mv };
            if delta.insert((from, read), tr).is_some() {
                return invalid(format!("two transitions from {:?} on {:?}", t.state, t.read));
            }
        }
        if file.bound.poly.is_empty() {
            return invalid("bound polynomial has no coefficients".into());
        }
        Ok(Machine {
            name: file.name,
            states: file.states,
            start,
            final_state,
            symbols,
            delta,
            bound: file.bound.kind,
            poly: Poly(file.bound.poly),
            templates: Default::default(),
        })
    }

    /// `p(n)`: the time or space bound, and the number of tape cells.
    pub fn cells(&self, n: usize) -> usize {
        self.poly.eval(n as u64) as usize
    }

    pub fn layout(&self, n: usize) -> Layout {
        Layout { cells: self.cells(n), symbol_bits: bits_for(self.symbols.len()), state_bits: bits_for(self.states.len()) }
    }

    pub fn initial(&self, x: &BitStr) -> Result<Config, TmError> {
        let n = x.len();
        let cells = self.cells(n);
        if n > cells || cells == 0 {
            return Err(TmError::OutOfSpace { needed: n.max(1), cells });
        }
        let mut tape = vec![BLANK; cells];
        for (j, cell) in tape.iter_mut().enumerate().take(n) {
            *cell = if x.bit(j) { ONE } else { ZERO };
        }
        Ok(Config { state: self.start, head: 0, tape })
    }

    pub fn encode(&self, c: &Config) -> BitStr {
        let layout = Layout { cells: c.tape.len(), ..self.layout(0) };
        let mut out = BitStr::empty();
        for (j, &sym) in c.tape.iter().enumerate() {
            for b in 0..layout.symbol_bits {
                if sym >> b & 1 == 1 {
                    out.set(j * layout.cell_bits() + b, true);
                }
            }
        }
        out.set(layout.head_bit(c.head), true);
        for b in 0..layout.state_bits {
            if c.state >> b & 1 == 1 {
                out.set(layout.state_base() + b, true);
            }
        }
        out.set(layout.q() - 1, true);
        out
    }

    /// Inverse of [`Machine::encode`] for input length `n`.
    pub fn decode(&self, s: &BitStr, n: usize) -> Result<Config, TmError> {
        let layout = self.layout(n);
        let bad = |m: String| Err(TmError::Decode(m));
        if s.len() != layout.q() {
            return bad(format!("length {} instead of {}", s.len(), layout.q()));
        }
        let field = |base: usize, bits: usize| (0..bits).filter(|&b| s.bit(base + b)).map(|b| 1usize << b).sum::<usize>();
        let state = field(layout.state_base(), layout.state_bits);
        if state >= self.states.len() {
            return bad(format!("state code {state} out of range"));
        }
        let heads: Vec<usize> = (0..layout.cells).filter(|&c| s.bit(layout.head_bit(c))).collect();
        let [head] = heads[..] else {
            return bad(format!("{} head markers", heads.len()));
        };
        let mut tape = Vec::with_capacity(layout.cells);
        for c in 0..layout.cells {
            let sym = field(c * layout.cell_bits(), layout.symbol_bits);
            if sym >= self.symbols.len() {
                return bad(format!("symbol code {sym} in cell {c}"));
            }
            tape.push(sym);
        }
        Ok(Config { state, head, tape })
    }

    pub fn is_final(&self, c: &Config) -> bool {
        c.state == self.final_state
    }

    /// One move, or `None` from the final state. Moving left from cell 0
    /// stays on cell 0.
    pub fn step(&self, c: &Config) -> Result<Option<Config>, TmError> {
        if self.is_final(c) {
            return Ok(None);
        }
        let read = c.tape[c.head];
        let Some(t) = self.delta.get(&(c.state, read)) else {
            return Err(TmError::NoTransition {
                state: self.states[c.state].clone(),
                symbol: self.symbols[read].clone(),
            });
        };
        let mut next = c.clone();
        next.state = t.next;
        next.tape[c.head] = t.write;
        next.head = match t.mv {
            Move::L => c.head.saturating_sub(1),
            Move::S => c.head,
            Move::R if c.head + 1 < c.tape.len() => c.head + 1,
            Move::R => {
                return Err(TmError::BoundExceeded {
                    kind: BoundKind::Space,
                    detail: format!("head leaves the {} cells", c.tape.len()),
                })
            }
        };
        Ok(Some(next))
    }

    /// The tape read from cell 0 up to the first symbol other than `0`/`1`;
    /// cell `j` gives bit `j`.
    pub fn output(&self, c: &Config) -> Result<BitStr, TmError> {
        if !self.is_final(c) {
            return Err(TmError::NotFinal);
        }
        let bits = c.tape.iter().take_while(|&&s| s == ZERO || s == ONE);
        Ok(BitStr::from_positions(bits.enumerate().filter(|(_, &s)| s == ONE).map(|(j, _)| j)))
    }

    /// Conventional simulation, checking the declared bound. `budget` caps
    /// the number of steps of space-bounded machines.
    pub fn run_direct(&self, x: &BitStr, budget: u64) -> Result<DirectRun, TmError> {
        let mut c = self.initial(x)?;
        let time_limit = match self.bound {
            BoundKind::Time => self.cells(x.len()) as u64,
            BoundKind::Space => budget,
        };
        let mut configs = vec![c.clone()];
        let mut steps = 0u64;
        while let Some(next) = self.step(&c)? {
            steps += 1;
            if steps > time_limit {
                return Err(match self.bound {
                    BoundKind::Time => TmError::BoundExceeded {
                        kind: BoundKind::Time,
                        detail: format!("still running after {time_limit} steps"),
                    },
                    BoundKind::Space => TmError::Budget(budget),
                });
            }
            configs.push(next.clone());
            c = next;
        }
        Ok(DirectRun { output: self.output(&c)?, steps, configs })
    }

    pub fn symbol(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == name)
    }

    pub fn state(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }
}
