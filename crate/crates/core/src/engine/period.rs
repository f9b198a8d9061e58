//! Tail and period of an iteration.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{EngineError, Operator};
use crate::bitstr::BitStr;
use crate::syntax::Natural;

/// `iterate(start, u + v) = iterate(start, u)` with `u` least and then `v`
/// least.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodReport {
    pub u: u64,
    pub v: u64,
    pub state_at_u: BitStr,
}

impl PeriodReport {
    /// An iteration count `< u + v` that reaches the same state as `n`.
    pub fn reduce(&self, n: &Natural) -> u64 {
        match n.to_u64() {
            Some(n) if n < self.u => n,
            _ => {
                let r = (n - BigUint::from(self.u)) % BigUint::from(self.v);
                self.u + r.to_u64().expect("below v")
            }
        }
    }

    /// The counters as strings, `U` and `V` with numeric values `u` and `v`.
    pub fn witnesses(&self) -> (BitStr, BitStr) {
        (BitStr::from_u64(self.u), BitStr::from_u64(self.v))
    }
}

/// Widths up to this use the visited-state table.
const HASHED_MAX_WIDTH: usize = 32;

impl Operator {
    /// Tail length and period of the iteration from `start`.
    pub fn find_period(&self, start: &BitStr) -> Result<PeriodReport, EngineError> {
        self.find_period_within(start, self.budget())
    }

    pub(super) fn find_period_within(&self, start: &BitStr, budget: u64) -> Result<PeriodReport, EngineError> {
        if self.width <= HASHED_MAX_WIDTH {
            self.find_period_hashed(start, budget)
        } else {
            self.find_period_brent(start, budget)
        }
    }

    /// Records every state until one repeats. Runs `u + v` steps.
    pub fn find_period_hashed(&self, start: &BitStr, budget: u64) -> Result<PeriodReport, EngineError> {
        let mut seen: HashMap<BitStr, u64> = HashMap::new();
        let mut state = start.clip(self.width);
        let mut m = 0u64;
        loop {
            if let Some(&u) = seen.get(&state) {
                return Ok(PeriodReport { u, v: m - u, state_at_u: state });
            }
            if m >= budget {
                return Err(EngineError::budget("period search steps", format!("more than {m}"), budget));
            }
            let next = self.step(&state)?;
            seen.insert(state, m);
            state = next;
            m += 1;
        }
    }

    /// Brent's cycle finding in constant memory. At most about
    /// `3 (u + v)` steps.
    pub fn find_period_brent(&self, start: &BitStr, budget: u64) -> Result<PeriodReport, EngineError> {
        let mut steps = 0u64;
        let mut step = |s: &BitStr| -> Result<BitStr, EngineError> {
            if steps >= budget {
                return Err(EngineError::budget("period search steps", format!("more than {steps}"), budget));
            }
            steps += 1;
            self.step(s)
        };
        let x0 = start.clip(self.width);
        let (mut power, mut lam) = (1u64, 1u64);
        let mut tortoise = x0.clone();
        let mut hare = step(&x0)?;
        while tortoise != hare {
            if power == lam {
                tortoise = hare.clone();
                power *= 2;
                lam = 0;
            }
            hare = step(&hare)?;
            lam += 1;
        }
        let mut tortoise = x0.clone();
        let mut hare = x0;
        for _ in 0..lam {
            hare = step(&hare)?;
        }
        let mut mu = 0u64;
        while tortoise != hare {
            tortoise = step(&tortoise)?;
            hare = step(&hare)?;
            mu += 1;
        }
        Ok(PeriodReport { u: mu, v: lam, state_at_u: tortoise })
    }
}
