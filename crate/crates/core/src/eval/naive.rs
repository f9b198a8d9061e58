//! Reference evaluator over arbitrary-precision naturals.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};

use super::{Env, EvalError, Limits};
use crate::bitstr::BitStr;
use crate::engine::{EngineError, Operator};
use crate::stdlib::{self, Value};
use crate::syntax::vars::extra_vars;
use crate::syntax::*;

/// Truth value of `f` under `env`.
pub fn eval_formula(f: &Formula, env: &Env) -> Result<bool, EvalError> {
    Evaluator::new(env.clone()).formula(f)
}

/// Like [`eval_formula`] but reuses `evaluator`'s fixed-point cache.
pub fn eval_formula_with(evaluator: &mut Evaluator, f: &Formula) -> Result<bool, EvalError> {
    evaluator.formula(f)
}

pub fn eval_num(t: &NumTerm, env: &Env) -> Result<Natural, EvalError> {
    Evaluator::new(env.clone()).num(t)
}

pub fn eval_str(t: &StrTerm, env: &Env) -> Result<BitStr, EvalError> {
    Evaluator::new(env.clone()).string(t)
}

type FixKey = (usize, usize, BitStr, Natural, Vec<(Var, String)>);

/// An environment plus a cache of fixed-point states already computed.
pub struct Evaluator {
    pub env: Env,
    fix_cache: HashMap<FixKey, BitStr>,
}

fn too_many(what: &'static str, needed: impl ToString, budget: u64) -> EvalError {
    EvalError::ResourceLimit { what, needed: needed.to_string(), budget }
}

impl Evaluator {
    pub fn new(env: Env) -> Self {
        Evaluator { env, fix_cache: HashMap::new() }
    }

    fn limits(&self) -> Limits {
        self.env.limits
    }

    fn length(&self, n: &Natural) -> Result<usize, EvalError> {
        let limit = self.limits().string_length;
        match n.to_u64() {
            Some(v) if v <= limit => Ok(v as usize),
            _ => Err(too_many("string length", n, limit)),
        }
    }

    pub fn formula(&mut self, f: &Formula) -> Result<bool, EvalError> {
        Ok(match f {
            Formula::Const(b) => *b,
            Formula::Eq(a, b) => self.num(a)? == self.num(b)?,
            Formula::Le(a, b) => self.num(a)? <= self.num(b)?,
            Formula::Lt(a, b) => self.num(a)? < self.num(b)?,
            Formula::StrEq(a, b) => self.string(a)? == self.string(b)?,
            Formula::StrLe(a, b) => stdlib::string_le(&self.string(a)?, &self.string(b)?),
            Formula::StrLt(a, b) => stdlib::string_less(&self.string(a)?, &self.string(b)?),
            Formula::Member(x, t) => {
                let i = self.num(t)?;
                let hit = |s: &BitStr| i.to_u64().is_some_and(|i| s.bit_u64(i));
                match x {
                    StrTerm::Var(name) => hit(self.env.str(name)?),
                    _ => hit(&self.string(x)?),
                }
            }
            Formula::Fix(atom) => self.fix(atom)?,
            Formula::Not(a) => !self.formula(a)?,
            Formula::And(a, b) => self.formula(a)? && self.formula(b)?,
            Formula::Or(a, b) => self.formula(a)? || self.formula(b)?,
            Formula::Implies(a, b) => !self.formula(a)? || self.formula(b)?,
            Formula::Iff(a, b) => self.formula(a)? == self.formula(b)?,
            Formula::Quant(q) => self.quant(q)?,
        })
    }

    fn quant(&mut self, q: &Quant) -> Result<bool, EvalError> {
        // Bounds are read outside the block.
        let mut ranges = Vec::with_capacity(q.binders.len());
        for b in &q.binders {
            let Some(bound) = &b.bound else { return Err(EvalError::Unbounded(b.var.clone())) };
            let t = self.num(&bound.term)?;
            // Number of candidates: values below `count` (numbers) or
            // strings of length below `count` (strings).
            let count = if bound.strict { t } else { t + 1u32 };
            let candidates = match b.var.sort {
                Sort::Num => {
                    let budget = self.limits().number_candidates;
                    match count.to_u64() {
                        Some(c) if c <= budget => c,
                        _ => return Err(too_many("number quantifier range", count, budget)),
                    }
                }
                Sort::Str => {
                    let budget = self.limits().string_candidates;
                    let len = count.to_u64().unwrap_or(u64::MAX).saturating_sub(1);
                    if len >= 64 || 1u64 << len > budget {
                        return Err(too_many("string quantifier candidates", format!("2^{len}"), budget));
                    }
                    if count.is_zero() {
                        0
                    } else {
                        1u64 << len
                    }
                }
            };
            ranges.push(candidates);
        }
        let saved: Vec<Option<Value>> = q.binders.iter().map(|b| self.unbind(&b.var)).collect();
        let want = q.kind == Quantifier::Exists;
        let result = self.block(q, &ranges, 0, want);
        for (b, old) in q.binders.iter().zip(saved) {
            self.unbind(&b.var);
            match old {
                Some(Value::Num(n)) => self.env.set_num(&b.var.name, n),
                Some(Value::Str(s)) => self.env.set_str(&b.var.name, s),
                _ => {}
            }
        }
        // `want` is the value that decides the block early.
        Ok(if result? { want } else { !want })
    }

    /// Whether some assignment of binders `k..` makes the body equal `want`.
    fn block(&mut self, q: &Quant, ranges: &[u64], k: usize, want: bool) -> Result<bool, EvalError> {
        if k == ranges.len() {
            return Ok(self.formula(&q.body)? == want);
        }
        let var = &q.binders[k].var;
        for v in 0..ranges[k] {
            match var.sort {
                Sort::Num => self.env.nums.insert(var.name.clone(), Natural::from(v)).map(|_| ()),
                Sort::Str => self.env.strs.insert(var.name.clone(), BitStr::from_u64(v)).map(|_| ()),
            };
            if self.block(q, ranges, k + 1, want)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn fix(&mut self, atom: &FixAtom) -> Result<bool, EvalError> {
        let i = self.num(&atom.index)?;
        let x = self.num(&atom.width)?;
        if i >= x {
            return Ok(false);
        }
        let width = self.length(&x)?;
        let n = self.string(&atom.counter)?.to_natural();
        let start = match &atom.start {
            Some(s) => self.string(s)?,
            None => BitStr::empty(),
        };
        let def = &atom.def;
        let index = def.index_param().unwrap_or_default().to_string();
        let state = def.state_param().unwrap_or_default().to_string();
        let mut extras: Vec<(Var, String)> = Vec::new();
        let mut op_env = Env::new().with_limits(self.limits());
        for v in extra_vars(def).into_iter().chain(def.params.iter().cloned()) {
            if v.name == index || v.name == state || extras.iter().any(|(w, _)| *w == v) {
                continue;
            }
            match v.sort {
                Sort::Num => {
                    let value = self.env.num(&v.name)?.clone();
                    extras.push((v.clone(), value.to_string()));
                    op_env.set_num(&v.name, value);
                }
                Sort::Str => {
                    let value = self.env.str(&v.name)?.clone();
                    extras.push((v.clone(), value.to_hex()));
                    op_env.set_str(&v.name, value);
                }
            }
        }
        let key: FixKey = (Arc::as_ptr(def) as usize, width, start.clone(), n.clone(), extras);
        let state_value = match self.fix_cache.get(&key) {
            Some(s) => s.clone(),
            None => {
                let op = Operator::new(def.clone(), width, &op_env).map_err(|e| fix_error(def, e))?;
                let s = op.iterate_natural(&start, &n, self.limits().iterations).map_err(|e| fix_error(def, e))?;
                self.fix_cache.insert(key, s.clone());
                s
            }
        };
        Ok(i.to_u64().is_some_and(|i| state_value.bit_u64(i)))
    }

    fn unbind(&mut self, var: &Var) -> Option<Value> {
        match var.sort {
            Sort::Num => self.env.nums.remove(&var.name).map(Value::Num),
            Sort::Str => self.env.strs.remove(&var.name).map(Value::Str),
        }
    }

    pub fn num(&mut self, t: &NumTerm) -> Result<Natural, EvalError> {
        Ok(match t {
            NumTerm::Lit(n) => n.clone(),
            NumTerm::Var(v) => self.env.num(v)?.clone(),
            NumTerm::Add(a, b) => self.num(a)? + self.num(b)?,
            NumTerm::Mul(a, b) => self.num(a)? * self.num(b)?,
            NumTerm::Monus(a, b) => stdlib::limited_sub(&self.num(a)?, &self.num(b)?),
            NumTerm::Len(x) => match &**x {
                StrTerm::Var(v) => Natural::from(self.env.str(v)?.len()),
                _ => Natural::from(self.string(x)?.len()),
            },
            NumTerm::BinLen(a) => stdlib::bin_len(&self.num(a)?),
            NumTerm::Pair(a, b) => stdlib::pair(&self.num(a)?, &self.num(b)?),
            NumTerm::Exp(a, b) => stdlib::exp_min(&self.num(a)?, &self.num(b)?),
            NumTerm::Val(a, x) => stdlib::val(&self.num(a)?, &self.string(x)?),
            NumTerm::SeqElem(x, a) => stdlib::seq_elem(&self.string(x)?, &self.num(a)?),
            NumTerm::NumOnes(a, x) => stdlib::count_ones_below(&self.num(a)?, &self.string(x)?),
        })
    }

    pub fn string(&mut self, t: &StrTerm) -> Result<BitStr, EvalError> {
        Ok(match t {
            StrTerm::Lit(s) => s.clone(),
            StrTerm::Var(v) => self.env.str(v)?.clone(),
            StrTerm::Succ(x) => stdlib::string_succ(&self.string(x)?),
            StrTerm::Pred(x) => stdlib::string_pred(&self.string(x)?),
            StrTerm::Add(a, b) => stdlib::string_add(&self.string(a)?, &self.string(b)?),
            StrTerm::Sub(a, b) => stdlib::string_sub(&self.string(a)?, &self.string(b)?),
            StrTerm::Pair(a, b) => {
                let (a, b) = (self.string(a)?, self.string(b)?);
                // Bit <1, j> sits near 2 j^2.
                let top = a.len().max(b.len()) as u64;
                let limit = self.limits().string_length;
                if top.saturating_mul(top).saturating_mul(2) > limit {
                    return Err(too_many("string length", format!("about 2*{top}^2"), limit));
                }
                stdlib::string_pair(&a, &b)
            }
            StrTerm::Component(x, a) => stdlib::component(&self.string(x)?, &self.num(a)?),
            StrTerm::One(a) => {
                let n = self.num(a)?;
                stdlib::one_string(self.length(&n)?)
            }
            StrTerm::Last(a, x) => stdlib::last_bits(&self.num(a)?, &self.string(x)?),
            StrTerm::Compl(x, a) => {
                let s = self.string(x)?;
                let n = self.num(a)?;
                stdlib::complement(&s, self.length(&n)?)
            }
        })
    }
}

fn fix_error(def: &Definition, e: EngineError) -> EvalError {
    match e {
        EngineError::Eval(e) => e,
        EngineError::ResourceLimit { what, needed, budget } => EvalError::ResourceLimit { what, needed, budget },
        other => EvalError::Operator { name: def.name.clone(), reason: other.to_string() },
    }
}
