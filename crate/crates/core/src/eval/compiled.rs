//! Slot-resolved evaluation in 64-bit arithmetic.
//!
//! A formula is compiled once against a chosen index variable. Subterms and
//! subformulas that mention neither the index nor any quantified variable
//! are evaluated at most once per [`Bound`] and cached. Whenever the fast
//! path cannot answer exactly (an overflow, a budget, an unbound input) the
//! bit is recomputed by the reference evaluator, so results always agree
//! with [`super::naive`].

use std::collections::HashMap;

use num_traits::ToPrimitive;

use super::naive::Evaluator;
use super::{Env, EvalError};
use crate::bitstr::BitStr;
use crate::stdlib;
use crate::syntax::vars::free_vars;
use crate::syntax::*;

type B<T> = Box<T>;

#[derive(Clone, Debug)]
enum CN {
    Lit(u64),
    Slot(usize),
    Cached(usize),
    Add(B<CN>, B<CN>),
    Mul(B<CN>, B<CN>),
    Monus(B<CN>, B<CN>),
    Len(B<CS>),
    BinLen(B<CN>),
    Pair(B<CN>, B<CN>),
    Exp(B<CN>, B<CN>),
    Val(B<CN>, B<CS>),
    Seq(B<CS>, B<CN>),
    Ones(B<CN>, B<CS>),
}

#[derive(Clone, Debug)]
enum CS {
    Lit(BitStr),
    Slot(usize),
    Cached(usize),
    Succ(B<CS>),
    Pred(B<CS>),
    Add(B<CS>, B<CS>),
    Sub(B<CS>, B<CS>),
    Pair(B<CS>, B<CS>),
    Component(B<CS>, B<CN>),
    One(B<CN>),
    Last(B<CN>, B<CS>),
    Compl(B<CS>, B<CN>),
}

#[derive(Clone, Debug)]
struct CBinder {
    sort: Sort,
    slot: usize,
    bound: CN,
    strict: bool,
}

#[derive(Clone, Debug)]
enum CF {
    Const(bool),
    Cached(usize),
    Eq(CN, CN),
    Le(CN, CN),
    Lt(CN, CN),
    StrEq(CS, CS),
    StrLe(CS, CS),
    StrLt(CS, CS),
    Member(CS, CN),
    /// `X(t)` with both operands in slots.
    Bit(usize, usize),
    Not(B<CF>),
    And(B<CF>, B<CF>),
    Or(B<CF>, B<CF>),
    Implies(B<CF>, B<CF>),
    Iff(B<CF>, B<CF>),
    Quant(bool, Vec<CBinder>, B<CF>),
}

/// A formula compiled for repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledFormula {
    source: Formula,
    index: Option<String>,
    root: CF,
    num_inputs: Vec<String>,
    str_inputs: Vec<String>,
    index_slot: Option<usize>,
    num_slots: usize,
    str_slots: usize,
    num_cache: Vec<CN>,
    str_cache: Vec<CS>,
    bool_cache: Vec<CF>,
}

/// Why the fast path gave up; the reference evaluator decides instead.
struct GiveUp;

type R<T> = Result<T, GiveUp>;

struct Compiler {
    index: Option<String>,
    num_scope: Vec<(String, usize, bool)>,
    str_scope: Vec<(String, usize, bool)>,
    num_slots: usize,
    str_slots: usize,
    num_cache: Vec<CN>,
    str_cache: Vec<CS>,
    bool_cache: Vec<CF>,
    num_keys: HashMap<NumTerm, usize>,
    str_keys: HashMap<StrTerm, usize>,
    bool_keys: HashMap<Formula, usize>,
}

impl Compiler {
    fn lookup(scope: &[(String, usize, bool)], name: &str) -> Option<(usize, bool)> {
        scope.iter().rev().find(|(n, _, _)| n == name).map(|&(_, s, q)| (s, q))
    }

    fn cache_num(&mut self, t: &NumTerm, c: CN) -> CN {
        if matches!(c, CN::Lit(_) | CN::Slot(_) | CN::Cached(_)) {
            return c;
        }
        let k = *self.num_keys.entry(t.clone()).or_insert_with(|| {
            self.num_cache.push(c);
            self.num_cache.len() - 1
        });
        CN::Cached(k)
    }

    fn cache_str(&mut self, t: &StrTerm, c: CS) -> CS {
        if matches!(c, CS::Lit(_) | CS::Slot(_) | CS::Cached(_)) {
            return c;
        }
        let k = *self.str_keys.entry(t.clone()).or_insert_with(|| {
            self.str_cache.push(c);
            self.str_cache.len() - 1
        });
        CS::Cached(k)
    }

    fn cache_bool(&mut self, f: &Formula, c: CF) -> CF {
        if matches!(c, CF::Const(_) | CF::Cached(_)) {
            return c;
        }
        let k = *self.bool_keys.entry(f.clone()).or_insert_with(|| {
            self.bool_cache.push(c);
            self.bool_cache.len() - 1
        });
        CF::Cached(k)
    }

    // Each compile method returns the code and whether it varies with the
    // index or a quantified variable. Invariant children of a varying node
    // are moved into the cache by the `keep_*` helpers.

    fn keep_num(&mut self, src: &NumTerm, (c, v): (CN, bool), parent: bool) -> CN {
        if parent && !v {
            self.cache_num(src, c)
        } else {
            c
        }
    }

    fn keep_str(&mut self, src: &StrTerm, (c, v): (CS, bool), parent: bool) -> CS {
        if parent && !v {
            self.cache_str(src, c)
        } else {
            c
        }
    }

    fn keep_bool(&mut self, src: &Formula, (c, v): (CF, bool), parent: bool) -> CF {
        if parent && !v {
            self.cache_bool(src, c)
        } else {
            c
        }
    }

    fn nn(&mut self, a: &NumTerm, b: &NumTerm) -> Option<(CN, CN, bool)> {
        let (ra, rb) = (self.num(a)?, self.num(b)?);
        let v = ra.1 || rb.1;
        Some((self.keep_num(a, ra, v), self.keep_num(b, rb, v), v))
    }

    fn ns(&mut self, a: &NumTerm, b: &StrTerm) -> Option<(CN, CS, bool)> {
        let (ra, rb) = (self.num(a)?, self.string(b)?);
        let v = ra.1 || rb.1;
        Some((self.keep_num(a, ra, v), self.keep_str(b, rb, v), v))
    }

    fn ss(&mut self, a: &StrTerm, b: &StrTerm) -> Option<(CS, CS, bool)> {
        let (ra, rb) = (self.string(a)?, self.string(b)?);
        let v = ra.1 || rb.1;
        Some((self.keep_str(a, ra, v), self.keep_str(b, rb, v), v))
    }

    fn ff(&mut self, a: &Formula, b: &Formula) -> Option<(CF, CF, bool)> {
        let (ra, rb) = (self.formula(a)?, self.formula(b)?);
        let v = ra.1 || rb.1;
        Some((self.keep_bool(a, ra, v), self.keep_bool(b, rb, v), v))
    }

    fn num(&mut self, t: &NumTerm) -> Option<(CN, bool)> {
        Some(match t {
            NumTerm::Lit(n) => (CN::Lit(n.to_u64()?), false),
            NumTerm::Var(name) => {
                let (slot, varies) = Self::lookup(&self.num_scope, name)?;
                (CN::Slot(slot), varies)
            }
            NumTerm::Add(x, y) => {
                let (x, y, v) = self.nn(x, y)?;
                (CN::Add(Box::new(x), Box::new(y)), v)
            }
            NumTerm::Mul(x, y) => {
                let (x, y, v) = self.nn(x, y)?;
                (CN::Mul(Box::new(x), Box::new(y)), v)
            }
            NumTerm::Monus(x, y) => {
                let (x, y, v) = self.nn(x, y)?;
                (CN::Monus(Box::new(x), Box::new(y)), v)
            }
            NumTerm::Pair(x, y) => {
                let (x, y, v) = self.nn(x, y)?;
                (CN::Pair(Box::new(x), Box::new(y)), v)
            }
            NumTerm::Exp(x, y) => {
                let (x, y, v) = self.nn(x, y)?;
                (CN::Exp(Box::new(x), Box::new(y)), v)
            }
            NumTerm::Len(x) => {
                let (x, v) = self.string(x)?;
                (CN::Len(Box::new(x)), v)
            }
            NumTerm::BinLen(x) => {
                let (x, v) = self.num(x)?;
                (CN::BinLen(Box::new(x)), v)
            }
            NumTerm::Val(x, y) => {
                let (x, y, v) = self.ns(x, y)?;
                (CN::Val(Box::new(x), Box::new(y)), v)
            }
            NumTerm::NumOnes(x, y) => {
                let (x, y, v) = self.ns(x, y)?;
                (CN::Ones(Box::new(x), Box::new(y)), v)
            }
            NumTerm::SeqElem(y, x) => {
                let (x, y, v) = self.ns(x, y)?;
                (CN::Seq(Box::new(y), Box::new(x)), v)
            }
        })
    }

    fn string(&mut self, t: &StrTerm) -> Option<(CS, bool)> {
        Some(match t {
            StrTerm::Lit(s) => (CS::Lit(s.clone()), false),
            StrTerm::Var(name) => {
                let (slot, varies) = Self::lookup(&self.str_scope, name)?;
                (CS::Slot(slot), varies)
            }
            StrTerm::Succ(x) => {
                let (x, v) = self.string(x)?;
                (CS::Succ(Box::new(x)), v)
            }
            StrTerm::Pred(x) => {
                let (x, v) = self.string(x)?;
                (CS::Pred(Box::new(x)), v)
            }
            StrTerm::Add(x, y) => {
                let (x, y, v) = self.ss(x, y)?;
                (CS::Add(Box::new(x), Box::new(y)), v)
            }
            StrTerm::Sub(x, y) => {
                let (x, y, v) = self.ss(x, y)?;
                (CS::Sub(Box::new(x), Box::new(y)), v)
            }
            StrTerm::Pair(x, y) => {
                let (x, y, v) = self.ss(x, y)?;
                (CS::Pair(Box::new(x), Box::new(y)), v)
            }
            StrTerm::Component(y, x) => {
                let (x, y, v) = self.ns(x, y)?;
                (CS::Component(Box::new(y), Box::new(x)), v)
            }
            StrTerm::One(x) => {
                let (x, v) = self.num(x)?;
                (CS::One(Box::new(x)), v)
            }
            StrTerm::Last(x, y) => {
                let (x, y, v) = self.ns(x, y)?;
                (CS::Last(Box::new(x), Box::new(y)), v)
            }
            StrTerm::Compl(y, x) => {
                let (x, y, v) = self.ns(x, y)?;
                (CS::Compl(Box::new(y), Box::new(x)), v)
            }
        })
    }

    fn formula(&mut self, f: &Formula) -> Option<(CF, bool)> {
        Some(match f {
            Formula::Const(c) => (CF::Const(*c), false),
            Formula::Eq(x, y) => {
                let (x, y, v) = self.nn(x, y)?;
                (CF::Eq(x, y), v)
            }
            Formula::Le(x, y) => {
                let (x, y, v) = self.nn(x, y)?;
                (CF::Le(x, y), v)
            }
            Formula::Lt(x, y) => {
                let (x, y, v) = self.nn(x, y)?;
                (CF::Lt(x, y), v)
            }
            Formula::StrEq(x, y) => {
                let (x, y, v) = self.ss(x, y)?;
                (CF::StrEq(x, y), v)
            }
            Formula::StrLe(x, y) => {
                let (x, y, v) = self.ss(x, y)?;
                (CF::StrLe(x, y), v)
            }
            Formula::StrLt(x, y) => {
                let (x, y, v) = self.ss(x, y)?;
                (CF::StrLt(x, y), v)
            }
            Formula::Member(y, x) => {
                let (x, y, v) = self.ns(x, y)?;
                match (y, x) {
                    (CS::Slot(s), CN::Slot(n)) => (CF::Bit(s, n), v),
                    (y, x) => (CF::Member(y, x), v),
                }
            }
            Formula::Fix(_) => return None,
            Formula::Not(x) => {
                let (x, v) = self.formula(x)?;
                (CF::Not(Box::new(x)), v)
            }
            Formula::And(x, y) => {
                let (x, y, v) = self.ff(x, y)?;
                (CF::And(Box::new(x), Box::new(y)), v)
            }
            Formula::Or(x, y) => {
                let (x, y, v) = self.ff(x, y)?;
                (CF::Or(Box::new(x), Box::new(y)), v)
            }
            Formula::Implies(x, y) => {
                let (x, y, v) = self.ff(x, y)?;
                (CF::Implies(Box::new(x), Box::new(y)), v)
            }
            Formula::Iff(x, y) => {
                let (x, y, v) = self.ff(x, y)?;
                (CF::Iff(Box::new(x), Box::new(y)), v)
            }
            Formula::Quant(q) => {
                // Bounds are compiled in the outer scope. A block varies when a
                // bound or one of its free variables does.
                let mut varies = free_vars(f).iter().any(|v| {
                    let scope = if v.sort == Sort::Num { &self.num_scope } else { &self.str_scope };
                    Self::lookup(scope, &v.name).is_some_and(|(_, varies)| varies)
                });
                let mut raw = Vec::new();
                for binder in &q.binders {
                    let bound = binder.bound.as_ref()?;
                    let r = self.num(&bound.term)?;
                    varies |= r.1;
                    raw.push((binder, bound, self.keep_num(&bound.term, r, true)));
                }
                let mut binders = Vec::new();
                for (binder, bound, code) in raw {
                    let slot = match binder.var.sort {
                        Sort::Num => {
                            self.num_slots += 1;
                            self.num_scope.push((binder.var.name.clone(), self.num_slots - 1, true));
                            self.num_slots - 1
                        }
                        Sort::Str => {
                            self.str_slots += 1;
                            self.str_scope.push((binder.var.name.clone(), self.str_slots - 1, true));
                            self.str_slots - 1
                        }
                    };
                    binders.push(CBinder { sort: binder.var.sort, slot, bound: code, strict: bound.strict });
                }
                let body = self.formula(&q.body);
                for binder in &q.binders {
                    match binder.var.sort {
                        Sort::Num => self.num_scope.pop(),
                        Sort::Str => self.str_scope.pop(),
                    };
                }
                let body = self.keep_bool(&q.body, body?, true);
                (CF::Quant(q.kind == Quantifier::Exists, binders, Box::new(body)), varies)
            }
        })
    }
}

impl CompiledFormula {
    /// Compiles `f` for evaluation at varying values of `index`. Returns
    /// `None` for formulas the fast path does not handle (fixed-point atoms,
    /// unbounded quantifiers, literals beyond 64 bits).
    pub fn compile(f: &Formula, index: Option<&str>) -> Option<Self> {
        let mut c = Compiler {
            index: index.map(str::to_string),
            num_scope: Vec::new(),
            str_scope: Vec::new(),
            num_slots: 0,
            str_slots: 0,
            num_cache: Vec::new(),
            str_cache: Vec::new(),
            bool_cache: Vec::new(),
            num_keys: HashMap::new(),
            str_keys: HashMap::new(),
            bool_keys: HashMap::new(),
        };
        let mut num_inputs = Vec::new();
        let mut str_inputs = Vec::new();
        let mut index_slot = None;
        for v in free_vars(f) {
            match v.sort {
                Sort::Num => {
                    let is_index = c.index.as_deref() == Some(v.name.as_str());
                    if is_index {
                        index_slot = Some(c.num_slots);
                    }
                    c.num_scope.push((v.name.clone(), c.num_slots, is_index));
                    c.num_slots += 1;
                    num_inputs.push(v.name);
                }
                Sort::Str => {
                    c.str_scope.push((v.name.clone(), c.str_slots, false));
                    c.str_slots += 1;
                    str_inputs.push(v.name);
                }
            }
        }
        let root = c.formula(f)?;
        let root = c.keep_bool(f, root, true);
        Some(CompiledFormula {
            source: f.clone(),
            index: c.index,
            root,
            num_inputs,
            str_inputs,
            index_slot,
            num_slots: c.num_slots,
            str_slots: c.str_slots,
            num_cache: c.num_cache,
            str_cache: c.str_cache,
            bool_cache: c.bool_cache,
        })
    }

    pub fn source(&self) -> &Formula {
        &self.source
    }

    /// Number of distinct cached subterms and subformulas.
    pub fn cached_nodes(&self) -> usize {
        self.num_cache.len() + self.str_cache.len() + self.bool_cache.len()
    }

    /// Fixes the values of every free variable other than the index.
    pub fn bind<'a>(&'a self, env: &'a Env) -> Bound<'a> {
        let mut nums = vec![0u64; self.num_slots];
        let mut strs = vec![BitStr::empty(); self.str_slots];
        let mut usable = true;
        for (slot, name) in self.num_inputs.iter().enumerate() {
            if Some(slot) == self.index_slot {
                continue;
            }
            match env.nums.get(name).and_then(|n| n.to_u64()) {
                Some(v) => nums[slot] = v,
                None => usable = false,
            }
        }
        for (slot, name) in self.str_inputs.iter().enumerate() {
            match env.strs.get(name) {
                Some(s) => strs[slot] = s.clone(),
                None => usable = false,
            }
        }
        Bound {
            c: self,
            env,
            usable,
            nums,
            strs,
            num_cache: vec![None; self.num_cache.len()],
            str_cache: vec![None; self.str_cache.len()],
            bool_cache: vec![None; self.bool_cache.len()],
            fallbacks: 0,
        }
    }
}

/// A compiled formula with its non-index inputs fixed.
pub struct Bound<'a> {
    c: &'a CompiledFormula,
    env: &'a Env,
    usable: bool,
    nums: Vec<u64>,
    strs: Vec<BitStr>,
    num_cache: Vec<Option<u64>>,
    str_cache: Vec<Option<BitStr>>,
    bool_cache: Vec<Option<bool>>,
    fallbacks: u64,
}

impl Bound<'_> {
    /// The truth value with the index variable set to `i`.
    pub fn eval(&mut self, i: u64) -> Result<bool, EvalError> {
        if self.usable {
            if let Some(slot) = self.c.index_slot {
                self.nums[slot] = i;
            }
            let root = &self.c.root;
            if let Ok(b) = self.formula(root) {
                return Ok(b);
            }
        }
        self.fallbacks += 1;
        let mut env = self.env.clone();
        if let Some(name) = &self.c.index {
            env.set_num(name, i);
        }
        Evaluator::new(env).formula(&self.c.source)
    }

    /// How many evaluations went to the reference evaluator.
    pub fn fallbacks(&self) -> u64 {
        self.fallbacks
    }

    fn formula(&mut self, f: &CF) -> R<bool> {
        Ok(match f {
            CF::Const(b) => *b,
            CF::Cached(k) => match self.bool_cache[*k] {
                Some(b) => b,
                None => {
                    let b = self.formula(&self.c.bool_cache[*k])?;
                    self.bool_cache[*k] = Some(b);
                    b
                }
            },
            CF::Eq(a, b) => self.num(a)? == self.num(b)?,
            CF::Le(a, b) => self.num(a)? <= self.num(b)?,
            CF::Lt(a, b) => self.num(a)? < self.num(b)?,
            CF::StrEq(a, b) => {
                let a = self.string(a)?;
                self.with_str(b, |b| a == *b)?
            }
            CF::StrLe(a, b) => {
                let a = self.string(a)?;
                self.with_str(b, |b| a <= *b)?
            }
            CF::StrLt(a, b) => {
                let a = self.string(a)?;
                self.with_str(b, |b| a < *b)?
            }
            CF::Bit(s, n) => self.strs[*s].bit_u64(self.nums[*n]),
            CF::Member(x, t) => {
                let i = self.num(t)?;
                self.with_str(x, |s| s.bit_u64(i))?
            }
            CF::Not(a) => !self.formula(a)?,
            CF::And(a, b) => self.formula(a)? && self.formula(b)?,
            CF::Or(a, b) => self.formula(a)? || self.formula(b)?,
            CF::Implies(a, b) => !self.formula(a)? || self.formula(b)?,
            CF::Iff(a, b) => self.formula(a)? == self.formula(b)?,
            CF::Quant(exists, binders, body) => {
                let limits = self.env.limits;
                // Blocks rarely bind more than a few variables; keep their
                // ranges off the heap.
                let mut small = [0u64; 4];
                let mut large = Vec::new();
                for (k, b) in binders.iter().enumerate() {
                    let t = self.num(&b.bound)?;
                    let count = if b.strict { t } else { t.checked_add(1).ok_or(GiveUp)? };
                    let candidates = match b.sort {
                        Sort::Num if count <= limits.number_candidates => count,
                        Sort::Str if count == 0 => 0,
                        Sort::Str if count - 1 < 64 && 1u64 << (count - 1) <= limits.string_candidates => {
                            1u64 << (count - 1)
                        }
                        _ => return Err(GiveUp),
                    };
                    if binders.len() <= small.len() {
                        small[k] = candidates;
                    } else {
                        large.push(candidates);
                    }
                }
                let ranges = if binders.len() <= small.len() { &small[..binders.len()] } else { &large[..] };
                let hit = self.block(binders, ranges, 0, *exists, body)?;
                if hit {
                    *exists
                } else {
                    !*exists
                }
            }
        })
    }

    fn block(&mut self, binders: &[CBinder], ranges: &[u64], k: usize, want: bool, body: &CF) -> R<bool> {
        if let [CBinder { sort: Sort::Num, slot, .. }] = binders {
            for v in 0..ranges[0] {
                self.nums[*slot] = v;
                if self.formula(body)? == want {
                    return Ok(true);
                }
            }
            return Ok(false);
        }
        if k == binders.len() {
            return Ok(self.formula(body)? == want);
        }
        let b = &binders[k];
        for v in 0..ranges[k] {
            match b.sort {
                Sort::Num => self.nums[b.slot] = v,
                Sort::Str => self.strs[b.slot].assign_u64(v),
            }
            if self.block(binders, ranges, k + 1, want, body)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn length(&self, n: u64) -> R<usize> {
        if n <= self.env.limits.string_length {
            Ok(n as usize)
        } else {
            Err(GiveUp)
        }
    }

    fn num(&mut self, t: &CN) -> R<u64> {
        Ok(match t {
            CN::Lit(n) => *n,
            CN::Slot(k) => self.nums[*k],
            CN::Cached(k) => match self.num_cache[*k] {
                Some(n) => n,
                None => {
                    let n = self.num(&self.c.num_cache[*k])?;
                    self.num_cache[*k] = Some(n);
                    n
                }
            },
            CN::Add(a, b) => self.num(a)?.checked_add(self.num(b)?).ok_or(GiveUp)?,
            CN::Mul(a, b) => self.num(a)?.checked_mul(self.num(b)?).ok_or(GiveUp)?,
            CN::Monus(a, b) => self.num(a)?.saturating_sub(self.num(b)?),
            CN::Len(x) => self.with_str(x, |s| s.len() as u64)?,
            CN::BinLen(a) => 64 - u64::from(self.num(a)?.leading_zeros()),
            CN::Pair(a, b) => {
                let (a, b) = (self.num(a)?, self.num(b)?);
                stdlib::pair_u64(a, b).ok_or(GiveUp)?
            }
            CN::Exp(a, b) => {
                let (x, y) = (self.num(a)?, self.num(b)?);
                if x >= 64 || y <= 1u64 << x {
                    y
                } else {
                    1u64 << x
                }
            }
            CN::Val(a, x) => {
                let n = self.num(a)?;
                let v = self.with_str(x, |s| stdlib::last_bits(&n.into(), s).to_u64())?;
                v.ok_or(GiveUp)?
            }
            CN::Seq(x, a) => {
                let n = self.num(a)?;
                let v = self.with_str(x, |s| stdlib::seq_elem(s, &n.into()).to_u64())?;
                v.ok_or(GiveUp)?
            }
            CN::Ones(a, x) => {
                let n = self.num(a)?;
                self.with_str(x, |s| s.count_ones_below(usize::try_from(n).unwrap_or(usize::MAX)) as u64)?
            }
        })
    }

    /// Applies `f` to the value of `t` without copying stored strings.
    fn with_str<T>(&mut self, t: &CS, f: impl FnOnce(&BitStr) -> T) -> R<T> {
        match t {
            CS::Slot(k) => Ok(f(&self.strs[*k])),
            CS::Lit(s) => Ok(f(s)),
            CS::Cached(k) => {
                if self.str_cache[*k].is_none() {
                    let s = self.string(&self.c.str_cache[*k])?;
                    self.str_cache[*k] = Some(s);
                }
                Ok(f(self.str_cache[*k].as_ref().expect("filled above")))
            }
            _ => {
                let s = self.string(t)?;
                Ok(f(&s))
            }
        }
    }

    fn string(&mut self, t: &CS) -> R<BitStr> {
        Ok(match t {
            CS::Lit(s) => s.clone(),
            CS::Slot(k) => self.strs[*k].clone(),
            CS::Cached(_) => self.with_str(t, BitStr::clone)?,
            CS::Succ(x) => self.with_str(x, stdlib::string_succ)?,
            CS::Pred(x) => self.with_str(x, stdlib::string_pred)?,
            CS::Add(a, b) => {
                let a = self.string(a)?;
                self.with_str(b, |b| stdlib::string_add(&a, b))?
            }
            CS::Sub(a, b) => {
                let a = self.string(a)?;
                self.with_str(b, |b| stdlib::string_sub(&a, b))?
            }
            CS::Pair(a, b) => {
                let a = self.string(a)?;
                let b = self.string(b)?;
                let top = a.len().max(b.len()) as u64;
                if top.saturating_mul(top).saturating_mul(2) > self.env.limits.string_length {
                    return Err(GiveUp);
                }
                stdlib::string_pair(&a, &b)
            }
            CS::Component(x, a) => {
                let n = self.num(a)?;
                self.with_str(x, |s| stdlib::component(s, &n.into()))?
            }
            CS::One(a) => {
                let n = self.num(a)?;
                stdlib::one_string(self.length(n)?)
            }
            CS::Last(a, x) => {
                let n = self.num(a)?;
                self.with_str(x, |s| stdlib::last_bits(&n.into(), s))?
            }
            CS::Compl(x, a) => {
                let n = self.num(a)?;
                let n = self.length(n)?;
                self.with_str(x, |s| stdlib::complement(s, n))?
            }
        })
    }
}
