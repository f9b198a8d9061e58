//! Random formulas for property tests.

use bid::syntax::*;
use bid::BitStr;
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;

/// Variables a generated formula may mention.
#[derive(Clone, Debug)]
pub struct Scope {
    pub nums: Vec<String>,
    pub strs: Vec<String>,
    /// Whether string quantifiers may appear.
    pub string_quantifiers: bool,
}

impl Scope {
    pub fn new(nums: &[&str], strs: &[&str]) -> Self {
        Scope {
            nums: nums.iter().map(|s| s.to_string()).collect(),
            strs: strs.iter().map(|s| s.to_string()).collect(),
            string_quantifiers: false,
        }
    }
}

fn lit(n: u64) -> NumTerm {
    NumTerm::Lit(BigUint::from(n))
}

pub fn num_term<R: Rng>(rng: &mut R, depth: u32, scope: &Scope) -> NumTerm {
    let leaf = depth == 0 || rng.gen_bool(0.4);
    if leaf {
        return match scope.nums.choose(rng) {
            Some(v) if rng.gen_bool(0.7) => NumTerm::Var(v.clone()),
            _ => lit(rng.gen_range(0..5)),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..9) {
        0 | 1 => NumTerm::Add(Box::new(num_term(rng, d, scope)), Box::new(num_term(rng, d, scope))),
        2 => NumTerm::Monus(Box::new(num_term(rng, d, scope)), Box::new(num_term(rng, d, scope))),
        3 => NumTerm::Mul(Box::new(num_term(rng, d, scope)), Box::new(lit(rng.gen_range(0..4)))),
        4 | 5 if !scope.strs.is_empty() => NumTerm::Len(Box::new(str_term(rng, d, scope))),
        6 => NumTerm::BinLen(Box::new(num_term(rng, d, scope))),
        7 if !scope.strs.is_empty() => NumTerm::Val(Box::new(num_term(rng, d, scope)), Box::new(str_term(rng, d, scope))),
        8 if !scope.strs.is_empty() => NumTerm::NumOnes(Box::new(num_term(rng, d, scope)), Box::new(str_term(rng, d, scope))),
        _ => NumTerm::Exp(Box::new(lit(rng.gen_range(0..4))), Box::new(num_term(rng, d, scope))),
    }
}

pub fn str_term<R: Rng>(rng: &mut R, depth: u32, scope: &Scope) -> StrTerm {
    let leaf = depth == 0 || rng.gen_bool(0.5);
    if leaf || scope.strs.is_empty() {
        return match scope.strs.choose(rng) {
            Some(v) if rng.gen_bool(0.8) => StrTerm::Var(v.clone()),
            _ => StrTerm::Lit(BitStr::from_u64(rng.gen_range(0..16))),
        };
    }
    let d = depth - 1;
    let small = |rng: &mut R| lit(rng.gen_range(0..6));
    match rng.gen_range(0..7) {
        0 => StrTerm::Succ(Box::new(str_term(rng, d, scope))),
        1 => StrTerm::Pred(Box::new(str_term(rng, d, scope))),
        2 => StrTerm::Add(Box::new(str_term(rng, d, scope)), Box::new(str_term(rng, d, scope))),
        3 => StrTerm::Sub(Box::new(str_term(rng, d, scope)), Box::new(str_term(rng, d, scope))),
        4 => StrTerm::Last(Box::new(num_term(rng, d, scope)), Box::new(str_term(rng, d, scope))),
        5 => StrTerm::Compl(Box::new(str_term(rng, d, scope)), Box::new(small(rng))),
        _ => StrTerm::One(Box::new(small(rng))),
    }
}

fn atom<R: Rng>(rng: &mut R, scope: &Scope) -> Formula {
    let n = |rng: &mut R| num_term(rng, 2, scope);
    match rng.gen_range(0..8) {
        0 => Formula::Eq(n(rng), n(rng)),
        1 => Formula::Le(n(rng), n(rng)),
        2 => Formula::Lt(n(rng), n(rng)),
        3 if !scope.strs.is_empty() => Formula::StrEq(str_term(rng, 1, scope), str_term(rng, 1, scope)),
        4 if !scope.strs.is_empty() => Formula::StrLt(str_term(rng, 1, scope), str_term(rng, 1, scope)),
        5..=7 if !scope.strs.is_empty() => Formula::Member(str_term(rng, 1, scope), n(rng)),
        _ => Formula::Const(rng.gen_bool(0.5)),
    }
}

/// A random formula whose free variables lie in `scope`. Quantifier bounds
/// are small so that evaluation stays cheap.
pub fn formula<R: Rng>(rng: &mut R, depth: u32, scope: &Scope) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return atom(rng, scope);
    }
    let d = depth - 1;
    match rng.gen_range(0..8) {
        0 => Formula::Not(Box::new(formula(rng, d, scope))),
        1 => Formula::And(Box::new(formula(rng, d, scope)), Box::new(formula(rng, d, scope))),
        2 => Formula::Or(Box::new(formula(rng, d, scope)), Box::new(formula(rng, d, scope))),
        3 => Formula::Implies(Box::new(formula(rng, d, scope)), Box::new(formula(rng, d, scope))),
        4 => Formula::Iff(Box::new(formula(rng, d, scope)), Box::new(formula(rng, d, scope))),
        _ => {
            let string = scope.string_quantifiers && rng.gen_bool(0.3);
            let kind = if rng.gen_bool(0.5) { Quantifier::Exists } else { Quantifier::Forall };
            let mut inner = scope.clone();
            let name = if string {
                let name = format!("Q{}", inner.strs.len());
                inner.strs.push(name.clone());
                Var::str(name)
            } else {
                let name = format!("q{}", inner.nums.len());
                inner.nums.push(name.clone());
                Var::num(name)
            };
            let bound_scope = Scope { nums: scope.nums.clone(), strs: vec![], string_quantifiers: false };
            let term = match scope.nums.choose(rng) {
                Some(v) if rng.gen_bool(0.5) => NumTerm::Var(v.clone()),
                _ => num_term(rng, 1, &bound_scope),
            };
            // Keep string ranges tiny.
            let term = if string { NumTerm::Exp(Box::new(lit(1)), Box::new(term)).bin_len() } else { term };
            let bound = Bound { term, strict: rng.gen_bool(0.5) };
            Formula::quant(kind, name, Some(bound), formula(rng, d, &inner))
        }
    }
}

pub fn bitstr<R: Rng>(rng: &mut R, max_len: usize) -> BitStr {
    let len = rng.gen_range(0..=max_len);
    BitStr::from_positions((0..len).filter(|_| rng.gen_bool(0.5)))
}

/// Generator reaching every syntactic form, for parser round trips. The
/// formulas are not meant to be evaluated.
pub struct AnyAst {
    /// Definitions fixed-point atoms may refer to.
    pub defs: Vec<std::sync::Arc<Definition>>,
}

const NUM_NAMES: &[&str] = &["i", "j", "x", "y", "n0", "k1", "seqx", "ex"];
const STR_NAMES: &[&str] = &["X", "Y", "Z", "U", "V", "W2", "Pa", "Sx"];

impl AnyAst {
    fn lit<R: Rng>(rng: &mut R) -> NumTerm {
        NumTerm::Lit(match rng.gen_range(0..4) {
            0 => BigUint::from(rng.gen::<u64>()) * BigUint::from(rng.gen::<u64>()) + 1u32,
            1 => BigUint::from(rng.gen::<u32>()),
            _ => BigUint::from(rng.gen_range(0u32..10)),
        })
    }

    fn strlit<R: Rng>(rng: &mut R) -> BitStr {
        match rng.gen_range(0..3) {
            0 => BitStr::empty(),
            1 => bitstr(rng, 6),
            _ => bitstr(rng, 130),
        }
    }

    pub fn num<R: Rng>(&self, rng: &mut R, depth: u32) -> NumTerm {
        if depth == 0 || rng.gen_bool(0.3) {
            return if rng.gen_bool(0.6) {
                NumTerm::Var(NUM_NAMES.choose(rng).unwrap().to_string())
            } else {
                Self::lit(rng)
            };
        }
        let d = depth - 1;
        let n = |rng: &mut R| Box::new(self.num(rng, d));
        let s = |rng: &mut R| Box::new(self.string(rng, d));
        match rng.gen_range(0..11) {
            0 => NumTerm::Add(n(rng), n(rng)),
            1 => NumTerm::Mul(n(rng), n(rng)),
            2 => NumTerm::Monus(n(rng), n(rng)),
            3 => NumTerm::Len(s(rng)),
            4 => NumTerm::BinLen(n(rng)),
            5 => NumTerm::Pair(n(rng), n(rng)),
            6 => NumTerm::Exp(n(rng), n(rng)),
            7 => NumTerm::Val(n(rng), s(rng)),
            8 => NumTerm::SeqElem(s(rng), n(rng)),
            9 => NumTerm::NumOnes(n(rng), s(rng)),
            _ => Self::lit(rng),
        }
    }

    pub fn string<R: Rng>(&self, rng: &mut R, depth: u32) -> StrTerm {
        if depth == 0 || rng.gen_bool(0.3) {
            return if rng.gen_bool(0.7) {
                StrTerm::Var(STR_NAMES.choose(rng).unwrap().to_string())
            } else {
                StrTerm::Lit(Self::strlit(rng))
            };
        }
        let d = depth - 1;
        let n = |rng: &mut R| Box::new(self.num(rng, d));
        let s = |rng: &mut R| Box::new(self.string(rng, d));
        match rng.gen_range(0..9) {
            0 => StrTerm::Succ(s(rng)),
            1 => StrTerm::Pred(s(rng)),
            2 => StrTerm::Add(s(rng), s(rng)),
            3 => StrTerm::Sub(s(rng), s(rng)),
            4 => StrTerm::Pair(s(rng), s(rng)),
            5 => StrTerm::Component(s(rng), n(rng)),
            6 => StrTerm::One(n(rng)),
            7 => StrTerm::Last(n(rng), s(rng)),
            _ => StrTerm::Compl(s(rng), n(rng)),
        }
    }

    fn atom<R: Rng>(&self, rng: &mut R) -> Formula {
        let n = |rng: &mut R| self.num(rng, 2);
        let s = |rng: &mut R| self.string(rng, 2);
        match rng.gen_range(0..10) {
            0 => Formula::Const(rng.gen()),
            1 => Formula::Eq(n(rng), n(rng)),
            2 => Formula::Le(n(rng), n(rng)),
            3 => Formula::Lt(n(rng), n(rng)),
            4 => Formula::StrEq(s(rng), s(rng)),
            5 => Formula::StrLt(s(rng), s(rng)),
            6 => Formula::StrLe(s(rng), s(rng)),
            7 | 8 => Formula::Member(s(rng), n(rng)),
            _ => match self.defs.choose(rng) {
                Some(def) => Formula::Fix(Box::new(FixAtom {
                    def: def.clone(),
                    index: n(rng),
                    width: n(rng),
                    counter: s(rng),
                    start: rng.gen_bool(0.5).then(|| s(rng)),
                })),
                None => Formula::Const(true),
            },
        }
    }

    pub fn formula<R: Rng>(&self, rng: &mut R, depth: u32) -> Formula {
        if depth == 0 || rng.gen_bool(0.2) {
            return self.atom(rng);
        }
        let d = depth - 1;
        let f = |rng: &mut R| Box::new(self.formula(rng, d));
        match rng.gen_range(0..7) {
            0 => Formula::Not(f(rng)),
            1 => Formula::And(f(rng), f(rng)),
            2 => Formula::Or(f(rng), f(rng)),
            3 => Formula::Implies(f(rng), f(rng)),
            4 => Formula::Iff(f(rng), f(rng)),
            _ => {
                let kind = if rng.gen() { Quantifier::Exists } else { Quantifier::Forall };
                let binders = (0..rng.gen_range(1..=3))
                    .map(|_| {
                        let var = if rng.gen() {
                            Var::num(*NUM_NAMES.choose(rng).unwrap())
                        } else {
                            Var::str(*STR_NAMES.choose(rng).unwrap())
                        };
                        let bound = (!rng.gen_bool(0.15)).then(|| Bound { strict: rng.gen(), term: self.num(rng, 2) });
                        Binder { var, bound }
                    })
                    .collect();
                Formula::Quant(Box::new(Quant { kind, binders, body: *f(rng) }))
            }
        }
    }
}
