//! Abstract syntax for two-sorted bounded-arithmetic formulas.
//!
//! Number terms and string terms are separate types, so every variable
//! occurrence carries its sort by construction. Variable names follow the
//! concrete-syntax convention: number variables start with a lowercase
//! letter, string variables with an uppercase one.

use std::fmt;
use std::ops;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::bitstr::BitStr;

pub type Natural = BigUint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Num,
    Str,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sort::Num => "num",
            Sort::Str => "str",
        })
    }
}

/// A sorted variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub sort: Sort,
    pub name: String,
}

impl Var {
    pub fn num(name: impl Into<String>) -> Self {
        Var { sort: Sort::Num, name: name.into() }
    }

    pub fn str(name: impl Into<String>) -> Self {
        Var { sort: Sort::Str, name: name.into() }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.name, self.sort)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NumTerm {
    Lit(Natural),
    Var(String),
    Add(Box<NumTerm>, Box<NumTerm>),
    Mul(Box<NumTerm>, Box<NumTerm>),
    /// Limited subtraction `max(0, t - s)`.
    Monus(Box<NumTerm>, Box<NumTerm>),
    /// `|X|`, the length of a string.
    Len(Box<StrTerm>),
    /// `|t|` on a number: its binary length.
    BinLen(Box<NumTerm>),
    /// `<t, s> = (t+s)(t+s+1) + 2s`.
    Pair(Box<NumTerm>, Box<NumTerm>),
    /// `min(2^t, s)`.
    Exp(Box<NumTerm>, Box<NumTerm>),
    /// `val(t, X)`: value of the `t` most significant bits of `X`.
    Val(Box<NumTerm>, Box<StrTerm>),
    /// `(Z)^t`: the `t`-th element of the number sequence coded by `Z`.
    SeqElem(Box<StrTerm>, Box<NumTerm>),
    /// `numones(t, X)`: number of set bits of `X` below `t`.
    NumOnes(Box<NumTerm>, Box<StrTerm>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StrTerm {
    Lit(BitStr),
    Var(String),
    /// `S(X)`
    Succ(Box<StrTerm>),
    /// `P(X)`
    Pred(Box<StrTerm>),
    Add(Box<StrTerm>, Box<StrTerm>),
    /// String subtraction, `∅` when `X <= Y`.
    Sub(Box<StrTerm>, Box<StrTerm>),
    /// `<X0, X1>`
    Pair(Box<StrTerm>, Box<StrTerm>),
    /// `Z[t]`, the `t`-th component of `Z`.
    Component(Box<StrTerm>, Box<NumTerm>),
    /// `One(t)`
    One(Box<NumTerm>),
    /// `Last(t, Y)`, the `t` most significant bits of `Y`.
    Last(Box<NumTerm>, Box<StrTerm>),
    /// `Compl(Y, t)`, the complement of `Y` below `t`.
    Compl(Box<StrTerm>, Box<NumTerm>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn dual(self) -> Self {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }
}

/// `<= t` or `< t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bound {
    pub strict: bool,
    pub term: NumTerm,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Binder {
    pub var: Var,
    /// `None` for an unbounded quantifier.
    pub bound: Option<Bound>,
}

/// A quantifier block `(Q v1 <= t1, ..., vk <= tk) body`.
///
/// Bound terms are read outside the block: they may not mention any variable
/// the block itself binds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quant {
    pub kind: Quantifier,
    pub binders: Vec<Binder>,
    pub body: Formula,
}

/// A named formula `def name(params) := body`.
///
/// When used as an operator through a fixed-point atom, the first number
/// parameter is the bit index and the first string parameter the state.
/// Free variables of the body that are not parameters are read from the
/// environment at the point of use.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Definition {
    pub name: String,
    pub params: Vec<Var>,
    pub body: Formula,
}

impl Definition {
    pub fn index_param(&self) -> Option<&str> {
        self.params.iter().find(|v| v.sort == Sort::Num).map(|v| v.name.as_str())
    }

    pub fn state_param(&self) -> Option<&str> {
        self.params.iter().find(|v| v.sort == Sort::Str).map(|v| v.name.as_str())
    }
}

/// `P[phi](index, width, counter)` or, relativized, with an explicit start.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FixAtom {
    pub def: Arc<Definition>,
    pub index: NumTerm,
    pub width: NumTerm,
    pub counter: StrTerm,
    pub start: Option<StrTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    Eq(NumTerm, NumTerm),
    Le(NumTerm, NumTerm),
    Lt(NumTerm, NumTerm),
    StrEq(StrTerm, StrTerm),
    /// String order `X < Y`.
    StrLt(StrTerm, StrTerm),
    StrLe(StrTerm, StrTerm),
    /// `X(t)`, i.e. `t ∈ X`.
    Member(StrTerm, NumTerm),
    Fix(Box<FixAtom>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Quant(Box<Quant>),
}

/// A borrowed node of any syntactic category.
#[derive(Clone, Copy, Debug)]
pub enum NodeRef<'a> {
    Formula(&'a Formula),
    Num(&'a NumTerm),
    Str(&'a StrTerm),
}

impl<'a> NodeRef<'a> {
    /// Direct children in source order.
    pub fn children(self) -> Vec<NodeRef<'a>> {
        use NodeRef as N;
        match self {
            N::Formula(f) => match f {
                Formula::Const(_) => vec![],
                Formula::Eq(a, b) | Formula::Le(a, b) | Formula::Lt(a, b) => vec![N::Num(a), N::Num(b)],
                Formula::StrEq(a, b) | Formula::StrLt(a, b) | Formula::StrLe(a, b) => {
                    vec![N::Str(a), N::Str(b)]
                }
                Formula::Member(x, t) => vec![N::Str(x), N::Num(t)],
                Formula::Fix(atom) => {
                    let mut v = vec![N::Num(&atom.index), N::Num(&atom.width), N::Str(&atom.counter)];
                    if let Some(s) = &atom.start {
                        v.push(N::Str(s));
                    }
                    v
                }
                Formula::Not(a) => vec![N::Formula(a)],
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                    vec![N::Formula(a), N::Formula(b)]
                }
                Formula::Quant(q) => q
                    .binders
                    .iter()
                    .filter_map(|b| b.bound.as_ref().map(|b| N::Num(&b.term)))
                    .chain(std::iter::once(N::Formula(&q.body)))
                    .collect(),
            },
            N::Num(t) => match t {
                NumTerm::Lit(_) | NumTerm::Var(_) => vec![],
                NumTerm::Add(a, b)
                | NumTerm::Mul(a, b)
                | NumTerm::Monus(a, b)
                | NumTerm::Pair(a, b)
                | NumTerm::Exp(a, b) => vec![N::Num(a), N::Num(b)],
                NumTerm::Len(x) => vec![N::Str(x)],
                NumTerm::BinLen(a) => vec![N::Num(a)],
                NumTerm::Val(a, x) | NumTerm::NumOnes(a, x) => vec![N::Num(a), N::Str(x)],
                NumTerm::SeqElem(x, a) => vec![N::Str(x), N::Num(a)],
            },
            N::Str(t) => match t {
                StrTerm::Lit(_) | StrTerm::Var(_) => vec![],
                StrTerm::Succ(x) | StrTerm::Pred(x) => vec![N::Str(x)],
                StrTerm::Add(a, b) | StrTerm::Sub(a, b) | StrTerm::Pair(a, b) => vec![N::Str(a), N::Str(b)],
                StrTerm::Component(x, a) | StrTerm::Compl(x, a) => vec![N::Str(x), N::Num(a)],
                StrTerm::One(a) => vec![N::Num(a)],
                StrTerm::Last(a, x) => vec![N::Num(a), N::Str(x)],
            },
        }
    }

    /// Number of nodes in the subtree rooted here.
    pub fn size(self) -> usize {
        1 + self.children().into_iter().map(NodeRef::size).sum::<usize>()
    }
}

// Builders. These keep the compiler and test code close to the notation.

impl NumTerm {
    pub fn lit(n: u64) -> Self {
        NumTerm::Lit(Natural::from(n))
    }

    pub fn var(name: impl Into<String>) -> Self {
        NumTerm::Var(name.into())
    }

    pub fn monus(self, other: NumTerm) -> Self {
        NumTerm::Monus(Box::new(self), Box::new(other))
    }

    pub fn pair(self, other: NumTerm) -> Self {
        NumTerm::Pair(Box::new(self), Box::new(other))
    }

    pub fn bin_len(self) -> Self {
        NumTerm::BinLen(Box::new(self))
    }

    pub fn eq(self, other: NumTerm) -> Formula {
        Formula::Eq(self, other)
    }

    pub fn le(self, other: NumTerm) -> Formula {
        Formula::Le(self, other)
    }

    pub fn lt(self, other: NumTerm) -> Formula {
        Formula::Lt(self, other)
    }
}

impl ops::Add for NumTerm {
    type Output = NumTerm;
    fn add(self, rhs: NumTerm) -> NumTerm {
        NumTerm::Add(Box::new(self), Box::new(rhs))
    }
}

impl ops::Mul for NumTerm {
    type Output = NumTerm;
    fn mul(self, rhs: NumTerm) -> NumTerm {
        NumTerm::Mul(Box::new(self), Box::new(rhs))
    }
}

impl StrTerm {
    pub fn var(name: impl Into<String>) -> Self {
        StrTerm::Var(name.into())
    }

    pub fn len(self) -> NumTerm {
        NumTerm::Len(Box::new(self))
    }

    /// `X(t)`
    pub fn at(self, index: NumTerm) -> Formula {
        Formula::Member(self, index)
    }

    pub fn succ(self) -> Self {
        StrTerm::Succ(Box::new(self))
    }

    pub fn last(count: NumTerm, of: StrTerm) -> Self {
        StrTerm::Last(Box::new(count), Box::new(of))
    }
}

impl Formula {
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn iff(self, other: Formula) -> Self {
        Formula::Iff(Box::new(self), Box::new(other))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn all<I: IntoIterator<Item = Formula>>(parts: I) -> Self {
        parts.into_iter().reduce(Formula::and).unwrap_or(Formula::Const(true))
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn any<I: IntoIterator<Item = Formula>>(parts: I) -> Self {
        parts.into_iter().reduce(Formula::or).unwrap_or(Formula::Const(false))
    }

    pub fn quant(kind: Quantifier, var: Var, bound: Option<Bound>, body: Formula) -> Self {
        Formula::Quant(Box::new(Quant { kind, binders: vec![Binder { var, bound }], body }))
    }

    /// `(exists v <= t) body` over a number variable.
    pub fn exists_le(name: &str, bound: NumTerm, body: Formula) -> Self {
        Formula::quant(Quantifier::Exists, Var::num(name), Some(Bound { strict: false, term: bound }), body)
    }

    /// `(exists v < t) body` over a number variable.
    pub fn exists_lt(name: &str, bound: NumTerm, body: Formula) -> Self {
        Formula::quant(Quantifier::Exists, Var::num(name), Some(Bound { strict: true, term: bound }), body)
    }

    /// `(forall v < t) body` over a number variable.
    pub fn forall_lt(name: &str, bound: NumTerm, body: Formula) -> Self {
        Formula::quant(Quantifier::Forall, Var::num(name), Some(Bound { strict: true, term: bound }), body)
    }

    /// `(forall v <= t) body` over a number variable.
    pub fn forall_le(name: &str, bound: NumTerm, body: Formula) -> Self {
        Formula::quant(Quantifier::Forall, Var::num(name), Some(Bound { strict: false, term: bound }), body)
    }

    pub fn node(&self) -> NodeRef<'_> {
        NodeRef::Formula(self)
    }
}
