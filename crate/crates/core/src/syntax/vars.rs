//! Free variables, naming rules and capture-avoiding substitution.

use std::collections::{BTreeSet, HashMap};

use super::ast::*;

/// Identifiers the concrete syntax reserves for keywords and function symbols.
pub const RESERVED: &[&str] = &[
    "exists", "forall", "def", "true", "false", "val", "seq", "exp", "numones", "S", "P", "One", "Last", "Compl",
];

/// Whether `name` may name a variable of sort `sort`.
pub fn is_valid_var_name(name: &str, sort: Sort) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else { return false };
    let case_ok = match sort {
        Sort::Num => first.is_ascii_lowercase(),
        Sort::Str => first.is_ascii_uppercase(),
    };
    case_ok && chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && !RESERVED.contains(&name)
}

/// The sort a variable name denotes, by the case of its first letter.
pub fn sort_of_name(name: &str) -> Option<Sort> {
    match name.chars().next()? {
        c if c.is_ascii_lowercase() => Some(Sort::Num),
        c if c.is_ascii_uppercase() => Some(Sort::Str),
        _ => None,
    }
}

/// Variables with a free occurrence in `f`, tagged with their sorts.
///
/// A fixed-point atom contributes its argument variables plus the extra free
/// variables of its definition, which are read from the surrounding scope.
pub fn free_vars(f: &Formula) -> BTreeSet<Var> {
    node_free_vars(NodeRef::Formula(f))
}

pub fn node_free_vars(node: NodeRef<'_>) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    collect(node, &mut Vec::new(), &mut out);
    out
}

/// Free variables of a definition body that are not among its parameters.
pub fn extra_vars(def: &Definition) -> BTreeSet<Var> {
    let mut vars = free_vars(&def.body);
    for p in &def.params {
        vars.remove(p);
    }
    vars
}

fn collect(node: NodeRef<'_>, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    let mut note = |v: Var, bound: &Vec<Var>| {
        if !bound.contains(&v) {
            out.insert(v);
        }
    };
    match node {
        NodeRef::Num(NumTerm::Var(name)) => note(Var::num(name.as_str()), bound),
        NodeRef::Str(StrTerm::Var(name)) => note(Var::str(name.as_str()), bound),
        NodeRef::Formula(Formula::Quant(q)) => {
            for b in &q.binders {
                if let Some(bd) = &b.bound {
                    collect(NodeRef::Num(&bd.term), bound, out);
                }
            }
            let depth = bound.len();
            bound.extend(q.binders.iter().map(|b| b.var.clone()));
            collect(NodeRef::Formula(&q.body), bound, out);
            bound.truncate(depth);
        }
        NodeRef::Formula(Formula::Fix(atom)) => {
            for v in extra_vars(&atom.def) {
                note(v, bound);
            }
            for child in node.children() {
                collect(child, bound, out);
            }
        }
        _ => {
            for child in node.children() {
                collect(child, bound, out);
            }
        }
    }
}

/// A simultaneous substitution of terms for variables.
#[derive(Clone, Debug, Default)]
pub struct Subst {
    pub nums: HashMap<String, NumTerm>,
    pub strs: HashMap<String, StrTerm>,
}

impl Subst {
    pub fn new() -> Self {
        Subst::default()
    }

    pub fn num(mut self, name: &str, term: NumTerm) -> Self {
        self.nums.insert(name.to_string(), term);
        self
    }

    pub fn str(mut self, name: &str, term: StrTerm) -> Self {
        self.strs.insert(name.to_string(), term);
        self
    }

    fn is_empty(&self) -> bool {
        self.nums.is_empty() && self.strs.is_empty()
    }

    fn range_vars(&self) -> BTreeSet<Var> {
        let mut vars = BTreeSet::new();
        for t in self.nums.values() {
            vars.extend(node_free_vars(NodeRef::Num(t)));
        }
        for t in self.strs.values() {
            vars.extend(node_free_vars(NodeRef::Str(t)));
        }
        vars
    }

    fn without(&self, var: &Var) -> Subst {
        let mut s = self.clone();
        match var.sort {
            Sort::Num => {
                s.nums.remove(&var.name);
            }
            Sort::Str => {
                s.strs.remove(&var.name);
            }
        }
        s
    }

    fn bind(&mut self, var: &Var, fresh: &str) {
        match var.sort {
            Sort::Num => {
                self.nums.insert(var.name.clone(), NumTerm::var(fresh));
            }
            Sort::Str => {
                self.strs.insert(var.name.clone(), StrTerm::var(fresh));
            }
        }
    }
}

/// Replace free occurrences according to `s`, renaming bound variables that
/// would capture a variable of a substituted term.
///
/// Fixed-point atoms keep their definitions untouched: the extra variables of
/// a definition are resolved where the atom is evaluated.
pub fn substitute(f: &Formula, s: &Subst) -> Formula {
    if s.is_empty() {
        return f.clone();
    }
    match f {
        Formula::Const(b) => Formula::Const(*b),
        Formula::Eq(a, b) => Formula::Eq(subst_num(a, s), subst_num(b, s)),
        Formula::Le(a, b) => Formula::Le(subst_num(a, s), subst_num(b, s)),
        Formula::Lt(a, b) => Formula::Lt(subst_num(a, s), subst_num(b, s)),
        Formula::StrEq(a, b) => Formula::StrEq(subst_str(a, s), subst_str(b, s)),
        Formula::StrLt(a, b) => Formula::StrLt(subst_str(a, s), subst_str(b, s)),
        Formula::StrLe(a, b) => Formula::StrLe(subst_str(a, s), subst_str(b, s)),
        Formula::Member(x, t) => Formula::Member(subst_str(x, s), subst_num(t, s)),
        Formula::Fix(atom) => Formula::Fix(Box::new(FixAtom {
            def: atom.def.clone(),
            index: subst_num(&atom.index, s),
            width: subst_num(&atom.width, s),
            counter: subst_str(&atom.counter, s),
            start: atom.start.as_ref().map(|t| subst_str(t, s)),
        })),
        Formula::Not(a) => Formula::Not(Box::new(substitute(a, s))),
        Formula::And(a, b) => Formula::And(Box::new(substitute(a, s)), Box::new(substitute(b, s))),
        Formula::Or(a, b) => Formula::Or(Box::new(substitute(a, s)), Box::new(substitute(b, s))),
        Formula::Implies(a, b) => Formula::Implies(Box::new(substitute(a, s)), Box::new(substitute(b, s))),
        Formula::Iff(a, b) => Formula::Iff(Box::new(substitute(a, s)), Box::new(substitute(b, s))),
        Formula::Quant(q) => {
            let binders_bounds: Vec<Option<Bound>> = q
                .binders
                .iter()
                .map(|b| b.bound.as_ref().map(|bd| Bound { strict: bd.strict, term: subst_num(&bd.term, s) }))
                .collect();
            let mut inner = s.clone();
            for b in &q.binders {
                inner = inner.without(&b.var);
            }
            let captured = inner.range_vars();
            let mut avoid: BTreeSet<String> = captured.iter().map(|v| v.name.clone()).collect();
            avoid.extend(free_vars(&q.body).into_iter().map(|v| v.name));
            avoid.extend(q.binders.iter().map(|b| b.var.name.clone()));
            let mut binders = Vec::with_capacity(q.binders.len());
            for (b, bound) in q.binders.iter().zip(binders_bounds) {
                let var = if captured.contains(&b.var) {
                    let fresh = fresh_name(&b.var.name, &avoid);
                    avoid.insert(fresh.clone());
                    inner.bind(&b.var, &fresh);
                    Var { sort: b.var.sort, name: fresh }
                } else {
                    b.var.clone()
                };
                binders.push(Binder { var, bound });
            }
            Formula::Quant(Box::new(Quant { kind: q.kind, binders, body: substitute(&q.body, &inner) }))
        }
    }
}

fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    (1..)
        .map(|k| format!("{base}_{k}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded supply of names")
}

pub fn subst_num(t: &NumTerm, s: &Subst) -> NumTerm {
    let b = |x: &NumTerm| Box::new(subst_num(x, s));
    let bs = |x: &StrTerm| Box::new(subst_str(x, s));
    match t {
        NumTerm::Var(name) => s.nums.get(name).cloned().unwrap_or_else(|| t.clone()),
        NumTerm::Lit(_) => t.clone(),
        NumTerm::Add(x, y) => NumTerm::Add(b(x), b(y)),
        NumTerm::Mul(x, y) => NumTerm::Mul(b(x), b(y)),
        NumTerm::Monus(x, y) => NumTerm::Monus(b(x), b(y)),
        NumTerm::Pair(x, y) => NumTerm::Pair(b(x), b(y)),
        NumTerm::Exp(x, y) => NumTerm::Exp(b(x), b(y)),
        NumTerm::Len(x) => NumTerm::Len(bs(x)),
        NumTerm::BinLen(x) => NumTerm::BinLen(b(x)),
        NumTerm::Val(x, y) => NumTerm::Val(b(x), bs(y)),
        NumTerm::SeqElem(x, y) => NumTerm::SeqElem(bs(x), b(y)),
        NumTerm::NumOnes(x, y) => NumTerm::NumOnes(b(x), bs(y)),
    }
}

pub fn subst_str(t: &StrTerm, s: &Subst) -> StrTerm {
    let b = |x: &StrTerm| Box::new(subst_str(x, s));
    let bn = |x: &NumTerm| Box::new(subst_num(x, s));
    match t {
        StrTerm::Var(name) => s.strs.get(name).cloned().unwrap_or_else(|| t.clone()),
        StrTerm::Lit(_) => t.clone(),
        StrTerm::Succ(x) => StrTerm::Succ(b(x)),
        StrTerm::Pred(x) => StrTerm::Pred(b(x)),
        StrTerm::Add(x, y) => StrTerm::Add(b(x), b(y)),
        StrTerm::Sub(x, y) => StrTerm::Sub(b(x), b(y)),
        StrTerm::Pair(x, y) => StrTerm::Pair(b(x), b(y)),
        StrTerm::Component(x, y) => StrTerm::Component(b(x), bn(y)),
        StrTerm::One(x) => StrTerm::One(bn(x)),
        StrTerm::Last(x, y) => StrTerm::Last(bn(x), b(y)),
        StrTerm::Compl(x, y) => StrTerm::Compl(b(x), bn(y)),
    }
}
