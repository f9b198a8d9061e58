//! The Σ^B_i / Π^B_i hierarchy.
//!
//! Classification works on the negation normal form implicitly: each
//! subformula yields the pair `(σ, π)` of the least indices at which it is
//! Σ^B_σ and Π^B_π, and negation swaps the pair. Bounded number quantifiers
//! and fixed-point atoms do not affect the indices.

use std::fmt;

use super::ast::*;
use super::vars::node_free_vars;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormulaClass {
    SigmaB(u32),
    PiB(u32),
    Unbounded,
}

impl FormulaClass {
    /// The class of the negation.
    pub fn dual(self) -> Self {
        match self {
            FormulaClass::SigmaB(0) => FormulaClass::SigmaB(0),
            FormulaClass::SigmaB(i) => FormulaClass::PiB(i),
            FormulaClass::PiB(i) => FormulaClass::SigmaB(i),
            FormulaClass::Unbounded => FormulaClass::Unbounded,
        }
    }

    pub fn index(self) -> Option<u32> {
        match self {
            FormulaClass::SigmaB(i) | FormulaClass::PiB(i) => Some(i),
            FormulaClass::Unbounded => None,
        }
    }

    /// Explicit coercion: whether every formula of class `self` also lies in `other`.
    pub fn is_within(self, other: FormulaClass) -> bool {
        use FormulaClass::*;
        match (self, other) {
            (_, Unbounded) => true,
            (Unbounded, _) => false,
            (SigmaB(0), _) => true,
            (SigmaB(i), SigmaB(j)) | (PiB(i), PiB(j)) => i <= j,
            (SigmaB(i), PiB(j)) | (PiB(i), SigmaB(j)) => i < j,
        }
    }
}

impl fmt::Display for FormulaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaClass::SigmaB(i) => write!(f, "SigmaB({i})"),
            FormulaClass::PiB(i) => write!(f, "PiB({i})"),
            FormulaClass::Unbounded => f.write_str("Unbounded"),
        }
    }
}

/// Least class of `f`.
///
/// When `f` is Σ^B_i and Π^B_i at the same least index, the polarity of the
/// leftmost outermost string quantifier of the negation normal form decides,
/// which keeps `classify(!f) == classify(f).dual()`.
pub fn classify(f: &Formula) -> FormulaClass {
    let Some((sigma, pi)) = levels(f) else {
        return FormulaClass::Unbounded;
    };
    match sigma.cmp(&pi) {
        std::cmp::Ordering::Less => FormulaClass::SigmaB(sigma),
        std::cmp::Ordering::Greater => FormulaClass::PiB(pi),
        std::cmp::Ordering::Equal if sigma == 0 => FormulaClass::SigmaB(0),
        std::cmp::Ordering::Equal => match leading_string_quantifier(f, true) {
            Some(Quantifier::Forall) => FormulaClass::PiB(pi),
            _ => FormulaClass::SigmaB(sigma),
        },
    }
}

/// `(σ, π)`, or `None` if some quantifier is unbounded.
fn levels(f: &Formula) -> Option<(u32, u32)> {
    Some(match f {
        Formula::Const(_)
        | Formula::Eq(..)
        | Formula::Le(..)
        | Formula::Lt(..)
        | Formula::StrEq(..)
        | Formula::StrLt(..)
        | Formula::StrLe(..)
        | Formula::Member(..)
        | Formula::Fix(_) => (0, 0),
        Formula::Not(a) => {
            let (s, p) = levels(a)?;
            (p, s)
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            let (sa, pa) = levels(a)?;
            let (sb, pb) = levels(b)?;
            (sa.max(sb), pa.max(pb))
        }
        Formula::Implies(a, b) => {
            let (sa, pa) = levels(a)?;
            let (sb, pb) = levels(b)?;
            (pa.max(sb), sa.max(pb))
        }
        Formula::Iff(a, b) => {
            // (!a || b) && (a || !b): both polarities of each side occur.
            let (sa, pa) = levels(a)?;
            let (sb, pb) = levels(b)?;
            let m = sa.max(pa).max(sb).max(pb);
            (m, m)
        }
        Formula::Quant(q) => {
            let (mut s, mut p) = levels(&q.body)?;
            for b in q.binders.iter().rev() {
                b.bound.as_ref()?;
                if b.var.sort == Sort::Str {
                    (s, p) = match q.kind {
                        Quantifier::Exists => {
                            let s2 = s.max(1).min(p + 1);
                            (s2, s2 + 1)
                        }
                        Quantifier::Forall => {
                            let p2 = p.max(1).min(s + 1);
                            (p2 + 1, p2)
                        }
                    };
                }
            }
            (s, p)
        }
    })
}

/// Kind of the first string quantifier met in a left-to-right pre-order walk
/// of the negation normal form; `positive` is the current polarity.
fn leading_string_quantifier(f: &Formula, positive: bool) -> Option<Quantifier> {
    match f {
        Formula::Not(a) => leading_string_quantifier(a, !positive),
        Formula::And(a, b) | Formula::Or(a, b) => {
            leading_string_quantifier(a, positive).or_else(|| leading_string_quantifier(b, positive))
        }
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            leading_string_quantifier(a, !positive).or_else(|| leading_string_quantifier(b, positive))
        }
        Formula::Quant(q) => {
            if q.binders.iter().any(|b| b.var.sort == Sort::Str) {
                Some(if positive { q.kind } else { q.kind.dual() })
            } else {
                leading_string_quantifier(&q.body, positive)
            }
        }
        _ => None,
    }
}

/// A quantifier whose bound mentions a variable of its own block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundViolation {
    /// Child indices (see [`NodeRef::children`]) from the root to the quantifier.
    pub path: Vec<usize>,
    /// The offending variable.
    pub var: Var,
}

impl fmt::Display for BoundViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bound of quantifier at path {:?} mentions its own variable {}", self.path, self.var)
    }
}

/// Reports the first quantifier (in pre-order) whose bound terms mention a
/// variable bound by the same block.
pub fn check_bound_independence(f: &Formula) -> Result<(), BoundViolation> {
    let mut path = Vec::new();
    walk_bounds(NodeRef::Formula(f), &mut path)
}

fn walk_bounds(node: NodeRef<'_>, path: &mut Vec<usize>) -> Result<(), BoundViolation> {
    if let NodeRef::Formula(Formula::Quant(q)) = node {
        for b in q.binders.iter().filter_map(|b| b.bound.as_ref()) {
            let vars = node_free_vars(NodeRef::Num(&b.term));
            if let Some(v) = q.binders.iter().map(|b| &b.var).find(|v| vars.contains(v)) {
                return Err(BoundViolation { path: path.clone(), var: v.clone() });
            }
        }
    }
    for (k, child) in node.children().into_iter().enumerate() {
        path.push(k);
        walk_bounds(child, path)?;
        path.pop();
    }
    Ok(())
}
