//! Canonical text. Parentheses appear only where precedence requires them,
//! plus around negated comparisons and binary quantifier bodies.

use crate::syntax::*;

// Precedence levels, loosest first.
const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;
const ATOM: u8 = 6;
const ADD: u8 = 7;
const MUL: u8 = 8;
const POSTFIX: u8 = 9;

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    formula(f, 0, &mut out);
    out
}

pub fn print_num(t: &NumTerm) -> String {
    let mut out = String::new();
    num(t, 0, &mut out);
    out
}

pub fn print_str(t: &StrTerm) -> String {
    let mut out = String::new();
    string(t, 0, &mut out);
    out
}

/// `def name(params) := body;`
pub fn print_definition(d: &Definition) -> String {
    let params: Vec<&str> = d.params.iter().map(|v| v.name.as_str()).collect();
    format!("def {}({}) := {};", d.name, params.join(", "), print_formula(&d.body))
}

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        Formula::Not(_) | Formula::Quant(_) => UNARY,
        _ => ATOM,
    }
}

fn is_comparison(f: &Formula) -> bool {
    matches!(
        f,
        Formula::Eq(..) | Formula::Le(..) | Formula::Lt(..) | Formula::StrEq(..) | Formula::StrLe(..) | Formula::StrLt(..)
    )
}

fn formula(f: &Formula, ctx: u8, out: &mut String) {
    let paren = level(f) < ctx;
    if paren {
        out.push('(');
    }
    match f {
        Formula::Const(b) => out.push_str(if *b { "true" } else { "false" }),
        Formula::Eq(a, b) => relation(|o| num(a, ADD, o), "=", |o| num(b, ADD, o), out),
        Formula::Le(a, b) => relation(|o| num(a, ADD, o), "<=", |o| num(b, ADD, o), out),
        Formula::Lt(a, b) => relation(|o| num(a, ADD, o), "<", |o| num(b, ADD, o), out),
        Formula::StrEq(a, b) => relation(|o| string(a, ADD, o), "=", |o| string(b, ADD, o), out),
        Formula::StrLe(a, b) => relation(|o| string(a, ADD, o), "<=", |o| string(b, ADD, o), out),
        Formula::StrLt(a, b) => relation(|o| string(a, ADD, o), "<", |o| string(b, ADD, o), out),
        Formula::Member(x, t) => {
            string(x, POSTFIX, out);
            out.push('(');
            num(t, 0, out);
            out.push(')');
        }
        Formula::Fix(atom) => {
            out.push_str("P[");
            out.push_str(&atom.def.name);
            out.push_str("](");
            num(&atom.index, 0, out);
            out.push_str(", ");
            num(&atom.width, 0, out);
            out.push_str(", ");
            string(&atom.counter, 0, out);
            if let Some(s) = &atom.start {
                out.push_str(", ");
                string(s, 0, out);
            }
            out.push(')');
        }
        Formula::Not(a) => {
            out.push('!');
            if is_comparison(a) {
                out.push('(');
                formula(a, 0, out);
                out.push(')');
            } else {
                formula(a, UNARY, out);
            }
        }
        Formula::And(a, b) => binary(a, AND, " && ", b, AND + 1, out),
        Formula::Or(a, b) => binary(a, OR, " || ", b, OR + 1, out),
        Formula::Implies(a, b) => binary(a, IMPLIES + 1, " -> ", b, IMPLIES, out),
        Formula::Iff(a, b) => binary(a, IFF + 1, " <-> ", b, IFF, out),
        Formula::Quant(q) => {
            out.push('(');
            out.push_str(match q.kind {
                Quantifier::Exists => "exists ",
                Quantifier::Forall => "forall ",
            });
            for (k, b) in q.binders.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                out.push_str(&b.var.name);
                if let Some(bound) = &b.bound {
                    out.push_str(if bound.strict { " < " } else { " <= " });
                    num(&bound.term, ADD, out);
                }
            }
            out.push_str(") ");
            formula(&q.body, UNARY, out);
        }
    }
    if paren {
        out.push(')');
    }
}

fn relation(a: impl FnOnce(&mut String), op: &str, b: impl FnOnce(&mut String), out: &mut String) {
    a(out);
    out.push(' ');
    out.push_str(op);
    out.push(' ');
    b(out);
}

fn binary(a: &Formula, la: u8, op: &str, b: &Formula, lb: u8, out: &mut String) {
    formula(a, la, out);
    out.push_str(op);
    formula(b, lb, out);
}

fn num_level(t: &NumTerm) -> u8 {
    match t {
        NumTerm::Add(..) | NumTerm::Monus(..) => ADD,
        NumTerm::Mul(..) => MUL,
        _ => POSTFIX,
    }
}

fn str_level(t: &StrTerm) -> u8 {
    match t {
        StrTerm::Add(..) | StrTerm::Sub(..) => ADD,
        _ => POSTFIX,
    }
}

fn num(t: &NumTerm, ctx: u8, out: &mut String) {
    let paren = num_level(t) < ctx;
    if paren {
        out.push('(');
    }
    match t {
        NumTerm::Lit(n) => out.push_str(&n.to_string()),
        NumTerm::Var(v) => out.push_str(v),
        NumTerm::Add(a, b) => {
            num(a, ADD, out);
            out.push_str(" + ");
            num(b, MUL, out);
        }
        NumTerm::Monus(a, b) => {
            num(a, ADD, out);
            out.push_str(" - ");
            num(b, MUL, out);
        }
        NumTerm::Mul(a, b) => {
            num(a, MUL, out);
            out.push_str(" * ");
            num(b, POSTFIX, out);
        }
        NumTerm::Len(x) => bars(print_str(x), out),
        NumTerm::BinLen(a) => bars(print_num(a), out),
        NumTerm::Pair(a, b) => {
            out.push('<');
            num(a, ADD, out);
            out.push_str(", ");
            num(b, ADD, out);
            out.push('>');
        }
        NumTerm::Exp(a, b) => call("exp", |o| num(a, 0, o), |o| num(b, 0, o), out),
        NumTerm::Val(a, x) => call("val", |o| num(a, 0, o), |o| string(x, 0, o), out),
        NumTerm::NumOnes(a, x) => call("numones", |o| num(a, 0, o), |o| string(x, 0, o), out),
        NumTerm::SeqElem(x, a) => call("seq", |o| string(x, 0, o), |o| num(a, 0, o), out),
    }
    if paren {
        out.push(')');
    }
}

/// `|inner|`, padded so an inner bar never merges with ours into `||`.
fn bars(inner: String, out: &mut String) {
    out.push('|');
    if inner.starts_with('|') {
        out.push(' ');
    }
    out.push_str(&inner);
    if inner.ends_with('|') {
        out.push(' ');
    }
    out.push('|');
}

fn call(name: &str, a: impl FnOnce(&mut String), b: impl FnOnce(&mut String), out: &mut String) {
    out.push_str(name);
    out.push('(');
    a(out);
    out.push_str(", ");
    b(out);
    out.push(')');
}

fn string(t: &StrTerm, ctx: u8, out: &mut String) {
    let paren = str_level(t) < ctx;
    if paren {
        out.push('(');
    }
    match t {
        StrTerm::Lit(b) => out.push_str(&b.to_string()),
        StrTerm::Var(v) => out.push_str(v),
        StrTerm::Succ(x) | StrTerm::Pred(x) => {
            out.push_str(if matches!(t, StrTerm::Succ(_)) { "S(" } else { "P(" });
            string(x, 0, out);
            out.push(')');
        }
        StrTerm::Add(a, b) => {
            string(a, ADD, out);
            out.push_str(" + ");
            string(b, MUL, out);
        }
        StrTerm::Sub(a, b) => {
            string(a, ADD, out);
            out.push_str(" - ");
            string(b, MUL, out);
        }
        StrTerm::Pair(a, b) => {
            out.push('<');
            string(a, ADD, out);
            out.push_str(", ");
            string(b, ADD, out);
            out.push('>');
        }
        StrTerm::Component(x, a) => {
            string(x, POSTFIX, out);
            out.push('[');
            num(a, 0, out);
            out.push(']');
        }
        StrTerm::One(a) => {
            out.push_str("One(");
            num(a, 0, out);
            out.push(')');
        }
        StrTerm::Last(a, x) => call("Last", |o| num(a, 0, o), |o| string(x, 0, o), out),
        StrTerm::Compl(x, a) => call("Compl", |o| string(x, 0, o), |o| num(a, 0, o), out),
    }
    if paren {
        out.push(')');
    }
}
