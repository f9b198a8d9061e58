//! Pratt parser into an untyped tree, followed by a sort check that builds
//! the typed AST and its span tree.

use std::sync::Arc;

use num_bigint::BigUint;

use super::lexer::{tokenize, Tok, Token, FUNCTIONS, KEYWORDS};
use super::span::{SourceSpan, SpanTree};
use super::{Defs, ParseError, Program, SortError, SyntaxError};
use crate::bitstr::BitStr;
use crate::syntax::vars::{is_valid_var_name, sort_of_name, substitute, Subst};
use crate::syntax::*;

const MAX_DEPTH: usize = 200;

// Binding powers.
const BP_IFF: u8 = 10;
const BP_IMPLIES: u8 = 20;
const BP_OR: u8 = 30;
const BP_AND: u8 = 40;
const BP_UNARY: u8 = 50;
const BP_REL: u8 = 60;
const BP_ADD: u8 = 70;
const BP_MUL: u8 = 80;
const BP_POSTFIX: u8 = 90;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BinOp {
    Iff,
    Implies,
    Or,
    And,
    Eq,
    Le,
    Lt,
    Add,
    Sub,
    Mul,
}

#[derive(Clone, Debug)]
struct RawBinder {
    name: String,
    span: SourceSpan,
    strict: Option<bool>,
}

#[derive(Clone, Debug)]
enum Kind {
    Ident(String),
    Num(BigUint),
    Bits(BitStr),
    Bool(bool),
    Bin(BinOp),
    Not,
    /// Arguments are the bound terms of the bounded binders, then the body.
    Quant(Quantifier, Vec<RawBinder>),
    Len,
    Pair,
    Call(String),
    /// `t(s)`: membership.
    Apply,
    /// `t[s]`: component.
    Index,
    Fix(String),
}

#[derive(Clone, Debug)]
struct Expr {
    kind: Kind,
    span: SourceSpan,
    args: Vec<Expr>,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
}

fn term_starters() -> Vec<String> {
    ["identifier", "number", "string literal", "`(`", "`<`", "`|`", "`!`"].iter().map(|s| s.to_string()).collect()
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: tokenize(src)?, pos: 0, depth: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: Vec<String>) -> ParseError {
        let found = self.peek().to_string();
        ParseError::new(self.span(), format!("unexpected {found}"), expected)
    }

    fn expect(&mut self, tok: Tok) -> Result<SourceSpan, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump().span)
        } else {
            Err(self.error(vec![tok.to_string()]))
        }
    }

    fn ident(&mut self) -> Result<(String, SourceSpan), ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let span = self.bump().span;
                Ok((name, span))
            }
            _ => Err(self.error(vec!["identifier".into()])),
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Expr, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError::new(self.span(), "expression nested too deeply".into(), vec![]));
        }
        let mut lhs = self.prefix()?;
        let mut chained = false;
        loop {
            let (op, lbp, rbp) = match self.peek() {
                Tok::DArrow => (BinOp::Iff, BP_IFF, BP_IFF),
                Tok::Arrow => (BinOp::Implies, BP_IMPLIES, BP_IMPLIES),
                Tok::OrOr => (BinOp::Or, BP_OR, BP_OR + 1),
                Tok::AndAnd => (BinOp::And, BP_AND, BP_AND + 1),
                Tok::Eq => (BinOp::Eq, BP_REL, BP_REL + 1),
                Tok::Le => (BinOp::Le, BP_REL, BP_REL + 1),
                Tok::Lt => (BinOp::Lt, BP_REL, BP_REL + 1),
                Tok::Plus => (BinOp::Add, BP_ADD, BP_ADD + 1),
                Tok::Minus => (BinOp::Sub, BP_ADD, BP_ADD + 1),
                Tok::Star => (BinOp::Mul, BP_MUL, BP_MUL + 1),
                Tok::LParen | Tok::LBrack if BP_POSTFIX >= min_bp => {
                    let close = if *self.peek() == Tok::LParen { Tok::RParen } else { Tok::RBrack };
                    let kind = if close == Tok::RParen { Kind::Apply } else { Kind::Index };
                    self.bump();
                    let arg = self.expr(0)?;
                    let end = self.expect(close)?;
                    lhs = Expr { kind, span: lhs.span.to(end), args: vec![lhs, arg] };
                    continue;
                }
                _ => break,
            };
            if lbp < min_bp {
                break;
            }
            if lbp == BP_REL {
                if chained {
                    return Err(ParseError::new(
                        self.span(),
                        "comparison operators do not associate".into(),
                        vec!["`&&`".into(), "`||`".into()],
                    ));
                }
                chained = true;
            }
            self.bump();
            let rhs = self.expr(rbp)?;
            lhs = Expr { kind: Kind::Bin(op), span: lhs.span.to(rhs.span), args: vec![lhs, rhs] };
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Expr, ParseError> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                let body = self.expr(BP_UNARY)?;
                Ok(Expr { kind: Kind::Not, span: start.to(body.span), args: vec![body] })
            }
            Tok::LParen => {
                if let Tok::Ident(word) = self.peek_at(1) {
                    let kind = match word.as_str() {
                        "exists" => Some(Quantifier::Exists),
                        "forall" => Some(Quantifier::Forall),
                        _ => None,
                    };
                    if let Some(kind) = kind {
                        return self.quantifier(kind);
                    }
                }
                self.bump();
                let inner = self.expr(0)?;
                let end = self.expect(Tok::RParen)?;
                Ok(Expr { span: start.to(end), ..inner })
            }
            Tok::Lt => {
                self.bump();
                let a = self.expr(BP_ADD)?;
                self.expect(Tok::Comma)?;
                let b = self.expr(BP_ADD)?;
                let end = self.expect(Tok::Gt)?;
                Ok(Expr { kind: Kind::Pair, span: start.to(end), args: vec![a, b] })
            }
            Tok::Bar => {
                self.bump();
                let inner = self.expr(BP_ADD)?;
                let end = self.expect(Tok::Bar)?;
                Ok(Expr { kind: Kind::Len, span: start.to(end), args: vec![inner] })
            }
            Tok::Num(n) => {
                self.bump();
                Ok(Expr { kind: Kind::Num(n), span: start, args: vec![] })
            }
            Tok::Bits(b) => {
                self.bump();
                Ok(Expr { kind: Kind::Bits(b), span: start, args: vec![] })
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "true" | "false" => {
                        return Ok(Expr { kind: Kind::Bool(name == "true"), span: start, args: vec![] })
                    }
                    "exists" | "forall" | "def" => {
                        self.pos -= 1;
                        return Err(self.error(term_starters()));
                    }
                    _ => {}
                }
                if name == "P" && *self.peek() == Tok::LBrack {
                    self.bump();
                    let (def, _) = self.ident()?;
                    self.expect(Tok::RBrack)?;
                    let (args, end) = self.call_args()?;
                    return Ok(Expr { kind: Kind::Fix(def), span: start.to(end), args });
                }
                let is_call = FUNCTIONS.contains(&name.as_str())
                    || (sort_of_name(&name) == Some(Sort::Num) && *self.peek() == Tok::LParen);
                if is_call {
                    let (args, end) = self.call_args()?;
                    return Ok(Expr { kind: Kind::Call(name), span: start.to(end), args });
                }
                Ok(Expr { kind: Kind::Ident(name), span: start, args: vec![] })
            }
            _ => Err(self.error(term_starters())),
        }
    }

    fn call_args(&mut self) -> Result<(Vec<Expr>, SourceSpan), ParseError> {
        self.expect(Tok::LParen)?;
        let mut args = vec![self.expr(0)?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.expr(0)?);
        }
        let end = self.expect(Tok::RParen)?;
        Ok((args, end))
    }

    fn quantifier(&mut self, kind: Quantifier) -> Result<Expr, ParseError> {
        let start = self.expect(Tok::LParen)?;
        self.bump();
        let mut binders = Vec::new();
        let mut bounds = Vec::new();
        loop {
            let (name, span) = self.ident()?;
            let strict = match self.peek() {
                Tok::Le => Some(false),
                Tok::Lt => Some(true),
                _ => None,
            };
            if strict.is_some() {
                self.bump();
                bounds.push(self.expr(BP_ADD)?);
            }
            binders.push(RawBinder { name, span, strict });
            match self.peek() {
                Tok::Comma => {
                    self.bump();
                }
                Tok::RParen => {
                    self.bump();
                    break;
                }
                _ => {
                    let mut expected = vec!["`,`".to_string(), "`)`".to_string()];
                    if strict.is_none() {
                        expected.splice(0..0, ["`<=`".to_string(), "`<`".to_string()]);
                    }
                    return Err(self.error(expected));
                }
            }
        }
        let body = self.expr(BP_UNARY)?;
        let span = start.to(body.span);
        bounds.push(body);
        Ok(Expr { kind: Kind::Quant(kind, binders), span, args: bounds })
    }

    fn at_eof(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(vec!["an operator".into(), "end of input".into()]))
        }
    }
}

// Sort checking.

fn sort_err(span: SourceSpan, message: impl Into<String>) -> SyntaxError {
    SyntaxError::Sort(SortError { span, message: message.into() })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Cat {
    Formula,
    Term(Sort),
}

fn describe(c: Cat) -> &'static str {
    match c {
        Cat::Formula => "a formula",
        Cat::Term(Sort::Num) => "a number term",
        Cat::Term(Sort::Str) => "a string term",
    }
}

struct Checker<'d> {
    defs: &'d Defs,
}

impl<'d> Checker<'d> {
    fn cat(&self, e: &Expr) -> Result<Cat, SyntaxError> {
        Ok(match &e.kind {
            Kind::Ident(name) => match sort_of_name(name) {
                Some(s) => Cat::Term(s),
                None => return Err(sort_err(e.span, format!("`{name}` is not a variable name"))),
            },
            Kind::Num(_) => Cat::Term(Sort::Num),
            Kind::Bits(_) => Cat::Term(Sort::Str),
            Kind::Bool(_) | Kind::Not | Kind::Quant(..) | Kind::Apply | Kind::Fix(_) => Cat::Formula,
            Kind::Bin(op) => match op {
                BinOp::Iff | BinOp::Implies | BinOp::Or | BinOp::And | BinOp::Eq | BinOp::Le | BinOp::Lt => {
                    Cat::Formula
                }
                BinOp::Mul => Cat::Term(Sort::Num),
                BinOp::Add | BinOp::Sub => self.cat(&e.args[0])?,
            },
            Kind::Pair => self.cat(&e.args[0])?,
            Kind::Len => Cat::Term(Sort::Num),
            Kind::Index => Cat::Term(Sort::Str),
            Kind::Call(name) => match name.as_str() {
                "S" | "P" | "One" | "Last" | "Compl" => Cat::Term(Sort::Str),
                "val" | "seq" | "exp" | "numones" => Cat::Term(Sort::Num),
                _ => Cat::Formula,
            },
        })
    }

    fn mismatch(&self, e: &Expr, want: Cat) -> SyntaxError {
        match self.cat(e) {
            Ok(got) => sort_err(e.span, format!("expected {}, found {}", describe(want), describe(got))),
            Err(err) => err,
        }
    }

    fn arity(&self, e: &Expr, name: &str, n: usize) -> Result<(), SyntaxError> {
        if e.args.len() == n {
            Ok(())
        } else {
            Err(sort_err(e.span, format!("`{name}` takes {n} argument(s), found {}", e.args.len())))
        }
    }

    fn formula(&self, e: &Expr) -> Result<(Formula, SpanTree), SyntaxError> {
        let node = |f: Formula, kids: Vec<SpanTree>| Ok((f, SpanTree { span: e.span, children: kids }));
        match &e.kind {
            Kind::Bool(b) => node(Formula::Const(*b), vec![]),
            Kind::Not => {
                let (a, sa) = self.formula(&e.args[0])?;
                node(a.not(), vec![sa])
            }
            Kind::Bin(op @ (BinOp::Iff | BinOp::Implies | BinOp::Or | BinOp::And)) => {
                let (a, sa) = self.formula(&e.args[0])?;
                let (b, sb) = self.formula(&e.args[1])?;
                let f = match op {
                    BinOp::Iff => a.iff(b),
                    BinOp::Implies => a.implies(b),
                    BinOp::Or => a.or(b),
                    _ => a.and(b),
                };
                node(f, vec![sa, sb])
            }
            Kind::Bin(op @ (BinOp::Eq | BinOp::Le | BinOp::Lt)) => {
                let sort = match self.cat(&e.args[0])? {
                    Cat::Term(s) => s,
                    Cat::Formula => return Err(self.mismatch(&e.args[0], Cat::Term(Sort::Num))),
                };
                match sort {
                    Sort::Num => {
                        let (a, sa) = self.num(&e.args[0])?;
                        let (b, sb) = self.num(&e.args[1])?;
                        let f = match op {
                            BinOp::Eq => Formula::Eq(a, b),
                            BinOp::Le => Formula::Le(a, b),
                            _ => Formula::Lt(a, b),
                        };
                        node(f, vec![sa, sb])
                    }
                    Sort::Str => {
                        let (a, sa) = self.string(&e.args[0])?;
                        let (b, sb) = self.string(&e.args[1])?;
                        let f = match op {
                            BinOp::Eq => Formula::StrEq(a, b),
                            BinOp::Le => Formula::StrLe(a, b),
                            _ => Formula::StrLt(a, b),
                        };
                        node(f, vec![sa, sb])
                    }
                }
            }
            Kind::Apply => {
                let (x, sx) = self.string(&e.args[0])?;
                let (t, st) = self.num(&e.args[1])?;
                node(Formula::Member(x, t), vec![sx, st])
            }
            Kind::Quant(kind, raw) => {
                let mut binders = Vec::new();
                let mut kids = Vec::new();
                let mut bound_exprs = e.args.iter();
                for b in raw {
                    let Some(sort) = sort_of_name(&b.name).filter(|&s| is_valid_var_name(&b.name, s)) else {
                        return Err(sort_err(b.span, format!("`{}` cannot be bound", b.name)));
                    };
                    let bound = match b.strict {
                        Some(strict) => {
                            let (term, st) = self.num(bound_exprs.next().expect("bound term"))?;
                            kids.push(st);
                            Some(Bound { strict, term })
                        }
                        None => None,
                    };
                    binders.push(Binder { var: Var { sort, name: b.name.clone() }, bound });
                }
                let (body, sb) = self.formula(bound_exprs.next().expect("quantifier body"))?;
                kids.push(sb);
                node(Formula::Quant(Box::new(Quant { kind: *kind, binders, body })), kids)
            }
            Kind::Fix(name) => {
                let Some(def) = self.defs.get(name) else {
                    return Err(sort_err(e.span, format!("unknown definition `{name}`")));
                };
                if def.index_param().is_none() || def.state_param().is_none() {
                    return Err(sort_err(
                        e.span,
                        format!("`{name}` needs a number and a string parameter to define an operator"),
                    ));
                }
                if e.args.len() != 3 && e.args.len() != 4 {
                    return Err(sort_err(e.span, format!("`P[{name}]` takes 3 or 4 arguments")));
                }
                let (index, s0) = self.num(&e.args[0])?;
                let (width, s1) = self.num(&e.args[1])?;
                let (counter, s2) = self.string(&e.args[2])?;
                let mut kids = vec![s0, s1, s2];
                let start = match e.args.get(3) {
                    Some(a) => {
                        let (s, ss) = self.string(a)?;
                        kids.push(ss);
                        Some(s)
                    }
                    None => None,
                };
                node(Formula::Fix(Box::new(FixAtom { def: def.clone(), index, width, counter, start })), kids)
            }
            Kind::Call(name) if self.cat(e)? == Cat::Formula => {
                let Some(def) = self.defs.get(name) else {
                    return Err(sort_err(e.span, format!("unknown definition `{name}`")));
                };
                self.arity(e, name, def.params.len())?;
                let mut subst = Subst::new();
                for (p, a) in def.params.iter().zip(&e.args) {
                    subst = match p.sort {
                        Sort::Num => subst.num(&p.name, self.num(a)?.0),
                        Sort::Str => subst.str(&p.name, self.string(a)?.0),
                    };
                }
                let f = substitute(&def.body, &subst);
                let spans = SpanTree::uniform(NodeRef::Formula(&f), e.span);
                Ok((f, spans))
            }
            _ => Err(self.mismatch(e, Cat::Formula)),
        }
    }

    fn num(&self, e: &Expr) -> Result<(NumTerm, SpanTree), SyntaxError> {
        let node = |t: NumTerm, kids: Vec<SpanTree>| Ok((t, SpanTree { span: e.span, children: kids }));
        if self.cat(e)? != Cat::Term(Sort::Num) {
            return Err(self.mismatch(e, Cat::Term(Sort::Num)));
        }
        match &e.kind {
            Kind::Ident(name) => {
                if !is_valid_var_name(name, Sort::Num) {
                    return Err(sort_err(e.span, format!("`{name}` is reserved")));
                }
                node(NumTerm::Var(name.clone()), vec![])
            }
            Kind::Num(n) => node(NumTerm::Lit(n.clone()), vec![]),
            Kind::Bin(op) => {
                let (a, sa) = self.num(&e.args[0])?;
                let (b, sb) = self.num(&e.args[1])?;
                let t = match op {
                    BinOp::Add => a + b,
                    BinOp::Mul => a * b,
                    _ => a.monus(b),
                };
                node(t, vec![sa, sb])
            }
            Kind::Pair => {
                let (a, sa) = self.num(&e.args[0])?;
                let (b, sb) = self.num(&e.args[1])?;
                node(a.pair(b), vec![sa, sb])
            }
            Kind::Len => match self.cat(&e.args[0])? {
                Cat::Term(Sort::Str) => {
                    let (x, sx) = self.string(&e.args[0])?;
                    node(x.len(), vec![sx])
                }
                _ => {
                    let (a, sa) = self.num(&e.args[0])?;
                    node(a.bin_len(), vec![sa])
                }
            },
            Kind::Call(name) => {
                self.arity(e, name, 2)?;
                match name.as_str() {
                    "seq" => {
                        let (z, sz) = self.string(&e.args[0])?;
                        let (t, st) = self.num(&e.args[1])?;
                        node(NumTerm::SeqElem(Box::new(z), Box::new(t)), vec![sz, st])
                    }
                    "exp" => {
                        let (a, sa) = self.num(&e.args[0])?;
                        let (b, sb) = self.num(&e.args[1])?;
                        node(NumTerm::Exp(Box::new(a), Box::new(b)), vec![sa, sb])
                    }
                    _ => {
                        let (t, st) = self.num(&e.args[0])?;
                        let (x, sx) = self.string(&e.args[1])?;
                        let t = if name == "val" {
                            NumTerm::Val(Box::new(t), Box::new(x))
                        } else {
                            NumTerm::NumOnes(Box::new(t), Box::new(x))
                        };
                        node(t, vec![st, sx])
                    }
                }
            }
            _ => unreachable!("category checked above"),
        }
    }

    fn string(&self, e: &Expr) -> Result<(StrTerm, SpanTree), SyntaxError> {
        let node = |t: StrTerm, kids: Vec<SpanTree>| Ok((t, SpanTree { span: e.span, children: kids }));
        if self.cat(e)? != Cat::Term(Sort::Str) {
            return Err(self.mismatch(e, Cat::Term(Sort::Str)));
        }
        match &e.kind {
            Kind::Ident(name) => {
                if !is_valid_var_name(name, Sort::Str) {
                    return Err(sort_err(e.span, format!("`{name}` is reserved")));
                }
                node(StrTerm::Var(name.clone()), vec![])
            }
            Kind::Bits(bits) => node(StrTerm::Lit(bits.clone()), vec![]),
            Kind::Bin(op) => {
                let (x, sx) = self.string(&e.args[0])?;
                let (y, sy) = self.string(&e.args[1])?;
                let t = if *op == BinOp::Add { StrTerm::Add(Box::new(x), Box::new(y)) } else { StrTerm::Sub(Box::new(x), Box::new(y)) };
                node(t, vec![sx, sy])
            }
            Kind::Pair => {
                let (x, sx) = self.string(&e.args[0])?;
                let (y, sy) = self.string(&e.args[1])?;
                node(StrTerm::Pair(Box::new(x), Box::new(y)), vec![sx, sy])
            }
            Kind::Index => {
                let (x, sx) = self.string(&e.args[0])?;
                let (t, st) = self.num(&e.args[1])?;
                node(StrTerm::Component(Box::new(x), Box::new(t)), vec![sx, st])
            }
            Kind::Call(name) => match name.as_str() {
                "S" | "P" => {
                    self.arity(e, name, 1)?;
                    let (x, sx) = self.string(&e.args[0])?;
                    node(if name == "S" { StrTerm::Succ(Box::new(x)) } else { StrTerm::Pred(Box::new(x)) }, vec![sx])
                }
                "One" => {
                    self.arity(e, name, 1)?;
                    let (t, st) = self.num(&e.args[0])?;
                    node(StrTerm::One(Box::new(t)), vec![st])
                }
                "Last" => {
                    self.arity(e, name, 2)?;
                    let (t, st) = self.num(&e.args[0])?;
                    let (x, sx) = self.string(&e.args[1])?;
                    node(StrTerm::Last(Box::new(t), Box::new(x)), vec![st, sx])
                }
                _ => {
                    self.arity(e, name, 2)?;
                    let (x, sx) = self.string(&e.args[0])?;
                    let (t, st) = self.num(&e.args[1])?;
                    node(StrTerm::Compl(Box::new(x), Box::new(t)), vec![sx, st])
                }
            },
            _ => unreachable!("category checked above"),
        }
    }
}

pub(super) fn formula_with(src: &str, defs: &Defs) -> Result<(Formula, SpanTree), SyntaxError> {
    let mut p = Parser::new(src)?;
    let e = p.expr(0)?;
    p.at_eof()?;
    Checker { defs }.formula(&e)
}

pub(super) fn num_term(src: &str) -> Result<NumTerm, SyntaxError> {
    let defs = Defs::default();
    let mut p = Parser::new(src)?;
    let e = p.expr(BP_ADD)?;
    p.at_eof()?;
    Ok(Checker { defs: &defs }.num(&e)?.0)
}

pub(super) fn str_term(src: &str) -> Result<StrTerm, SyntaxError> {
    let defs = Defs::default();
    let mut p = Parser::new(src)?;
    let e = p.expr(BP_ADD)?;
    p.at_eof()?;
    Ok(Checker { defs: &defs }.string(&e)?.0)
}

/// `def name(params) := body ;` items, each seeing the ones before it.
pub(super) fn program(src: &str, mut defs: Defs) -> Result<Program, SyntaxError> {
    let mut p = Parser::new(src)?;
    let mut program = Program::default();
    while *p.peek() != Tok::Eof {
        let start = p.span();
        if *p.peek() != Tok::Ident("def".into()) {
            return Err(p.error(vec!["`def`".into(), "end of input".into()]).into());
        }
        p.bump();
        let (name, name_span) = p.ident()?;
        if sort_of_name(&name) != Some(Sort::Num) || KEYWORDS.contains(&name.as_str()) || FUNCTIONS.contains(&name.as_str())
        {
            return Err(sort_err(name_span, format!("definition name `{name}` must be a lowercase, unreserved identifier")));
        }
        p.expect(Tok::LParen)?;
        let mut params = Vec::new();
        if *p.peek() != Tok::RParen {
            loop {
                let (pname, pspan) = p.ident()?;
                let Some(sort) = sort_of_name(&pname).filter(|&s| is_valid_var_name(&pname, s)) else {
                    return Err(sort_err(pspan, format!("`{pname}` cannot be a parameter")));
                };
                let var = Var { sort, name: pname };
                if params.contains(&var) {
                    return Err(sort_err(pspan, format!("duplicate parameter `{}`", var.name)));
                }
                params.push(var);
                if *p.peek() == Tok::Comma {
                    p.bump();
                } else {
                    break;
                }
            }
        }
        p.expect(Tok::RParen)?;
        p.expect(Tok::Define)?;
        let e = p.expr(0)?;
        let end = p.expect(Tok::Semi)?;
        let (body, spans) = Checker { defs: &defs }.formula(&e)?;
        let def = Arc::new(Definition { name: name.clone(), params, body });
        program.items.push((def.clone(), SpanTree { span: start.to(end), children: vec![spans] }));
        defs.insert(def);
    }
    program.defs = defs;
    Ok(program)
}
