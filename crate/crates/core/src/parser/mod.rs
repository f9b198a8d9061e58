//! Concrete syntax: parsing and printing. The grammar is in `docs/grammar.ebnf`.

mod lexer;
mod parse;
mod print;
mod span;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

pub use lexer::{KEYWORDS, FUNCTIONS, PUNCTUATION};
pub use print::{print_definition, print_formula, print_num, print_str};
pub use span::{SourceSpan, SpanTree};

use crate::syntax::{Definition, Formula, NumTerm, StrTerm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    /// Tokens that would have been accepted at `span`.
    pub expected: Vec<String>,
}

impl ParseError {
    pub(crate) fn new(span: SourceSpan, message: String, expected: Vec<String>) -> Self {
        ParseError { span, message, expected }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)?;
        match self.expected.as_slice() {
            [] => Ok(()),
            [one] => write!(f, ", expected {one}"),
            many => write!(f, ", expected one of {}", many.join(", ")),
        }
    }
}

/// A well-formed phrase used at the wrong sort or syntactic category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortError {
    pub span: SourceSpan,
    pub message: String,
}

impl fmt::Display for SortError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SyntaxError {
    Parse(ParseError),
    Sort(SortError),
}

impl SyntaxError {
    pub fn span(&self) -> SourceSpan {
        match self {
            SyntaxError::Parse(e) => e.span,
            SyntaxError::Sort(e) => e.span,
        }
    }
}

impl From<ParseError> for SyntaxError {
    fn from(e: ParseError) -> Self {
        SyntaxError::Parse(e)
    }
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SyntaxError::Parse(e) => write!(f, "parse error at {e}"),
            SyntaxError::Sort(e) => write!(f, "sort error at {e}"),
        }
    }
}

impl std::error::Error for SyntaxError {}

/// Named definitions visible to fixed-point atoms and definition calls.
#[derive(Clone, Debug, Default)]
pub struct Defs(BTreeMap<String, Arc<Definition>>);

impl Defs {
    pub fn new() -> Self {
        Defs::default()
    }

    pub fn get(&self, name: &str) -> Option<&Arc<Definition>> {
        self.0.get(name)
    }

    /// Adds or replaces a definition.
    pub fn insert(&mut self, def: Arc<Definition>) {
        self.0.insert(def.name.clone(), def);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<Definition>> {
        self.0.values()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A parsed sequence of definitions.
#[derive(Clone, Debug, Default)]
pub struct Program {
    /// Definitions in source order, each with a span tree whose single child
    /// covers the body.
    pub items: Vec<(Arc<Definition>, SpanTree)>,
    /// Every definition in scope after the last item.
    pub defs: Defs,
}

impl Program {
    pub fn get(&self, name: &str) -> Option<&Arc<Definition>> {
        self.defs.get(name)
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    parse_formula_with(text, &Defs::default())
}

/// Parses with `defs` in scope for `P[name](..)` atoms and `name(..)` calls.
/// A call expands to the definition body with the arguments substituted.
pub fn parse_formula_with(text: &str, defs: &Defs) -> Result<Formula, SyntaxError> {
    Ok(parse::formula_with(text, defs)?.0)
}

pub fn parse_formula_spanned(text: &str, defs: &Defs) -> Result<(Formula, SpanTree), SyntaxError> {
    parse::formula_with(text, defs)
}

pub fn parse_num_term(text: &str) -> Result<NumTerm, SyntaxError> {
    parse::num_term(text)
}

pub fn parse_str_term(text: &str) -> Result<StrTerm, SyntaxError> {
    parse::str_term(text)
}

pub fn parse_program(text: &str) -> Result<Program, SyntaxError> {
    parse::program(text, Defs::default())
}

/// Like [`parse_program`], with `defs` already in scope.
pub fn parse_program_with(text: &str, defs: &Defs) -> Result<Program, SyntaxError> {
    parse::program(text, defs.clone())
}

#[cfg(test)]
mod tests;
