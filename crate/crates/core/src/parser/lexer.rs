//! Tokenizer. Operators are matched by maximal munch, so `||` is always
//! disjunction and nested lengths need a space: `| |X| |`.

use std::fmt;

use num_bigint::BigUint;

use super::span::SourceSpan;
use super::ParseError;
use crate::bitstr::BitStr;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(BigUint),
    Bits(BitStr),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Semi,
    Bar,
    Lt,
    Gt,
    Le,
    Eq,
    Plus,
    Minus,
    Star,
    AndAnd,
    OrOr,
    Bang,
    Arrow,
    DArrow,
    Define,
    Eof,
}

/// Every punctuation token with its spelling, longest first.
pub const PUNCTUATION: &[(&str, Tok)] = &[
    ("<->", Tok::DArrow),
    ("&&", Tok::AndAnd),
    ("||", Tok::OrOr),
    ("->", Tok::Arrow),
    ("<=", Tok::Le),
    (":=", Tok::Define),
    ("(", Tok::LParen),
    (")", Tok::RParen),
    ("[", Tok::LBrack),
    ("]", Tok::RBrack),
    (",", Tok::Comma),
    (";", Tok::Semi),
    ("|", Tok::Bar),
    ("<", Tok::Lt),
    (">", Tok::Gt),
    ("=", Tok::Eq),
    ("+", Tok::Plus),
    ("-", Tok::Minus),
    ("*", Tok::Star),
    ("!", Tok::Bang),
];

/// Reserved words of the grammar.
pub const KEYWORDS: &[&str] = &["def", "exists", "forall", "true", "false"];

/// Built-in function symbols.
pub const FUNCTIONS: &[&str] = &["S", "P", "One", "Last", "Compl", "val", "seq", "exp", "numones"];

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Num(n) => write!(f, "number `{n}`"),
            Tok::Bits(b) => write!(f, "string literal `{b}`"),
            Tok::Eof => f.write_str("end of input"),
            other => {
                let text = PUNCTUATION.iter().find(|(_, t)| t == other).map(|(s, _)| *s).unwrap_or("?");
                write!(f, "`{text}`")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    let mut line = 1;
    let mut line_start = 0;
    let span_at = |start: usize, end: usize, line: usize, line_start: usize| SourceSpan {
        start,
        end,
        line,
        column: start - line_start + 1,
    };

    'outer: while pos < bytes.len() {
        let c = bytes[pos];
        if c == b'\n' {
            pos += 1;
            line += 1;
            line_start = pos;
            continue;
        }
        if c.is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        if src[pos..].starts_with("//") {
            while pos < bytes.len() && bytes[pos] != b'\n' {
                pos += 1;
            }
            continue;
        }
        let start = pos;
        if c.is_ascii_alphabetic() || c == b'_' {
            while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                pos += 1;
            }
            out.push(Token {
                tok: Tok::Ident(src[start..pos].to_string()),
                span: span_at(start, pos, line, line_start),
            });
            continue;
        }
        if c.is_ascii_digit() {
            while pos < bytes.len() && (bytes[pos].is_ascii_alphanumeric() || bytes[pos] == b'_') {
                pos += 1;
            }
            let text = &src[start..pos];
            let span = span_at(start, pos, line, line_start);
            let tok = if text.starts_with("0b") {
                text.parse::<BitStr>().ok().map(Tok::Bits)
            } else {
                text.parse::<BigUint>().ok().map(Tok::Num)
            };
            match tok {
                Some(tok) => out.push(Token { tok, span }),
                None => {
                    return Err(ParseError::new(span, format!("malformed literal `{text}`"), vec![]));
                }
            }
            continue;
        }
        for (text, tok) in PUNCTUATION {
            if src[pos..].starts_with(text) {
                pos += text.len();
                out.push(Token { tok: tok.clone(), span: span_at(start, pos, line, line_start) });
                continue 'outer;
            }
        }
        let ch = src[pos..].chars().next().unwrap();
        let span = span_at(start, start + ch.len_utf8(), line, line_start);
        return Err(ParseError::new(span, format!("unexpected character `{ch}`"), vec![]));
    }
    out.push(Token { tok: Tok::Eof, span: span_at(pos, pos, line, line_start) });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        tokenize(src).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn maximal_munch() {
        assert_eq!(toks("a<->b"), vec![
            Tok::Ident("a".into()),
            Tok::DArrow,
            Tok::Ident("b".into()),
            Tok::Eof
        ]);
        assert_eq!(toks("||X||")[0], Tok::OrOr);
        assert_eq!(toks("| |X| |")[..4], [Tok::Bar, Tok::Bar, Tok::Ident("X".into()), Tok::Bar]);
        assert_eq!(toks("i<=x")[1], Tok::Le);
    }

    #[test]
    fn literals() {
        assert_eq!(toks("0b101 12"), vec![
            Tok::Bits(BitStr::from_u64(5)),
            Tok::Num(BigUint::from(12u32)),
            Tok::Eof
        ]);
        assert!(tokenize("0b12").is_err());
        assert!(tokenize("12ab").is_err());
    }

    #[test]
    fn positions_and_comments() {
        let t = tokenize("// note\n  X(i)").unwrap();
        assert_eq!(t[0].span, SourceSpan { start: 10, end: 11, line: 2, column: 3 });
        assert!(tokenize("x # y").unwrap_err().message.contains('#'));
    }
}
