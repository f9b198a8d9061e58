use std::fmt;

use crate::syntax::NodeRef;

/// A byte range of the source, with the 1-based line and column of its start.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    /// The smallest span covering both.
    pub fn to(self, other: SourceSpan) -> SourceSpan {
        if other.end <= self.start {
            return other.to(self);
        }
        SourceSpan { start: self.start, end: other.end.max(self.end), line: self.line, column: self.column }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Spans of an AST, shaped like the tree itself: `children[k]` belongs to the
/// `k`-th entry of [`NodeRef::children`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanTree {
    pub span: SourceSpan,
    pub children: Vec<SpanTree>,
}

impl SpanTree {
    pub fn leaf(span: SourceSpan) -> Self {
        SpanTree { span, children: Vec::new() }
    }

    /// A tree giving every node of `node` the same span; used for text that
    /// was produced by expanding a definition.
    pub fn uniform(node: NodeRef<'_>, span: SourceSpan) -> Self {
        SpanTree { span, children: node.children().into_iter().map(|c| SpanTree::uniform(c, span)).collect() }
    }

    /// Follow a path of child indices.
    pub fn get(&self, path: &[usize]) -> Option<&SpanTree> {
        match path.split_first() {
            None => Some(self),
            Some((&k, rest)) => self.children.get(k)?.get(rest),
        }
    }

    /// Whether the tree has the shape of `node`.
    pub fn matches(&self, node: NodeRef<'_>) -> bool {
        let kids = node.children();
        kids.len() == self.children.len() && kids.into_iter().zip(&self.children).all(|(n, s)| s.matches(n))
    }

    /// Whether every child span lies within its parent's span.
    pub fn is_nested(&self) -> bool {
        self.span.start <= self.span.end
            && self
                .children
                .iter()
                .all(|c| self.span.start <= c.span.start && c.span.end <= self.span.end && c.is_nested())
    }
}
