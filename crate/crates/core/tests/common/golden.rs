//! Hand-labelled classifier cases and the definitions they use.

use bid::parser::{parse_program, Defs};
use bid::syntax::FormulaClass;
use FormulaClass::{PiB, SigmaB, Unbounded};

const DEFS: &str = "
def phi(i, Y) := Y(i) || i = 0;
def chain(i, Y) := i < |Y| + 1 && (Y(i) || i = |Y|);
def init(i, X) := X(i);
def step(i, X, Y) := Y(i + 1) || (i = 0 && X(0));
";

pub fn defs() -> Defs {
    parse_program(DEFS).unwrap().defs
}

/// Formulas in the shapes used to state the fixed-point axioms and the
/// capture constructions, each labelled by hand.
pub const GOLDEN: &[(&str, FormulaClass)] = &[
    // Base and step of the fixed-point predicate.
    ("(forall i < x) (P[phi](i, x, 0b0) <-> i < 0)", SigmaB(0)),
    ("(forall X <= x + 1) (forall i < x) (P[phi](i, x, S(X)) <-> P[phi](i, x, X) || i = 0)", PiB(1)),
    ("(forall i < x) (P[phi](i, x, S(X)) <-> P[phi](i, x, X) && i < x || i = 0)", SigmaB(0)),
    // Existence of a period.
    ("(exists U <= x + 1, V <= x + 1) (!(V = 0b0) && (forall i < x) (P[phi](i, x, U + V) <-> P[phi](i, x, U)))", SigmaB(1)),
    ("!(exists U <= x + 1, V <= x + 1) (!(V = 0b0) && (forall i < x) (P[phi](i, x, U + V) <-> P[phi](i, x, U)))", PiB(1)),
    ("(forall x) (exists U <= x + 1, V <= x + 1) (!(V = 0b0) && (forall i < x) (P[phi](i, x, U + V) <-> P[phi](i, x, U)))", Unbounded),
    // Inflationarity.
    ("(forall Y <= x) (forall i < x) (Y(i) -> Y(i) || i = 0)", PiB(1)),
    ("(forall i < x) (Y(i) -> phi(i, Y))", SigmaB(0)),
    ("(exists Y <= x) (exists i < x) (Y(i) && !chain(i, Y))", SigmaB(1)),
    // Relativized fixed points.
    ("(forall i < x) (P[phi](i, x, 0b0, Y) <-> Y(i))", SigmaB(0)),
    ("(forall Y <= x) (exists U <= x + 1, V <= x + 1) (!(V = 0b0) && (forall i < x) (P[phi](i, x, U + V, Y) <-> P[phi](i, x, U, Y)))", PiB(2)),
    ("(exists Y <= x) (forall U <= x + 1, V <= x + 1) (V = 0b0 || (exists i < x) !(P[phi](i, x, U + V, Y) <-> P[phi](i, x, U, Y)))", SigmaB(2)),
    // Operator bodies of the machine constructions.
    ("i < |Y| + q && (Y(i) || init(i, X) || |Y| <= i && step(i - |Y|, X, Last(q, Y)))", SigmaB(0)),
    ("i < q && (|Y| = 0 && init(i, X) || step(i, X, Y))", SigmaB(0)),
    ("(exists h < p) (Y(h * 3 + 2) && (forall b < 2) (Y(h * 3 + b) <-> b = 0))", SigmaB(0)),
    // Output extraction from a period.
    ("(exists U <= q * (p + 1), V <= q * (p + 1)) (!(V = 0b0) && (forall i < q * (p + 1)) (P[chain](i, q * (p + 1), U + V) <-> P[chain](i, q * (p + 1), U)) && Last(q, U) = Y)", SigmaB(1)),
    ("(exists U <= q + 1, V <= q + 1) (!(V = 0b0) && (forall i < q) (P[phi](i, q, U + V) <-> P[phi](i, q, U)) && (forall i < q) (Y(i) <-> P[phi](i, q, U)))", SigmaB(1)),
    // Defining axioms of the standard functions.
    ("i < |X| && (X(i) && (exists j < i) X(j) || !X(i) && (forall j < i) !X(j))", SigmaB(0)),
    ("i < y", SigmaB(0)),
    ("i < x && !Y(i)", SigmaB(0)),
    ("X <= Y && i < 0 || Y < X && i < |X| && (X + S(Compl(Y, |X|)))(i)", SigmaB(0)),
    ("z = (x + y) * (x + y + 1) + 2 * y", SigmaB(0)),
    // Comprehension and its negation.
    ("(exists Y <= x) (forall i < x) (Y(i) <-> X(i) && i = 0)", SigmaB(1)),
    ("(forall x) (exists Y <= x) (forall i < x) (Y(i) <-> X(i))", Unbounded),
    ("(exists i) X(i)", Unbounded),
    // Alternations and connectives.
    ("(exists X <= x) (forall Y <= x) X = Y", SigmaB(2)),
    ("(forall X <= x) (exists Y <= x) (forall Z <= x) X + Y = Z", PiB(3)),
    ("(exists X <= x) X(0) -> false", PiB(1)),
    ("(exists X <= x) X(0) && (exists Y <= y) Y(1)", SigmaB(1)),
    ("(exists X <= x) X(0) || (forall Y <= y) Y(1)", SigmaB(2)),
    ("!(forall X <= x) !X(0)", SigmaB(1)),
];

