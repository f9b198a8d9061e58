use super::*;
use crate::syntax::{check_bound_independence, classify, FormulaClass, NumTerm as N, StrTerm as S};
use crate::syntax::{Formula, NodeRef, Quantifier};

fn roundtrip(text: &str) -> Formula {
    let f = parse_formula(text).unwrap_or_else(|e| panic!("{text}: {e}"));
    let printed = print_formula(&f);
    assert_eq!(parse_formula(&printed).unwrap(), f, "{text} printed as {printed}");
    f
}

#[test]
fn conjunction() {
    let f = roundtrip("i < x && X(i)");
    assert_eq!(f, N::var("i").lt(N::var("x")).and(S::var("X").at(N::var("i"))));
    assert_eq!(print_formula(&S::var("X").at(N::var("i")).and(N::var("i").lt(N::var("x")))), "X(i) && i < x");
}

#[test]
fn fixed_point_atom_in_quantifiers() {
    let prog = parse_program("def phi(i, Y) := Y(i) || i = 0;").unwrap();
    let f = parse_formula_with("(exists Y <= x+1) (forall i < x) P[phi](i, x, S(Y))", &prog.defs).unwrap();
    let Formula::Quant(q) = &f else { panic!() };
    assert_eq!(q.kind, Quantifier::Exists);
    let Formula::Quant(inner) = &q.body else { panic!() };
    assert!(matches!(inner.body, Formula::Fix(_)));
    assert_eq!(classify(&f), FormulaClass::SigmaB(1));
    assert_eq!(print_formula(&f), "(exists Y <= x + 1) (forall i < x) P[phi](i, x, S(Y))");
    assert_eq!(parse_formula_with(&print_formula(&f), &prog.defs).unwrap(), f);
    assert!(parse_formula("P[phi](i, x, X)").is_err());
}

#[test]
fn self_referential_bound_parses() {
    let f = parse_formula("(exists X <= |X|) X(0)").unwrap();
    assert!(check_bound_independence(&f).is_err());
}

#[test]
fn precedence() {
    let a = || S::var("A").at(N::lit(0));
    let b = || S::var("B").at(N::lit(0));
    let c = || S::var("C").at(N::lit(0));
    assert_eq!(roundtrip("A(0) || B(0) && C(0)"), a().or(b().and(c())));
    assert_eq!(roundtrip("A(0) -> B(0) -> C(0)"), a().implies(b().implies(c())));
    assert_eq!(roundtrip("A(0) <-> B(0) <-> C(0)"), a().iff(b().iff(c())));
    assert_eq!(roundtrip("A(0) && B(0) && C(0)"), a().and(b()).and(c()));
    assert_eq!(roundtrip("!A(0) && B(0)"), a().not().and(b()));
    assert_eq!(roundtrip("!x = y"), N::var("x").eq(N::var("y")).not());
    assert_eq!(roundtrip("x + y * z = 2"), (N::var("x") + N::var("y") * N::var("z")).eq(N::lit(2)));
    assert_eq!(roundtrip("x - y - z = 0"), N::var("x").monus(N::var("y")).monus(N::var("z")).eq(N::lit(0)));
    let q = roundtrip("(exists x <= 3) A(x) && B(0)");
    assert!(matches!(q, Formula::And(..)));
}

#[test]
fn printing_parenthesizes_where_needed() {
    let a = || S::var("A").at(N::lit(0));
    let b = || S::var("B").at(N::lit(0));
    assert_eq!(print_formula(&a().and(b().or(a()))), "A(0) && (B(0) || A(0))");
    assert_eq!(print_formula(&a().implies(b()).implies(a())), "(A(0) -> B(0)) -> A(0)");
    assert_eq!(print_formula(&N::var("i").lt(N::var("x")).not()), "!(i < x)");
    let q = Formula::exists_le("y", N::var("x"), a().and(b()));
    assert_eq!(print_formula(&q), "(exists y <= x) (A(0) && B(0))");
    let nested = Formula::exists_le("y", N::lit(1), Formula::forall_lt("z", N::lit(2), a()));
    assert_eq!(print_formula(&nested), "(exists y <= 1) (forall z < 2) A(0)");
    assert_eq!(print_formula(&(N::var("x") * (N::var("y") + N::lit(1))).eq(N::lit(0))), "x * (y + 1) = 0");
}

#[test]
fn nested_lengths_keep_bars_apart() {
    let t = S::var("X").len().bin_len();
    assert_eq!(print_num(&t), "| |X| |");
    let f = roundtrip("| |X| + 1| = |1 + |Y| |");
    assert_eq!(print_formula(&f), "| |X| + 1| = |1 + |Y| |");
    assert!(parse_formula("||X|| = 0").is_err());
}

#[test]
fn all_term_forms() {
    for text in [
        "<x, y> = 8",
        "<X, Y>(3)",
        "Z[x](i)",
        "seq(Z, x) = |Z|",
        "val(3, X) = exp(2, 9)",
        "numones(x, X) <= x",
        "S(P(X)) = X",
        "One(3) = 0b111",
        "Last(2, Y) = Compl(Y, 3)",
        "X + Y - Z < S(0b0)",
        "(X + Y)(i) <-> X(i)",
        "0b101(2)",
        "true && !false",
        "(exists X <= t, Y < |X| + 1, z) X <= Y",
    ] {
        roundtrip(text);
    }
}

#[test]
fn string_literals() {
    assert_eq!(parse_str_term("0b101").unwrap(), S::Lit(crate::BitStr::from_u64(5)));
    assert_eq!(parse_str_term("0b0").unwrap(), S::Lit(crate::BitStr::empty()));
    assert_eq!(print_str(&S::Lit(crate::BitStr::empty())), "0b0");
}

#[test]
fn sort_errors() {
    for text in ["X + 1 = 2", "i < X", "x(0)", "X(Y)", "X && Y(0)", "|X| * Y = 0", "X", "x + 1", "S(x) = X"] {
        match parse_formula(text) {
            Err(SyntaxError::Sort(_)) => {}
            other => panic!("{text}: {other:?}"),
        }
    }
}

#[test]
fn parse_errors_report_span_and_expected() {
    let Err(SyntaxError::Parse(e)) = parse_formula("X(i) && ") else { panic!() };
    assert_eq!((e.span.line, e.span.column), (1, 9));
    assert!(e.expected.contains(&"identifier".to_string()));

    let Err(SyntaxError::Parse(e)) = parse_formula("(exists x <= 3 X(x)") else { panic!() };
    assert_eq!(e.span.column, 16);
    assert!(e.expected.contains(&"`)`".to_string()));

    assert!(matches!(parse_formula("x < y < z"), Err(SyntaxError::Parse(_))));
    assert!(matches!(parse_formula("X(0) X(1)"), Err(SyntaxError::Parse(_))));
    assert!(matches!(parse_formula("(exists def <= 1) true"), Err(SyntaxError::Sort(_))));
    let deep = "!".repeat(1000) + "true";
    assert!(matches!(parse_formula(&deep), Err(SyntaxError::Parse(_))));
}

#[test]
fn spans_follow_the_tree() {
    let text = "(exists y <= x + 1) X(y) && !(i < |X|)";
    let (f, spans) = parse_formula_spanned(text, &Defs::new()).unwrap();
    assert!(spans.matches(NodeRef::Formula(&f)));
    assert!(spans.is_nested());
    let at = |path: &[usize]| {
        let s = spans.get(path).unwrap().span;
        &text[s.start..s.end]
    };
    assert_eq!(at(&[]), text);
    assert_eq!(at(&[0]), "(exists y <= x + 1) X(y)");
    assert_eq!(at(&[0, 0]), "x + 1");
    assert_eq!(at(&[0, 1, 0]), "X");
    assert_eq!(at(&[1, 0, 1]), "|X|");
}

#[test]
fn programs_and_calls() {
    let src = "
        // carry into position i
        def carry(i, X, Y) := (exists k < i) (X(k) && Y(k) && (forall j < i) (k < j -> X(j) || Y(j)));
        def sum(i, X, Y) := i < |X| + |Y| && (X(i) <-> !(Y(i) <-> carry(i, X, Y)));
    ";
    let prog = parse_program(src).unwrap();
    assert_eq!(prog.items.len(), 2);
    let sum = prog.get("sum").unwrap();
    assert_eq!(sum.params.len(), 3);
    // The call expanded in place.
    assert!(print_formula(&sum.body).contains("(exists k < i)"));
    let printed: String = prog.items.iter().map(|(d, _)| print_definition(d) + "\n").collect();
    let again = parse_program(&printed).unwrap();
    for ((a, _), (b, _)) in prog.items.iter().zip(&again.items) {
        assert_eq!(a, b);
    }

    // Capture is avoided when an argument mentions a bound name.
    let f = parse_formula_with("carry(k, A, B)", &prog.defs).unwrap();
    assert!(print_formula(&f).starts_with("(exists k_1 < k)"));

    assert!(matches!(parse_program("def Phi(i) := true;"), Err(SyntaxError::Sort(_))));
    assert!(matches!(parse_program("def f(i, i) := true;"), Err(SyntaxError::Sort(_))));
    assert!(matches!(parse_program("def f(i) := true"), Err(SyntaxError::Parse(_))));
    assert!(matches!(parse_formula_with("carry(i, X)", &prog.defs), Err(SyntaxError::Sort(_))));
}
