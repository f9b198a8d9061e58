//! Configuration formulas as concrete syntax. Each machine gets its own
//! small program of helper definitions, all with `X` (the input) free.

use super::machine::{Layout, Machine, Move};
use crate::parser::{parse_program, Program};

/// Source of the per-machine program defining `init(i, X)`,
/// `conf(X, Y)`, `next(i, X, Y)` and `next_prime(i, X, Y)`.
pub(super) fn program_source(m: &Machine) -> String {
    let l: Layout = m.layout(0);
    let k = l.symbol_bits;
    let bb = l.cell_bits();
    let p = m.poly.to_source("|X|");
    let q = format!("(1 + {} + {bb} * {p})", l.state_bits);
    let state_base = format!("{bb} * {p}");
    let mut out = String::new();

    let bits_equal = |base: &str, width: usize, value: usize| -> String {
        if width == 0 {
            return "true".into();
        }
        let lits: Vec<String> = (0..width)
            .map(|b| {
                let neg = if value >> b & 1 == 1 { "" } else { "!" };
                format!("{neg}Y({base} + {b})")
            })
            .collect();
        format!("({})", lits.join(" && "))
    };
    for s in 0..m.states.len() {
        out += &format!("def st{s}(X, Y) := {};\n", bits_equal(&state_base, l.state_bits, s));
    }
    for a in 0..m.symbols.len() {
        out += &format!("def sy{a}(h, Y) := {};\n", bits_equal(&format!("h * {bb}"), k, a));
    }
    let any = |n: usize, pow: usize, f: &dyn Fn(usize) -> String| -> Option<String> {
        (n < 1 << pow).then(|| format!("({})", (0..n).map(f).collect::<Vec<_>>().join(" || ")))
    };

    let mut conf = vec![
        format!("|Y| = {q}"),
        format!("(exists h < {p}) (Y(h * {bb} + {k}) && (forall c < {p}) (Y(c * {bb} + {k}) -> c = h))"),
    ];
    conf.extend(any(m.states.len(), l.state_bits, &|s| format!("st{s}(X, Y)")));
    conf.extend(
        any(m.symbols.len(), k, &|a| format!("sy{a}(c, Y)")).map(|valid| format!("(forall c < {p}) {valid}")),
    );
    out += &format!("def conf(X, Y) := {};\n", conf.join(" && "));

    let set_bits = |base: &str, width: usize, value: usize| -> Vec<String> {
        (0..width).filter(|b| value >> b & 1 == 1).map(|b| format!("i = {base} + {b}")).collect()
    };
    let mut init = vec![format!("i = {q} - 1"), format!("i = {k}")];
    init.extend(set_bits(&state_base, l.state_bits, m.start));
    // Input symbols `0` and `1` have codes 1 and 2.
    init.push(format!("(exists c < |X|) (c < {p} && ((i = c * {bb} && !X(c)) || (i = c * {bb} + 1 && X(c))))"));
    out += &format!("def init(i, X) := i < {q} && ({});\n", init.join(" || "));

    // Grouped by state so that only one group gets past its cached state
    // test. The head position and symbol test is invariant in `i` too.
    let head_at = |h: &str| format!("Y({h} * {bb} + {k})");
    let mut transitions: Vec<_> = m.delta.iter().collect();
    transitions.sort_by_key(|(key, _)| **key);
    let mut groups: Vec<(usize, Vec<String>)> = Vec::new();
    for (&(s, a), t) in transitions {
        let room = if t.mv == Move::R { format!(" && h + 1 < {p}") } else { String::new() };
        let new_head = match t.mv {
            Move::L => "(h - 1)",
            Move::S => "h",
            Move::R => "(h + 1)",
        };
        let mut bits = set_bits(&state_base, l.state_bits, t.next);
        // Outside the head cell, symbols are copied. Conf(Y) guarantees
        // that the only old head marker lies inside the head cell.
        let mut local = vec![format!("(Y(i) && i < {state_base} && !(h * {bb} <= i && i < h * {bb} + {bb}))")];
        local.extend(set_bits(&format!("h * {bb}"), k, t.write));
        local.push(format!("i = {new_head} * {bb} + {k}"));
        bits.push(format!("(exists h < {p}) ({} && ({}))", head_at("h"), local.join(" || ")));
        let case = format!(
            "((exists h < {p}) ({} && sy{a}(h, Y){room}) && (i = {q} - 1 || {}))",
            head_at("h"),
            bits.join(" || ")
        );
        match groups.last_mut() {
            Some((g, cases)) if *g == s => cases.push(case),
            _ => groups.push((s, vec![case])),
        }
    }
    let next_body = if groups.is_empty() {
        "false".to_string()
    } else {
        let groups: Vec<String> =
            groups.iter().map(|(s, cases)| format!("(st{s}(X, Y) && ({}))", cases.join(" || "))).collect();
        format!("conf(X, Y) && ({})", groups.join(" || "))
    };
    out += &format!("def next(i, X, Y) := {next_body};\n");
    out += &format!(
        "def next_prime(i, X, Y) := (conf(X, Y) && st{}(X, Y) && i < {q} && Y(i)) || next(i, X, Y);\n",
        m.final_state
    );
    out
}

pub(super) fn program(m: &Machine) -> Program {
    let src = program_source(m);
    parse_program(&src).unwrap_or_else(|e| panic!("generated program for {} does not parse: {e}\n{src}", m.name))
}

/// The time-bounded operator body. `guard_next` = false drops the
/// `|Y| <= i` guard in front of the transition disjunct.
pub(super) fn ptime_source(m: &Machine, guard_next: bool) -> String {
    let q = q_source(m);
    let guard = if guard_next { "|Y| <= i && " } else { "" };
    format!("i < |Y| + {q} && (Y(i) || init(i, X) || ({guard}next(i - |Y|, X, Last({q}, Y))))")
}

pub(super) fn pspace_source(m: &Machine, guard_init: bool) -> String {
    let q = q_source(m);
    let init = if guard_init { "(|Y| = 0 && init(i, X))" } else { "init(i, X)" };
    format!("i < {q} && ({init} || next_prime(i, X, Y))")
}

fn q_source(m: &Machine) -> String {
    let l = m.layout(0);
    format!("(1 + {} + {} * {})", l.state_bits, l.cell_bits(), m.poly.to_source("|X|"))
}
