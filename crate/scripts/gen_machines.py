#!/usr/bin/env python3
"""Writes crates/core/machines/*.json and checks every machine against a
plain Python oracle on all inputs of length <= 8.

Tape convention: cell j holds bit j of the input (least significant first);
the output is read the same way up to the first non-bit symbol.
"""
import itertools
import json
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "machines"


def machine(name, description, states, start, final, alphabet, rules, kind, poly):
    return {
        "name": name,
        "description": description,
        "states": states,
        "start": start,
        "final": final,
        "alphabet": alphabet,
        "transitions": [
            {"state": s, "read": r, "next": n, "write": w, "move": m} for (s, r, n, w, m) in rules
        ],
        "bound": {"kind": kind, "poly": poly},
    }


def copy():
    return machine("copy", "Halts immediately; the output is the input.",
                   ["halt"], "halt", "halt", ["_", "0", "1"], [], "time", [1, 1])


def inc():
    rules = [
        ("carry", "1", "carry", "0", "R"),
        ("carry", "0", "done", "1", "S"),
        ("carry", "_", "done", "1", "S"),
    ]
    return machine("inc", "Binary successor.", ["carry", "done"], "carry", "done",
                   ["_", "0", "1"], rules, "time", [2, 1])


def palindrome():
    # Cell 0 is marked y once consumed, later cells x. The answer is
    # written over the y.
    rules = [
        ("start", "0", "r0", "y", "R"), ("start", "1", "r1", "y", "R"), ("start", "_", "done", "1", "S"),
        ("q0", "0", "r0", "x", "R"), ("q0", "1", "r1", "x", "R"),
        ("q0", "x", "acc", "x", "L"), ("q0", "_", "acc", "_", "L"),
    ]
    for v in "01":
        rules += [
            (f"r{v}", "0", f"r{v}", "0", "R"), (f"r{v}", "1", f"r{v}", "1", "R"),
            (f"r{v}", "x", f"c{v}", "x", "L"), (f"r{v}", "_", f"c{v}", "_", "L"),
            (f"c{v}", v, "back", "x", "L"), (f"c{v}", "10"[int(v)], "rej", "x", "L"),
            (f"c{v}", "x", "acc", "x", "L"), (f"c{v}", "y", "acc", "y", "S"),
        ]
    rules += [
        ("back", "0", "back", "0", "L"), ("back", "1", "back", "1", "L"),
        ("back", "x", "q0", "x", "R"), ("back", "y", "q0", "y", "R"),
    ]
    # Rejecting erases the unread middle on the way home.
    for s, v in (("acc", "1"), ("rej", "0")):
        rules += [(s, a, s, "x", "L") for a in "01x"] + [(s, "y", "done", v, "S")]
    states = ["start", "q0", "r0", "r1", "c0", "c1", "back", "acc", "rej", "done"]
    return machine("palindrome", "Outputs 1 if the input's bits read the same both ways, else 0.",
                   states, "start", "done", ["_", "0", "1", "x", "y"], rules, "time", [3, 1, 1])


def counter():
    # Cell 0 carries a marker (a = 0, b = 1) so the head can find it.
    rules = [
        ("init", "0", "zero", "a", "R"), ("init", "1", "zero", "a", "R"), ("init", "_", "done", "1", "S"),
        ("zero", "0", "zero", "0", "R"), ("zero", "1", "zero", "0", "R"), ("zero", "_", "ret", "_", "L"),
        ("ret", "0", "ret", "0", "L"), ("ret", "1", "ret", "1", "L"),
        ("ret", "a", "inc", "a", "S"), ("ret", "b", "inc", "b", "S"),
        ("inc", "a", "ret", "b", "S"), ("inc", "b", "inc", "a", "R"),
        ("inc", "0", "ret", "1", "L"), ("inc", "1", "inc", "0", "R"),
        ("inc", "_", "fin", "1", "L"),
        ("fin", "0", "fin", "0", "L"), ("fin", "a", "done", "0", "S"),
    ]
    return machine("counter", "Counts from 0 to 2^n in n cells and outputs 2^n.",
                   ["init", "zero", "ret", "inc", "fin", "done"], "init", "done",
                   ["_", "0", "1", "a", "b"], rules, "space", [2, 1])


OPS = {"or": lambda a, b: a | b, "and": lambda a, b: a & b}


def qbf():
    # Round r combines consecutive live cells pairwise with OR (r even) or
    # AND (r odd). The pair result goes to the left cell as pending (p0/p1),
    # the right cell dies (d). A lone trailing cell passes through. Cell 0
    # carries an h marker. Pending cells revert on the sweep home.
    other = {"or": "and", "and": "or"}
    rules = [("init", "0", "s1_or_n", "h0", "S"), ("init", "1", "s1_or_n", "h1", "S"),
             ("init", "_", "done", "0", "S")]
    live = {"0": 0, "1": 1, "h0": 0, "h1": 1}
    for op in OPS:
        for paired in "ny":
            s1 = f"s1_{op}_{paired}"
            rules += [(s1, "d", s1, "d", "R"), (s1, "p0", s1, "p0", "R"), (s1, "p1", s1, "p1", "R")]
            for sym, v in live.items():
                rules.append((s1, sym, f"s2_{op}_{paired}_{v}", sym, "R"))
            if paired == "n":
                rules.append((s1, "_", "w0", "_", "L"))
            else:
                rules.append((s1, "_", f"home_{other[op]}", "_", "L"))
            for v in (0, 1):
                s2 = f"s2_{op}_{paired}_{v}"
                rules.append((s2, "d", s2, "d", "R"))
                for sym, w in live.items():
                    if not sym.startswith("h"):
                        rules.append((s2, sym, f"back_{op}_{OPS[op](v, w)}", "d", "L"))
                if paired == "n":
                    rules.append((s2, "_", f"w{v}", "_", "L"))
                else:
                    rules.append((s2, "_", f"home_{other[op]}", "_", "L"))
        for u in (0, 1):
            b = f"back_{op}_{u}"
            rules += [(b, "d", b, "d", "L"), (b, "0", f"s1_{op}_y", f"p{u}", "R"),
                      (b, "1", f"s1_{op}_y", f"p{u}", "R"),
                      (b, "h0", f"s1_{op}_y", f"hp{u}", "R"), (b, "h1", f"s1_{op}_y", f"hp{u}", "R")]
        h = f"home_{op}"
        rules += [(h, "d", h, "d", "L"), (h, "0", h, "0", "L"), (h, "1", h, "1", "L"),
                  (h, "p0", h, "0", "L"), (h, "p1", h, "1", "L"),
                  (h, "h0", f"s1_{op}_n", "h0", "S"), (h, "h1", f"s1_{op}_n", "h1", "S"),
                  (h, "hp0", f"s1_{op}_n", "h0", "S"), (h, "hp1", f"s1_{op}_n", "h1", "S")]
    for v in (0, 1):
        w = f"w{v}"
        rules += [(w, "d", w, "d", "L"), (w, "h0", "done", str(v), "S"), (w, "h1", "done", str(v), "S")]
    states = []
    for r in rules:
        for s in (r[0], r[2]):
            if s not in states:
                states.append(s)
    return machine("qbf", "Evaluates the quantified formula whose matrix has the input as its truth table, "
                   "with an existential quantifier on the lowest variable and alternating upward.",
                   states, "init", "done", ["_", "0", "1", "d", "p0", "p1", "h0", "h1", "hp0", "hp1"],
                   rules, "space", [2, 1])


def simulate(m, bits, poly_cells, time_limit=None):
    delta = {(t["state"], t["read"]): t for t in m["transitions"]}
    tape = [str(b) for b in bits] + ["_"] * (poly_cells - len(bits))
    state, head, steps = m["start"], 0, 0
    while state != m["final"]:
        t = delta[(state, tape[head])]
        tape[head] = t["write"]
        state = t["next"]
        if t["move"] == "L":
            head = max(head - 1, 0)
        elif t["move"] == "R":
            head += 1
            assert head < poly_cells, "ran off the tape"
        steps += 1
        assert time_limit is None or steps <= time_limit, "time bound exceeded"
    out = []
    for s in tape:
        if s not in "01":
            break
        out.append(int(s))
    return out, steps


def canonical(bits):
    while bits and bits[-1] == 0:
        bits = bits[:-1]
    return bits


def qbf_oracle(bits):
    if not bits:
        return [0]
    level, r = list(bits), 0
    while len(level) > 1:
        op = OPS["or" if r % 2 == 0 else "and"]
        level = [op(level[j], level[j + 1]) if j + 1 < len(level) else level[j]
                 for j in range(0, len(level), 2)]
        r += 1
    return level


ORACLES = {
    "copy": lambda b: b,
    "inc": lambda b: [int(c) for c in reversed(bin(int("".join(map(str, reversed(b))) or "0", 2) + 1)[2:])],
    "palindrome": lambda b: [1 if b == b[::-1] else 0],
    "counter": lambda b: [0] * len(b) + [1],
    "qbf": qbf_oracle,
}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for build in (copy, inc, palindrome, counter, qbf):
        m = build()
        poly = m["bound"]["poly"]
        worst = 0
        for n in range(0, 9):
            cells = sum(c * n ** k for k, c in enumerate(poly))
            for bits in itertools.product((0, 1), repeat=n):
                bits = list(bits)
                if bits and bits[-1] == 0:
                    continue  # not canonical
                limit = cells if m["bound"]["kind"] == "time" else None
                out, steps = simulate(m, bits, cells, limit)
                assert canonical(out) == canonical(ORACLES[m["name"]](bits)), (m["name"], bits, out)
                worst = max(worst, steps)
        (OUT / f"{m['name']}.json").write_text(json.dumps(m, indent=2) + "\n")
        print(f"{m['name']}: {len(m['states'])} states, {len(m['transitions'])} transitions, "
              f"at most {worst} steps for n <= 8")


if __name__ == "__main__":
    main()
