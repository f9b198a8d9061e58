//! Direct implementations of the defined functions and relations.
//!
//! Each function also has a defining axiom in `axioms/stdlib.bid`; the
//! [`catalog`] ties the two together so the test suites can check that they
//! agree. Numbers are arbitrary precision; strings are canonical.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::bitstr::{BitStr, HyperStr};
use crate::syntax::{Natural, Sort};

/// `<x, y> = (x+y)(x+y+1) + 2y`.
pub fn pair(x: &Natural, y: &Natural) -> Natural {
    let s = x + y;
    &s * (&s + 1u32) + 2u32 * y
}

/// [`pair`] in 64-bit arithmetic, `None` on overflow.
pub fn pair_u64(x: u64, y: u64) -> Option<u64> {
    let s = x.checked_add(y)?;
    s.checked_mul(s.checked_add(1)?)?.checked_add(y.checked_mul(2)?)
}

/// `Z^[x]`: bit `i` is `Z(<x, i>)`.
pub fn component(z: &BitStr, x: &Natural) -> BitStr {
    let Some(x) = x.to_u64() else { return BitStr::empty() };
    let len = z.len() as u64;
    let mut out = BitStr::empty();
    for i in 0.. {
        match pair_u64(x, i) {
            Some(p) if p < len => {
                if z.bit_u64(p) {
                    out.set(i as usize, true);
                }
            }
            _ => break,
        }
    }
    out
}

/// `(Z)^x`: the least `y < |Z|` with `Z(<x, y>)`, or `|Z|` if there is none.
pub fn seq_elem(z: &BitStr, x: &Natural) -> Natural {
    let len = z.len() as u64;
    if let Some(x) = x.to_u64() {
        for y in 0..len {
            match pair_u64(x, y) {
                Some(p) if p < len => {
                    if z.bit_u64(p) {
                        return Natural::from(y);
                    }
                }
                _ => break,
            }
        }
    }
    Natural::from(len)
}

/// `<X0, X1>`: bit `<k, j>` is `Xk(j)`.
pub fn string_pair(x0: &BitStr, x1: &BitStr) -> BitStr {
    let mut out = BitStr::empty();
    for (k, x) in [(0u64, x0), (1, x1)] {
        for j in x.ones() {
            let p = pair_u64(k, j as u64).expect("pair position overflow");
            out.set(p as usize, true);
        }
    }
    out
}

/// `Z^[k]` for `k` in `{0, 1}`.
pub fn string_unpair(z: &BitStr, k: u32) -> BitStr {
    component(z, &Natural::from(k))
}

/// `S(X)`.
pub fn string_succ(x: &BitStr) -> BitStr {
    x.add(&BitStr::from_u64(1))
}

/// `P(X)`, with `P(∅) = ∅`.
pub fn string_pred(x: &BitStr) -> BitStr {
    x.monus(&BitStr::from_u64(1))
}

pub fn string_add(x: &BitStr, y: &BitStr) -> BitStr {
    x.add(y)
}

/// `X < Y`.
pub fn string_less(x: &BitStr, y: &BitStr) -> bool {
    x < y
}

/// `X <= Y`, i.e. `X = Y || X < Y`.
pub fn string_le(x: &BitStr, y: &BitStr) -> bool {
    x <= y
}

/// `One(y)`: `y` ones.
pub fn one_string(y: usize) -> BitStr {
    BitStr::ones_below(y)
}

/// `Last(j, Y)`: the `j` most significant bits of `Y`.
pub fn last_bits(j: &Natural, y: &BitStr) -> BitStr {
    let len = y.len();
    match j.to_usize() {
        Some(j) if j < len => y.slice(len - j, j),
        _ => y.clone(),
    }
}

/// `Y^C_x`: the complement of `Y` below `x`.
pub fn complement(y: &BitStr, x: usize) -> BitStr {
    let ones = BitStr::ones_below(x);
    let kept = y.clip(x);
    let words = ones.words().iter().enumerate().map(|(i, w)| w & !kept.words().get(i).copied().unwrap_or(0)).collect();
    BitStr::from_words(words)
}

/// `X ∸ Y`: the difference, or `∅` when `X <= Y`.
pub fn string_sub(x: &BitStr, y: &BitStr) -> BitStr {
    x.monus(y)
}

/// `val(x, X)`: the value of the `x` most significant bits of `X`.
pub fn val(x: &Natural, xs: &BitStr) -> Natural {
    last_bits(x, xs).to_natural()
}

/// `val` by its recursion on `x`, reading bit `(|X| - 1) - k` at step `k`.
pub fn val_recursive(x: u64, xs: &BitStr) -> Natural {
    if xs.is_empty() || x == 0 {
        return Natural::zero();
    }
    let prev = val_recursive(x - 1, xs);
    let k = x - 1;
    let len = xs.len() as u64;
    if len <= k {
        prev
    } else if xs.bit_u64(len - 1 - k) {
        prev * 2u32 + 1u32
    } else {
        prev * 2u32
    }
}

/// `numones[Y](X, 𝒳)`: `Y` plus the number of members of `𝒳` below `X`,
/// counted by walking `U = ∅, S(∅), ...` up to `X`.
pub fn numones(y: &BitStr, x: &BitStr, set: &HyperStr) -> BitStr {
    let mut count = y.clone();
    let mut u = BitStr::empty();
    while u < *x {
        if set.contains(&u) {
            count = string_succ(&count);
        }
        u = string_succ(&u);
    }
    count
}

/// `numones` by its recursion on the successor structure of `X`.
pub fn numones_recursive(y: &BitStr, x: &BitStr, set: &HyperStr) -> BitStr {
    if x.is_empty() {
        return y.clone();
    }
    let p = string_pred(x);
    let below = numones_recursive(y, &p, set);
    if set.contains(&p) {
        string_succ(&below)
    } else {
        below
    }
}

/// Number of set positions of `X` below `t`.
pub fn count_ones_below(t: &Natural, x: &BitStr) -> Natural {
    let t = t.to_usize().unwrap_or(usize::MAX);
    Natural::from(x.count_ones_below(t))
}

/// `Exp(x, y) = min(2^x, y)`.
pub fn exp_min(x: &Natural, y: &Natural) -> Natural {
    // 2^x > y exactly when y has at most x binary digits.
    if y.bits() <= x.to_u64().unwrap_or(u64::MAX) {
        y.clone()
    } else {
        Natural::one() << x.to_usize().expect("x is below the bit length of y")
    }
}

/// `x ∸ y = max(0, x - y)`.
pub fn limited_sub(x: &Natural, y: &Natural) -> Natural {
    if x > y {
        x - y
    } else {
        Natural::zero()
    }
}

/// Binary length of a number, `0` for zero.
pub fn bin_len(x: &Natural) -> Natural {
    Natural::from(x.bits())
}

/// A value of either sort, or a truth value for relations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Num(Natural),
    Str(BitStr),
    Bool(bool),
}

impl Value {
    pub fn num(&self) -> &Natural {
        match self {
            Value::Num(n) => n,
            other => panic!("expected a number, found {other:?}"),
        }
    }

    pub fn str(&self) -> &BitStr {
        match self {
            Value::Str(s) => s,
            other => panic!("expected a string, found {other:?}"),
        }
    }
}

impl From<u64> for Value {
    fn from(n: u64) -> Self {
        Value::Num(BigUint::from(n))
    }
}

impl From<BitStr> for Value {
    fn from(s: BitStr) -> Self {
        Value::Str(s)
    }
}

/// What a defining axiom expresses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Graph {
    /// Definition `name(i, args..)` holds iff bit `i` of the value is set.
    StrBits,
    /// Definition `name(args.., z)` holds iff the value is `z`.
    NumValue,
    /// Definition `name(args..)` holds iff the relation does.
    Relation,
}

/// A defined function with its direct implementation and the name of its
/// defining axiom.
#[derive(Clone, Copy)]
pub struct DefinedFunction {
    pub name: &'static str,
    pub args: &'static [Sort],
    pub graph: Graph,
    pub axiom: &'static str,
    pub direct: fn(&[Value]) -> Value,
}

impl std::fmt::Debug for DefinedFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DefinedFunction({})", self.name)
    }
}

fn usize_arg(v: &Value) -> usize {
    v.num().to_usize().expect("length argument too large")
}

/// Every function with a bit-graph axiom, in the order of the axiom file.
pub fn catalog() -> Vec<DefinedFunction> {
    use Graph::*;
    use Sort::*;
    vec![
        DefinedFunction {
            name: "pair",
            args: &[Num, Num],
            graph: NumValue,
            axiom: "pair",
            direct: |a| Value::Num(pair(a[0].num(), a[1].num())),
        },
        DefinedFunction {
            name: "component",
            args: &[Num, Str],
            graph: StrBits,
            axiom: "component",
            direct: |a| Value::Str(component(a[1].str(), a[0].num())),
        },
        DefinedFunction {
            name: "seq_elem",
            args: &[Num, Str],
            graph: NumValue,
            axiom: "seq_elem",
            direct: |a| Value::Num(seq_elem(a[1].str(), a[0].num())),
        },
        DefinedFunction {
            name: "string_pair",
            args: &[Str, Str],
            graph: StrBits,
            axiom: "string_pair",
            direct: |a| Value::Str(string_pair(a[0].str(), a[1].str())),
        },
        DefinedFunction {
            name: "string_succ",
            args: &[Str],
            graph: StrBits,
            axiom: "succ",
            direct: |a| Value::Str(string_succ(a[0].str())),
        },
        DefinedFunction {
            name: "string_add",
            args: &[Str, Str],
            graph: StrBits,
            axiom: "add",
            direct: |a| Value::Str(string_add(a[0].str(), a[1].str())),
        },
        DefinedFunction {
            name: "string_less",
            args: &[Str, Str],
            graph: Relation,
            axiom: "less",
            direct: |a| Value::Bool(string_less(a[0].str(), a[1].str())),
        },
        DefinedFunction {
            name: "string_le",
            args: &[Str, Str],
            graph: Relation,
            axiom: "less_eq",
            direct: |a| Value::Bool(string_le(a[0].str(), a[1].str())),
        },
        DefinedFunction {
            name: "string_pred",
            args: &[Str],
            graph: StrBits,
            axiom: "pred",
            direct: |a| Value::Str(string_pred(a[0].str())),
        },
        DefinedFunction {
            name: "one_string",
            args: &[Num],
            graph: StrBits,
            axiom: "one",
            direct: |a| Value::Str(one_string(usize_arg(&a[0]))),
        },
        DefinedFunction {
            name: "last_bits",
            args: &[Num, Str],
            graph: StrBits,
            axiom: "last",
            direct: |a| Value::Str(last_bits(a[0].num(), a[1].str())),
        },
        DefinedFunction {
            name: "complement",
            args: &[Str, Num],
            graph: StrBits,
            axiom: "complement",
            direct: |a| Value::Str(complement(a[0].str(), usize_arg(&a[1]))),
        },
        DefinedFunction {
            name: "string_sub",
            args: &[Str, Str],
            graph: StrBits,
            axiom: "sub",
            direct: |a| Value::Str(string_sub(a[0].str(), a[1].str())),
        },
        DefinedFunction {
            name: "exp_min",
            args: &[Num, Num],
            graph: NumValue,
            axiom: "exp_min",
            direct: |a| Value::Num(exp_min(a[0].num(), a[1].num())),
        },
        DefinedFunction {
            name: "limited_sub",
            args: &[Num, Num],
            graph: NumValue,
            axiom: "limited_sub",
            direct: |a| Value::Num(limited_sub(a[0].num(), a[1].num())),
        },
    ]
}
