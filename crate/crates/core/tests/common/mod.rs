#![allow(dead_code)]

pub mod gen;
pub mod golden;

use std::path::PathBuf;

use bid::eval::{CompiledFormula, Env};
use bid::parser::{parse_program, Program};
use bid::stdlib::{DefinedFunction, Graph, Value};
use bid::syntax::{Definition, Sort};
use bid::tm::Machine;
use bid::BitStr;
use num_traits::ToPrimitive;
use rand::Rng;

pub fn crate_file(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(rel)
}

pub fn axioms() -> Program {
    let text = std::fs::read_to_string(crate_file("axioms/stdlib.bid")).expect("axiom file");
    parse_program(&text).expect("axiom file parses")
}

pub fn b(src: &str) -> BitStr {
    src.parse().unwrap()
}

/// A defined function's axiom, compiled once for repeated checks.
pub struct AxiomCheck<'a> {
    pub f: &'a DefinedFunction,
    pub def: &'a Definition,
    compiled: CompiledFormula,
    env: std::cell::RefCell<Env>,
}

impl<'a> AxiomCheck<'a> {
    pub fn new(f: &'a DefinedFunction, prog: &'a Program) -> Self {
        let def = prog.get(f.axiom).unwrap_or_else(|| panic!("no axiom {}", f.axiom));
        let index = match f.graph {
            Graph::StrBits => Some(def.params[0].name.as_str()),
            Graph::NumValue => Some(def.params.last().unwrap().name.as_str()),
            Graph::Relation => None,
        };
        let compiled = CompiledFormula::compile(&def.body, index).expect("axiom compiles");
        AxiomCheck { f, def, compiled, env: std::cell::RefCell::new(Env::new()) }
    }

    fn arg_params(&self) -> &[bid::syntax::Var] {
        match self.f.graph {
            Graph::StrBits => &self.def.params[1..],
            Graph::NumValue => &self.def.params[..self.def.params.len() - 1],
            Graph::Relation => &self.def.params[..],
        }
    }

    /// Checks the direct value against the axiom at `args`, returning a
    /// description of the first disagreement.
    pub fn check(&self, args: &[Value]) -> Result<(), String> {
        // Reused across calls so only the values change.
        let mut env = self.env.borrow_mut();
        let mut longest = 0;
        for (p, a) in self.arg_params().iter().zip(args) {
            match (p.sort, a) {
                (Sort::Num, Value::Num(n)) => {
                    longest = longest.max(n.to_usize().unwrap_or(0).min(64));
                    match env.nums.get_mut(&p.name) {
                        Some(v) => v.clone_from(n),
                        None => env.set_num(&p.name, n.clone()),
                    }
                }
                (Sort::Str, Value::Str(s)) => {
                    longest = longest.max(s.len());
                    match env.strs.get_mut(&p.name) {
                        Some(v) => v.clone_from(s),
                        None => env.set_str(&p.name, s.clone()),
                    }
                }
                _ => panic!("argument sorts of {} disagree with its axiom", self.f.name),
            }
        }
        let direct = (self.f.direct)(args);
        let mut bound = self.compiled.bind(&env);
        let fail = |what: String| Err(format!("{}({args:?}): {what}", self.f.name));
        match (&direct, self.f.graph) {
            (Value::Str(out), Graph::StrBits) => {
                for i in 0..(out.len() + longest + 2) as u64 {
                    let ax = bound.eval(i).map_err(|e| e.to_string())?;
                    if ax != out.bit_u64(i) {
                        return fail(format!("bit {i}: direct {} axiom {ax}", out.bit_u64(i)));
                    }
                }
            }
            (Value::Num(v), Graph::NumValue) => {
                let v = v.to_u64().expect("value fits");
                if !bound.eval(v).map_err(|e| e.to_string())? {
                    return fail(format!("axiom rejects the direct value {v}"));
                }
                let mut wrong: Vec<u64> = vec![0, 1, v.saturating_sub(1), v + 1, v + 2, v * 2, v / 2];
                if v < 64 {
                    wrong.extend(0..v + 3);
                }
                for z in wrong.into_iter().filter(|&z| z != v) {
                    if bound.eval(z).map_err(|e| e.to_string())? {
                        return fail(format!("axiom also accepts {z}, direct value {v}"));
                    }
                }
            }
            (Value::Bool(want), Graph::Relation) => {
                let ax = bound.eval(0).map_err(|e| e.to_string())?;
                if ax != *want {
                    return fail(format!("direct {want} axiom {ax}"));
                }
            }
            _ => panic!("{} returns the wrong kind of value", self.f.name),
        }
        Ok(())
    }
}

/// Exhaustive domain per argument sort: all strings of length at most
/// `str_len` and all numbers below `2^num_bits`.
fn domain(sort: Sort, str_len: usize, num_bits: usize) -> Vec<Value> {
    match sort {
        Sort::Str => BitStr::all_up_to(str_len).map(Value::Str).collect(),
        Sort::Num => (0..1u64 << num_bits).map(Value::from).collect(),
    }
}

/// Checks every argument tuple of the exhaustive domain, returning the number
/// of cases or the first disagreement.
pub fn exhaustive(f: &DefinedFunction, check: &AxiomCheck, str_len: usize, num_bits: usize) -> Result<usize, String> {
    let domains: Vec<Vec<Value>> = f.args.iter().map(|&s| domain(s, str_len, num_bits)).collect();
    let mut count = 0;
    let mut idx = vec![0usize; domains.len()];
    loop {
        let args: Vec<Value> = idx.iter().zip(&domains).map(|(&k, d)| d[k].clone()).collect();
        check.check(&args)?;
        count += 1;
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(count);
            }
            idx[k] += 1;
            if idx[k] < domains[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// `(string length, number bits)` for the exhaustive pass.
pub fn exhaustive_sizes(name: &str) -> (usize, usize) {
    match name {
        // Positions grow with the square of the inputs.
        "string_pair" => (8, 0),
        // The width argument only needs to pass the longest string.
        "complement" | "one_string" => (10, 5),
        _ => (10, 10),
    }
}

/// `(longest string, largest number)` for random cases.
pub fn random_sizes(name: &str) -> (usize, u64) {
    match name {
        "string_pair" => (12, 0),
        // Number arguments that act as lengths stay near the string sizes.
        "one_string" | "complement" | "last_bits" => (40, 64),
        _ => (40, 1 << 20),
    }
}

pub fn random_args<R: Rng>(f: &DefinedFunction, rng: &mut R, str_len: usize, num_max: u64) -> Vec<Value> {
    f.args
        .iter()
        .map(|s| match s {
            Sort::Str => Value::Str(gen::bitstr(rng, str_len)),
            Sort::Num => Value::from(rng.gen_range(0..=num_max)),
        })
        .collect()
}

pub fn machine(name: &str) -> Machine {
    Machine::load(crate_file(&format!("machines/{name}.json"))).unwrap()
}

/// What each corpus machine computes, written independently of the machines.
pub fn machine_oracle(name: &str, x: &BitStr) -> BitStr {
    let v: Vec<bool> = (0..x.len()).map(|j| x.bit(j)).collect();
    match name {
        "copy" => x.clone(),
        "inc" => BitStr::from_natural(&(x.to_natural() + 1u32)),
        "palindrome" => BitStr::from_positions(v.iter().eq(v.iter().rev()).then_some(0)),
        "counter" => BitStr::from_positions([x.len()]),
        "qbf" => {
            let mut level = v;
            let mut round = 0;
            while level.len() > 1 {
                level = level
                    .chunks(2)
                    .map(|c| match c {
                        [a, b] if round % 2 == 0 => *a || *b,
                        [a, b] => *a && *b,
                        [a] => *a,
                        _ => unreachable!(),
                    })
                    .collect();
                round += 1;
            }
            BitStr::from_positions(level.first().copied().unwrap_or(false).then_some(0))
        }
        _ => panic!("no oracle for {name}"),
    }
}
