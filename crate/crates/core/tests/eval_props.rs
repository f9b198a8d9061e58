//! Properties of the reference evaluator on random formulas.

mod common;

use bid::eval::{eval_formula, Env};
use bid::syntax::*;
use bid::BitStr;
use common::gen::{self, Scope};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn env(rng: &mut ChaCha8Rng) -> Env {
    Env::new()
        .with_num("a", rng.gen_range(0u64..6))
        .with_num("b", rng.gen_range(0u64..6))
        .with_str("A", gen::bitstr(rng, 6))
}

/// A random body that may mention `var` along with `a`, `b` and `A`.
fn body(rng: &mut ChaCha8Rng, var: &Var, string_quantifiers: bool) -> Formula {
    let mut scope = Scope::new(&["a", "b"], &["A"]);
    scope.string_quantifiers = string_quantifiers;
    match var.sort {
        Sort::Num => scope.nums.push(var.name.clone()),
        Sort::Str => scope.strs.push(var.name.clone()),
    }
    gen::formula(rng, 3, &scope)
}

fn bounded(kind: Quantifier, var: &Var, strict: bool, t: u64, body: Formula) -> Formula {
    Formula::quant(kind, var.clone(), Some(Bound { strict, term: NumTerm::lit(t) }), body)
}

fn var_of(string: bool) -> Var {
    if string {
        Var::str("V")
    } else {
        Var::num("v")
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn quantifier_duality(seed: u64, string: bool, strict: bool, t in 0u64..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let var = var_of(string);
        let phi = body(&mut rng, &var, true);
        let env = env(&mut rng);
        let lhs = bounded(Quantifier::Exists, &var, strict, t, phi.clone()).not();
        let rhs = bounded(Quantifier::Forall, &var, strict, t, phi.clone().not());
        prop_assert_eq!(eval_formula(&lhs, &env).unwrap(), eval_formula(&rhs, &env).unwrap());
        let lhs = bounded(Quantifier::Forall, &var, strict, t, phi.clone()).not();
        let rhs = bounded(Quantifier::Exists, &var, strict, t, phi.not());
        prop_assert_eq!(eval_formula(&lhs, &env).unwrap(), eval_formula(&rhs, &env).unwrap());
    }

    #[test]
    fn widening_a_bound_is_monotone(seed: u64, string: bool, strict: bool, t in 0u64..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let var = var_of(string);
        let phi = body(&mut rng, &var, true);
        let env = env(&mut rng);
        let at = |kind, t| eval_formula(&bounded(kind, &var, strict, t, phi.clone()), &env).unwrap();
        prop_assert!(!at(Quantifier::Exists, t) || at(Quantifier::Exists, t + 1));
        prop_assert!(!at(Quantifier::Forall, t + 1) || at(Quantifier::Forall, t));
    }

    /// `(Q V <= b)` ranges over exactly the bit sets inside `0..b`.
    #[test]
    fn string_quantifiers_match_brute_force(seed: u64, strict: bool, b in 0u32..=12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let var = Var::str("V");
        let phi = body(&mut rng, &var, false);
        let mut env = env(&mut rng);
        // `|V| < 0` admits no string at all.
        let (top, count) = match (strict, b) {
            (true, 0) => (0, 0),
            (true, b) => (b - 1, 1u64 << (b - 1)),
            (false, b) => (b, 1u64 << b),
        };
        let (mut any, mut all) = (false, true);
        for mask in 0..count {
            env.set_str("V", BitStr::from_positions((0..top as usize).filter(|k| mask >> k & 1 == 1)));
            let holds = eval_formula(&phi, &env).unwrap();
            any |= holds;
            all &= holds;
        }
        env.strs.remove("V");
        prop_assert_eq!(eval_formula(&bounded(Quantifier::Exists, &var, strict, b as u64, phi.clone()), &env).unwrap(), any);
        prop_assert_eq!(eval_formula(&bounded(Quantifier::Forall, &var, strict, b as u64, phi), &env).unwrap(), all);
    }

    #[test]
    fn number_quantifiers_match_brute_force(seed: u64, strict: bool, t in 0u64..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let var = Var::num("v");
        let phi = body(&mut rng, &var, false);
        let mut env = env(&mut rng);
        let values: Vec<bool> = (0..t + u64::from(!strict))
            .map(|v| {
                env.set_num("v", v);
                eval_formula(&phi, &env).unwrap()
            })
            .collect();
        env.nums.remove("v");
        prop_assert_eq!(eval_formula(&bounded(Quantifier::Exists, &var, strict, t, phi.clone()), &env).unwrap(), values.iter().any(|&h| h));
        prop_assert_eq!(eval_formula(&bounded(Quantifier::Forall, &var, strict, t, phi), &env).unwrap(), values.iter().all(|&h| h));
    }
}
