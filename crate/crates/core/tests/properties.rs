use std::collections::BTreeMap;
use std::sync::Arc;

use gr1kit::bdd::{Bdd, BddManager, VarSet};
use gr1kit::game::GameStructure;
use gr1kit::gen::{random_problem, random_prop, GenConfig};
use gr1kit::lang::{parse_expr, pretty_expr};
use gr1kit::pipeline;
use gr1kit::playout::{Artifact, Mode, Session};
use gr1kit::solver::{check_realizability, Verdict};
use gr1kit::strategy::{extract_controller, verify_controller};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const VARS: u32 = 5;

#[derive(Debug, Clone)]
enum F {
    Var(u32),
    Const(bool),
    Not(Box<F>),
    And(Box<F>, Box<F>),
    Or(Box<F>, Box<F>),
    Xor(Box<F>, Box<F>),
}

fn formula() -> impl Strategy<Value = F> {
    let leaf = prop_oneof![(0..VARS).prop_map(F::Var), any::<bool>().prop_map(F::Const)];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| F::Not(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| F::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| F::Or(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| F::Xor(Box::new(a), Box::new(b))),
        ]
    })
}

fn eval(f: &F, x: u32) -> bool {
    match f {
        F::Var(v) => x >> v & 1 == 1,
        F::Const(c) => *c,
        F::Not(a) => !eval(a, x),
        F::And(a, b) => eval(a, x) && eval(b, x),
        F::Or(a, b) => eval(a, x) || eval(b, x),
        F::Xor(a, b) => eval(a, x) != eval(b, x),
    }
}

fn build(m: &mut BddManager, f: &F) -> Bdd {
    match f {
        F::Var(v) => m.var(*v),
        F::Const(c) => m.constant(*c),
        F::Not(a) => {
            let a = build(m, a);
            m.not(a)
        }
        F::And(a, b) => {
            let (a, b) = (build(m, a), build(m, b));
            m.and(a, b)
        }
        F::Or(a, b) => {
            let (a, b) = (build(m, a), build(m, b));
            m.or(a, b)
        }
        F::Xor(a, b) => {
            let (a, b) = (build(m, a), build(m, b));
            m.xor(a, b)
        }
    }
}

/// The same function written with only `and` and `not`.
fn demorgan(f: &F) -> F {
    let not = |a: F| F::Not(Box::new(a));
    let and = |a: F, b: F| F::And(Box::new(a), Box::new(b));
    match f {
        F::Var(_) | F::Const(_) => f.clone(),
        F::Not(a) => not(demorgan(a)),
        F::And(a, b) => and(demorgan(a), demorgan(b)),
        F::Or(a, b) => not(and(not(demorgan(a)), not(demorgan(b)))),
        F::Xor(a, b) => {
            let (a, b) = (demorgan(a), demorgan(b));
            not(and(not(and(a.clone(), not(b.clone()))), not(and(not(a), b))))
        }
    }
}

proptest! {
    #[test]
    fn bdd_agrees_with_truth_table(f in formula()) {
        let mut m = BddManager::new(VARS);
        let b = build(&mut m, &f);
        let all = VarSet::from_vars(0..VARS);
        let mut count = 0u128;
        for x in 0..(1u32 << VARS) {
            let want = eval(&f, x);
            prop_assert_eq!(m.eval(b, |v| x >> v & 1 == 1), want);
            count += want as u128;
        }
        prop_assert_eq!(m.sat_count(b, all), count);
    }

    #[test]
    fn equivalent_formulas_share_one_node(f in formula()) {
        let mut m = BddManager::new(VARS);
        let a = build(&mut m, &f);
        let b = build(&mut m, &demorgan(&f));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn exists_is_disjunction_of_cofactors(f in formula(), v in 0..VARS) {
        let mut m = BddManager::new(VARS);
        let b = build(&mut m, &f);
        let e = m.exists(b, VarSet::from_vars([v]));
        for x in 0..(1u32 << VARS) {
            let want = eval(&f, x & !(1 << v)) || eval(&f, x | (1 << v));
            prop_assert_eq!(m.eval(e, |u| x >> u & 1 == 1), want);
        }
    }

    #[test]
    fn pretty_printing_round_trips(seed in any::<u64>(), depth in 0u32..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_prop(&mut rng, &["a", "b", "c", "d"], depth);
        let text = pretty_expr(&e);
        prop_assert_eq!(parse_expr(&text).unwrap(), e, "{}", text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn extracted_controllers_verify(seed in any::<u64>()) {
        let mut g = GameStructure::build(random_problem(seed, GenConfig::default())).unwrap();
        let sol = check_realizability(&mut g);
        if sol.verdict == Verdict::Realizable {
            let c = extract_controller(&mut g, &sol.sys);
            prop_assert!(verify_controller(&c, &mut g).is_ok());
            // extraction is deterministic
            prop_assert_eq!(extract_controller(&mut g, &sol.sys), c);
        }
    }
}

fn toy_artifact() -> Arc<Artifact> {
    let spec = "SPEC toy\nVARENV req : boolean; cancel : boolean;\nVAR grant : boolean;\n\
                ASM G (cancel -> !next(cancel));\nGAR G (req & !cancel -> next(grant));\nGAR G F (grant);\n";
    let mut s = pipeline::synthesize(pipeline::load_text("toy.gr1spec", spec).unwrap()).unwrap();
    let strategy = s.strategy();
    let verdict = s.verdict();
    Arc::new(Artifact::new("toy", s.game, verdict, strategy))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn replaying_a_session_reproduces_its_trace(choices in proptest::collection::vec(any::<usize>(), 1..20)) {
        let artifact = toy_artifact();
        let mut s = Session::new("a", artifact.clone(), Mode::HumanEnv).unwrap();
        let mut moves: Vec<BTreeMap<String, String>> = vec![];
        for k in choices {
            let (legal, total) = s.legal_moves();
            prop_assert_eq!(legal.len() as u128, total);
            let m: BTreeMap<String, String> = legal[k % legal.len()].clone().into_iter().collect();
            s.step(&m).unwrap();
            moves.push(m);
        }
        prop_assert!(s.trace().iter().all(|t| t.violations.is_empty()));
        let r = Session::replay("b", artifact, Mode::HumanEnv, &moves).unwrap();
        prop_assert_eq!(r.trace(), s.trace());
    }
}
