use gr1kit::game::GameStructure;
use gr1kit::gen::{random_problem, GenConfig};
use gr1kit::lang::parse;
use gr1kit::problem::compile;
use gr1kit::solver::{check_realizability, Verdict};
use gr1kit::strategy::*;

fn game(src: &str) -> GameStructure {
    GameStructure::build(compile(&parse(src).unwrap()).unwrap()).unwrap()
}

#[test]
fn random_games_yield_verified_strategies() {
    let (mut controllers, mut counters) = (0, 0);
    for seed in 0..400 {
        let p = random_problem(seed, GenConfig::default());
        let mut g = GameStructure::build(p).unwrap();
        let sol = check_realizability(&mut g);
        match sol.verdict {
            Verdict::Realizable => {
                let c = extract_controller(&mut g, &sol.sys);
                verify_controller(&c, &mut g).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
                check_annotations(&c, &g, &sol.sys).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
                controllers += 1;
            }
            Verdict::Unrealizable => {
                let env = sol.env.as_ref().unwrap();
                let cs = extract_counterstrategy(&mut g, env);
                verify_counterstrategy(&cs, &mut g).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
                check_counter_memory(&cs, &g, env).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
                counters += 1;
            }
        }
    }
    assert!(controllers >= 200, "{controllers} realizable games");
    assert!(counters >= 50, "{counters} unrealizable games");
}

#[test]
fn trivial_goal_gives_one_memory_controller() {
    let mut g = game("VAR s : boolean;");
    let sol = check_realizability(&mut g);
    let c = extract_controller(&mut g, &sol.sys);
    assert!(c.states.iter().all(|s| s.memory == 0));
    assert!(c.transitions.iter().all(|t| t.annotation.kind == ReasonKind::GoalSatisfied));
    assert_eq!(c.num_states(), 1);
    let json = controller_json(&c, &g.problem);
    let back = import_controller(&json).unwrap();
    assert_eq!(back, c);
    assert!(json.contains("\"schema\": \"gr1-strategy/1\""));
}

#[test]
fn mutated_controller_is_rejected() {
    let mut g = game(
        "VARENV e : boolean; VAR s : {A, B, C};
         ASM G F (!e);
         GAR G (e -> next(s) != A);
         GAR G F (s = A); GAR G F (s = C);",
    );
    let sol = check_realizability(&mut g);
    assert_eq!(sol.verdict, Verdict::Realizable);
    let c = extract_controller(&mut g, &sol.sys);
    verify_controller(&c, &mut g).unwrap();
    check_annotations(&c, &g, &sol.sys).unwrap();
    let mut caught = 0;
    for k in 0..c.transitions.len() {
        let mut bad = c.clone();
        let t = &mut bad.transitions[k];
        t.annotation.kind = match t.annotation.kind {
            ReasonKind::GoalSatisfied => ReasonKind::ApproachGoal,
            ReasonKind::ApproachGoal => ReasonKind::PreventEnvJustice,
            ReasonKind::PreventEnvJustice => ReasonKind::GoalSatisfied,
        };
        if check_annotations(&bad, &g, &sol.sys).is_err() || verify_controller(&bad, &mut g).is_err() {
            caught += 1;
        }
    }
    assert_eq!(caught, c.transitions.len());
    // redirecting every move into one fixed state breaks liveness or safety
    let mut bad = c.clone();
    for t in &mut bad.transitions {
        t.to = bad.initial[0];
    }
    assert!(verify_controller(&bad, &mut g).is_err());
}

#[test]
fn contradiction_counterstrategy() {
    let mut g = game("VAR s : boolean; GAR G (!s); GAR G F (s);");
    let sol = check_realizability(&mut g);
    let env = sol.env.unwrap();
    let cs = extract_counterstrategy(&mut g, &env);
    verify_counterstrategy(&cs, &mut g).unwrap();
    assert!(!cs.initial.is_empty());
    assert!(cs.states.iter().all(|s| s.annotation.as_ref().unwrap().starved == 0));
    assert!(counter_json(&cs, &g.problem).contains("counter_strategy"));
}
