use gr1kit::explicit::{explicit_oracle, ExplicitGame};
use gr1kit::game::GameStructure;
use gr1kit::gen::{random_problem, GenConfig};
use gr1kit::solver::{check_realizability, Verdict};

#[test]
fn symbolic_and_explicit_agree_on_random_games() {
    let mut counts = [0usize; 2];
    for seed in 0..300 {
        let p = random_problem(seed, GenConfig::default());
        let expected = explicit_oracle(&p).unwrap();
        let mut g = GameStructure::build(p).unwrap();
        let sol = check_realizability(&mut g);
        assert_eq!(sol.verdict, expected, "seed {seed}");
        counts[(expected == Verdict::Realizable) as usize] += 1;
    }
    // the generator must exercise both verdicts
    assert!(counts[0] > 30 && counts[1] > 30, "{counts:?}");
}

#[test]
fn winning_regions_agree_statewise() {
    for seed in 0..100 {
        let p = random_problem(seed, GenConfig::default());
        let ex = ExplicitGame::new(&p).unwrap();
        let z = ex.winning_region();
        let mut g = GameStructure::build(p).unwrap();
        let sol = check_realizability(&mut g);
        for (k, s) in ex.states.iter().enumerate() {
            assert_eq!(g.holds(sol.sys.z, s), z[k], "seed {seed} state {s:?}");
        }
        let env = gr1kit::solver::solve_env(&mut g);
        let not_z = g.mgr.not(sol.sys.z);
        assert_eq!(env.win(), not_z, "seed {seed}: environment region is not the complement");
    }
}
