//! Synthesize the V1 forklift controller, verify it and export it.

use gr1kit::pipeline;
use gr1kit::report::SpecReport;
use gr1kit::strategy::{check_annotations, controller_dot, controller_json, verify_controller};

fn main() {
    let (mut s, strategy) = pipeline::run("v1").expect("bundled spec");
    let c = strategy.controller().expect("v1 is realizable").clone();
    println!("{}", SpecReport::new(&mut s, &strategy, false));

    verify_controller(&c, &mut s.game).expect("controller is sound");
    check_annotations(&c, &s.game, &s.solution.sys).expect("annotations match the fixpoint");
    println!("verified {} states", c.num_states());

    // the first moves from the first initial state
    let s0 = c.initial[0];
    for t in c.successors(s0).take(5) {
        let shown: Vec<String> = s.game.show(&c.states[t.to].values).into_iter().take(8).map(|(n, v)| format!("{n}={v}")).collect();
        println!("  -> {:>4} {:?} ({}): {}", t.to, t.annotation.kind, t.annotation.constraint_label, shown.join(" "));
    }

    let dir = std::env::temp_dir();
    std::fs::write(dir.join("v1.json"), controller_json(&c, &s.game.problem)).unwrap();
    std::fs::write(dir.join("v1.dot"), controller_dot(&c, &s.game.problem)).unwrap();
    println!("wrote {} and {}", dir.join("v1.json").display(), dir.join("v1.dot").display());
}
