//! Explain why the strong-guarantee variant is unrealizable by playing out
//! its counter-strategy.

use gr1kit::pipeline;

fn main() {
    let (s, strategy) = pipeline::run("v1_c1_strong_guarantee").expect("bundled spec");
    let cs = strategy.counter().expect("unrealizable");
    println!("{:?}: counter-strategy with {} states", s.verdict(), cs.num_states());
    let visible = |values: &[usize]| {
        s.game.show(values).into_iter().filter(|(n, _)| !n.starts_with("aux_")).map(|(n, v)| format!("{n}={v}")).collect::<Vec<_>>().join(" ")
    };
    // follow the first system reply a few steps
    let mut node = cs.initial[0];
    for step in 0..6 {
        let st = &cs.states[node];
        let why = st.annotation.as_ref().map(|a| format!("{:?} starving `{}`", a.kind, a.starved_label)).unwrap_or_default();
        println!("{step}: {}  [{why}]", visible(&st.values));
        match st.successors.first() {
            Some(&n) => node = n,
            None => {
                println!("   the system has no legal reply");
                break;
            }
        }
    }
}
