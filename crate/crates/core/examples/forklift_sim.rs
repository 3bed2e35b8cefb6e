//! Run both controllers in the simulated warehouse, then put the V1
//! controller in a world where lifting takes time.

use gr1kit::forklift::world::scripts;
use gr1kit::forklift::{run_closed_loop, Script, SimConfig};
use gr1kit::pipeline;

fn main() {
    let benign = Script::from_json(scripts::BENIGN).unwrap();
    for (spec, lift_ticks) in [("v1", 0), ("v2", 3), ("v1", 3)] {
        let (mut s, strategy) = pipeline::run(spec).unwrap();
        let c = strategy.controller().unwrap().clone();
        let r = run_closed_loop(&mut s, &c, &benign, SimConfig { steps: 10_000, lift_ticks }).unwrap();
        println!(
            "{spec} with lift taking {lift_ticks} ticks: {} deliveries, {} guarantee violations, {} cargo overruns",
            r.deliveries, r.guarantee_violations, r.cargo_overruns
        );
        for e in r.events.iter().filter(|e| e.kind == "cargo_overrun").take(3) {
            println!("    step {}: {} at {}", e.step, e.kind, e.detail);
        }
    }
}
