//! The early variant lets the controller keep the robot at a station, so
//! one assumption can be blocked by the system alone.

use gr1kit::pipeline;
use gr1kit::separation::{check_well_separation, Separation};
use gr1kit::strategy::ReasonKind;

fn main() {
    for name in ["v1", "v1_c2_early"] {
        let (mut s, strategy) = pipeline::run(name).expect("bundled spec");
        match check_well_separation(&mut s.game) {
            Separation::WellSeparated => println!("{name}: well separated"),
            Separation::SystemCanForceViolation { witness, blocked, sketch, blockable } => {
                println!("{name}: system can force a violation of {blocked:?}");
                println!("  {sketch}");
                println!("  blockable: {blockable:?}");
                let w: Vec<String> = witness.iter().filter(|(n, _)| !n.starts_with("aux_")).map(|(n, v)| format!("{n}={v}")).collect();
                println!("  witness: {}", w.join(" "));
            }
        }
        let c = strategy.controller().unwrap();
        let prevent = c.transitions.iter().filter(|t| t.annotation.kind == ReasonKind::PreventEnvJustice).count();
        println!("  {prevent} of {} transitions are annotated PreventEnvJustice", c.transitions.len());
    }
}
