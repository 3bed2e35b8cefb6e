//! Play the system side against the counter-strategy of the bad
//! acknowledgment variant, operating the lift whenever that is legal.

use std::collections::BTreeMap;

use gr1kit::playout::{CreateSession, Mode, Service};

fn main() {
    let service = Service::new();
    let req = CreateSession { spec: None, artifact: Some("v2_c3_bad_ack".into()), mode: Mode::HumanSys };
    let mut view = service.create_session(&req).expect("session");
    println!("session {} on {}: {} legal replies", view.id, view.artifact, view.legal_total);
    for _ in 0..20 {
        if let Some(why) = &view.finished {
            println!("finished: {why}");
            break;
        }
        let pick = view.legal_moves.iter().find(|m| m.get("lift").is_some_and(|v| v != "NIL")).unwrap_or(&view.legal_moves[0]);
        let m: BTreeMap<String, String> = pick.clone().into_iter().collect();
        view = service.step(&view.id, &m).expect("legal reply");
        let st = view.state.as_ref().unwrap();
        let last = view.last.as_ref().unwrap();
        println!(
            "{:>2}: lift={:<4} liftAck={:<5} waiting={:<5} loaded={:<5} {}",
            last.step,
            st["lift"],
            st["liftAck"],
            st["spec_waitingForLifting"],
            st["spec_loaded"],
            last.annotation.as_ref().map(|a| format!("{} {}", a.kind, a.constraint_label)).unwrap_or_default()
        );
    }
    println!("{}", serde_json::to_string_pretty(&view.scoreboard).unwrap());
}
