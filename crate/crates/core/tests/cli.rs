use gr1kit::cli::{run_args, EXIT_OK, EXIT_SPEC_ERROR, EXIT_UNREALIZABLE};

fn gr1(args: &[&str]) -> (u8, String) {
    let mut out = Vec::new();
    let code = run_args(std::iter::once("gr1").chain(args.iter().copied()), &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn temp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("gr1-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn check_exit_codes() {
    let (code, text) = gr1(&["check", "v1"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("Realizable") && text.contains("m=6 n=3"), "{text}");
    assert_eq!(gr1(&["check", "v1_c1_strong_guarantee"]).0, EXIT_UNREALIZABLE);

    let bad = temp("bad.gr1spec");
    std::fs::write(&bad, "SPEC bad\nVAR x : boolean;\nGAR G (y);\n").unwrap();
    assert_eq!(gr1(&["check", bad.to_str().unwrap()]).0, EXIT_SPEC_ERROR);
    assert_eq!(gr1(&["check", "/no/such/file.gr1spec"]).0, EXIT_SPEC_ERROR);
}

#[test]
fn check_json_report() {
    let (code, text) = gr1(&["check", "v2", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["schema"], "gr1-report/1");
    assert_eq!(v["bits"]["env"], 5);
    assert_eq!(v["m"], 7);
    assert_eq!(v["guarantees"]["safety"], 10);
}

#[test]
fn synth_writes_json_and_dot() {
    let (json, dot) = (temp("v1.json"), temp("v1.dot"));
    let (code, _) = gr1(&["synth", "v1", "--out", json.to_str().unwrap(), "--dot", dot.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["schema"], "gr1-strategy/1");
    let dot = std::fs::read_to_string(&dot).unwrap();
    assert!(dot.starts_with("digraph") && dot.contains("GoalSatisfied"));
    assert_eq!(gr1(&["synth", "v2_c3_bad_ack"]).0, EXIT_UNREALIZABLE);
}

#[test]
fn counter_exports_the_counter_strategy() {
    let out = temp("c1.json");
    let (code, _) = gr1(&["counter", "v1_c1_strong_guarantee", "--out", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["kind"], "counter_strategy");
    let (code, text) = gr1(&["counter", "v1"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("no counter-strategy"));
}

#[test]
fn sim_writes_a_report() {
    let report = temp("report.json");
    let (code, text) = gr1(&["sim", "--spec", "v1", "--script", "benign", "--steps", "2000", "--report", report.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{text}");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["schema"], "gr1-sim/1");
    assert_eq!(v["steps"], 2000);
    assert_eq!(v["guarantee_violations"], 0);
    assert_eq!(gr1(&["sim", "--spec", "v1", "--script", "/no/such/script.json"]).0, EXIT_SPEC_ERROR);
}

#[test]
fn patterns_list() {
    let (code, text) = gr1(&["patterns", "list", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let ids: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["P09", "P15", "P20", "P26"]);
}
