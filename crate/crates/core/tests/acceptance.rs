//! Acceptance criteria, one line each. Runs without the test harness so the
//! lines always show; exits non-zero when any criterion fails.

mod common;

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::time::{Duration, Instant};

use gr1kit::explicit::explicit_oracle;
use gr1kit::forklift::world::scripts;
use gr1kit::forklift::{run_closed_loop, RunReport, Script, SimConfig};
use gr1kit::game::GameStructure;
use gr1kit::gen::{random_instance, random_problem, GenConfig};
use gr1kit::lang::ast::PatternId;
use gr1kit::lang::Side;
use gr1kit::patterns::check_template_equivalence;
use gr1kit::pipeline::{self, Strategy, Synthesis};
use gr1kit::playout::{Mode, Service};
use gr1kit::report::{Bits, ConstraintCounts};
use gr1kit::separation::{check_well_separation, Separation};
use gr1kit::solver::{check_realizability, Verdict};
use gr1kit::strategy::{check_annotations, extract_controller, verify_controller, Controller, ReasonKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Per-specification time limit.
const TIME_LIMIT: Duration = Duration::from_secs(30);
/// Accepted range of controller sizes and the sizes this implementation produces.
const STATE_RANGE: (usize, usize) = (500, 50_000);
const PINNED_STATES: [(&str, usize); 2] = [("v1", 2640), ("v2", 3168)];
const RANDOM_GAMES: u64 = 200;
const TEMPLATE_INSTANCES: usize = 50;
const LASSO_BOUND: usize = 8;
const SIM_STEPS: usize = 10_000;
const MIN_DELIVERIES: usize = 50;
const LIFT_TICKS: usize = 3;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

struct Corpus {
    runs: BTreeMap<&'static str, (Synthesis, Strategy, Duration)>,
}

impl Corpus {
    fn load() -> Corpus {
        let mut runs = BTreeMap::new();
        for name in gr1kit::corpus::names() {
            let t = Instant::now();
            let (s, strategy) = pipeline::run(name).expect("bundled specification loads");
            runs.insert(name, (s, strategy, t.elapsed()));
        }
        Corpus { runs }
    }

    fn controller(&self, name: &str) -> Controller {
        self.runs[name].1.controller().expect("realizable").clone()
    }
}

fn c1(c: &Corpus) -> Outcome {
    let expect = [
        ("v1", Verdict::Realizable),
        ("v2", Verdict::Realizable),
        ("v1_c1_strong_guarantee", Verdict::Unrealizable),
        ("v2_c3_bad_ack", Verdict::Unrealizable),
    ];
    let mut parts = vec![];
    for (name, verdict) in expect {
        let (s, _, t) = &c.runs[name];
        ensure(s.verdict() == verdict, format!("{name}: {:?}", s.verdict()))?;
        ensure(*t <= TIME_LIMIT, format!("{name} took {t:?}"))?;
        parts.push(format!("{name} {:?} in {:.0} ms", verdict, t.as_secs_f64() * 1e3));
    }
    Ok(parts.join(", "))
}

fn c2(c: &Corpus) -> Outcome {
    let counts = |name: &str| {
        let p = &c.runs[name].0.game.problem;
        (ConstraintCounts::of(p, Side::Assumption), ConstraintCounts::of(p, Side::Guarantee), Bits::of(p))
    };
    let (a1, g1, b1) = counts("v1");
    let (a2, g2, b2) = counts("v2");
    let shape = |k: &ConstraintCounts| (k.initial, k.safety, k.justice, k.pattern("P09"), k.pattern("P15"), k.pattern("P20"), k.pattern("P26"));
    ensure(shape(&a1) == (0, 1, 0, 0, 1, 0, 5), format!("V1 assumptions {a1:?}"))?;
    ensure(shape(&g1) == (1, 8, 1, 1, 0, 1, 0), format!("V1 guarantees {g1:?}"))?;
    ensure(shape(&a2) == (0, 2, 0, 0, 1, 0, 6), format!("V2 assumptions {a2:?}"))?;
    ensure(shape(&g2) == (1, 10, 1, 1, 0, 1, 0), format!("V2 guarantees {g2:?}"))?;
    ensure((b1.env, b1.sys, b2.env, b2.sys) == (4, 6, 5, 6), format!("declared bits {b1:?} {b2:?}"))?;
    Ok("V1 asm 1 safe + 5xP26 + P15, gar 1+8+1 + P09 + P20; V2 asm 2 safe + 6xP26 + P15, gar 1+10+1 + P09 + P20; bits 4/6, 5/6".to_string())
}

fn c3(c: &Corpus) -> Outcome {
    let mut parts = vec![];
    for (name, m) in [("v1", 6), ("v2", 7)] {
        let g = &c.runs[name].0.game;
        ensure(g.j_e.len() == m && g.j_s.len() == 3, format!("{name}: m={} n={}", g.j_e.len(), g.j_s.len()))?;
        parts.push(format!("{name} m={m} n=3"));
    }
    Ok(parts.join(", "))
}

fn c4(c: &Corpus) -> Outcome {
    let mut parts = vec![];
    for (name, pinned) in PINNED_STATES {
        let n = c.runs[name].1.num_states();
        ensure((STATE_RANGE.0..=STATE_RANGE.1).contains(&n), format!("{name}: {n} states outside {STATE_RANGE:?}"))?;
        ensure(n == pinned, format!("{name}: {n} states, pinned {pinned}"))?;
        parts.push(format!("{name} {n}"));
    }
    Ok(format!("{} reachable controller states (range {}..={})", parts.join(", "), STATE_RANGE.0, STATE_RANGE.1))
}

fn c5() -> Outcome {
    let mut realizable = 0;
    for seed in 0..RANDOM_GAMES {
        let p = random_problem(seed, GenConfig::default());
        let expected = explicit_oracle(&p).map_err(|e| format!("seed {seed}: {e}"))?;
        let mut g = GameStructure::build(p).map_err(|e| e.to_string())?;
        let got = check_realizability(&mut g).verdict;
        ensure(got == expected, format!("seed {seed}: symbolic {got:?}, explicit {expected:?}"))?;
        realizable += (got == Verdict::Realizable) as usize;
    }
    Ok(format!("{RANDOM_GAMES} games agree ({realizable} realizable)"))
}

fn c6() -> Outcome {
    let atoms = ["a", "b", "c"];
    for pattern in PatternId::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(pattern as u64 + 100);
        for n in 0..TEMPLATE_INSTANCES {
            let inst = random_instance(&mut rng, pattern, &atoms);
            check_template_equivalence(&inst, &atoms, LASSO_BOUND).map_err(|e| format!("{pattern} #{n}: {e}"))?;
        }
    }
    Ok(format!("4 patterns x {TEMPLATE_INSTANCES} instances, 3 atoms, lasso bound {LASSO_BOUND}"))
}

fn c7(c: &mut Corpus) -> Outcome {
    for name in ["v1", "v2", "v1_c2_early"] {
        let (s, strategy, _) = c.runs.get_mut(name).unwrap();
        let ctrl = strategy.controller().unwrap();
        verify_controller(ctrl, &mut s.game).map_err(|e| format!("{name}: {e}"))?;
        check_annotations(ctrl, &s.game, &s.solution.sys).map_err(|e| format!("{name}: {e}"))?;
    }
    let (mut seed, mut verified) = (0u64, 0);
    while verified < RANDOM_GAMES {
        let mut g = GameStructure::build(random_problem(seed, GenConfig::default())).map_err(|e| e.to_string())?;
        let sol = check_realizability(&mut g);
        if sol.verdict == Verdict::Realizable {
            let ctrl = extract_controller(&mut g, &sol.sys);
            verify_controller(&ctrl, &mut g).map_err(|e| format!("seed {seed}: {e}"))?;
            check_annotations(&ctrl, &g, &sol.sys).map_err(|e| format!("seed {seed}: {e}"))?;
            verified += 1;
        }
        seed += 1;
    }
    Ok(format!("corpus controllers and {verified} random controllers verified, annotations consistent"))
}

fn reachable_transitions(c: &Controller) -> Vec<usize> {
    let mut seen: HashSet<usize> = c.initial.iter().copied().collect();
    let mut queue: VecDeque<usize> = c.initial.iter().copied().collect();
    let mut out = vec![];
    while let Some(s) = queue.pop_front() {
        for &t in &c.out[s] {
            out.push(t);
            let to = c.transitions[t].to;
            if seen.insert(to) {
                queue.push_back(to);
            }
        }
    }
    out
}

fn c8(c: &mut Corpus) -> Outcome {
    const LABEL: &str = "leave_station";
    let ctrl = c.controller("v1_c2_early");
    let (s, _, _) = c.runs.get_mut("v1_c2_early").unwrap();
    let sep = check_well_separation(&mut s.game);
    let Separation::SystemCanForceViolation { blocked, .. } = &sep else {
        return Err("v1_c2_early reported well-separated".into());
    };
    let prevent = reachable_transitions(&ctrl)
        .into_iter()
        .filter(|&t| {
            let a = &ctrl.transitions[t].annotation;
            a.kind == ReasonKind::PreventEnvJustice && a.constraint_label == LABEL
        })
        .count();
    ensure(prevent > 0, "no reachable PreventEnvJustice transition on leave_station")?;
    let assumption = s.game.problem.origins.iter().find(|o| o.label == LABEL).map(|o| o.side);
    ensure(assumption == Some(Side::Assumption), "leave_station is not an assumption")?;
    Ok(format!("SystemCanForceViolation ({blocked:?}); {prevent} reachable PreventEnvJustice transitions on `{LABEL}`"))
}

fn c9() -> Outcome {
    let service = Service::new();
    let artifact = service.load_artifact("v2_c3_bad_ack").map_err(|e| e.to_string())?;
    let cs = artifact.strategy.counter().ok_or("C3 has no counter-strategy")?;
    let script = common::consecutive_script(cs, &artifact.problem, "liftAck", 1);
    let req = gr1kit::playout::CreateSession { spec: None, artifact: Some("v2_c3_bad_ack".into()), mode: Mode::HumanSys };
    let id = service.create_session(&req).map_err(|e| e.to_string())?.id;
    for m in &script {
        service.step(&id, m).map_err(|e| e.to_string())?;
    }
    let trace = service.trace(&id).map_err(|e| e.to_string())?;
    let val = |k: usize, v: &str| trace[k].assignment[v] == "true";
    let n = trace.len();
    let ack = (1..n).find(|&k| val(k - 1, "liftAck") && val(k, "liftAck")).ok_or("no consecutive acknowledgments")?;
    let set = (1..n).find(|&k| !val(k - 1, "spec_loaded") && val(k, "spec_loaded"));
    let cleared = set.and_then(|k| (k + 1..n).find(|&j| !val(j, "spec_loaded")));
    ensure(cleared.is_some(), "spec_loaded not set and then cleared")?;
    Ok(format!(
        "liftAck at steps {} and {}; spec_loaded set at {} and cleared at {}",
        ack - 1,
        ack,
        set.unwrap(),
        cleared.unwrap()
    ))
}

fn sim(c: &mut Corpus, name: &str, script: &str, steps: usize, lift_ticks: usize) -> RunReport {
    let ctrl = c.controller(name);
    let (s, _, _) = c.runs.get_mut(name).unwrap();
    let script = Script::from_json(script).expect("bundled script parses");
    run_closed_loop(s, &ctrl, &script, SimConfig { steps, lift_ticks }).expect("simulation runs")
}

fn c10(c: &mut Corpus) -> Outcome {
    let mut parts = vec![];
    for (name, ticks) in [("v1", 0), ("v2", LIFT_TICKS)] {
        let r = sim(c, name, scripts::BENIGN, SIM_STEPS, ticks);
        ensure(r.steps == SIM_STEPS, format!("{name} halted: {:?}", r.halted))?;
        ensure(r.deliveries >= MIN_DELIVERIES, format!("{name}: {} deliveries", r.deliveries))?;
        ensure(r.guarantee_violations == 0, format!("{name}: {} guarantee violations", r.guarantee_violations))?;
        parts.push(format!("{name} {} deliveries", r.deliveries));
        let e = sim(c, name, scripts::EMERGENCY, 2_000, ticks);
        ensure(e.emergency_steps > 0 && e.motion_during_emergency == 0, format!("{name}: moved during emergency"))?;
    }
    Ok(format!("{} in {SIM_STEPS} steps, 0 guarantee violations; no motion while emgOff held", parts.join(", ")))
}

fn c11(c: &mut Corpus) -> Outcome {
    let r = sim(c, "v1", scripts::BENIGN, SIM_STEPS, LIFT_TICKS);
    let first = r.events.iter().find(|e| e.kind == "cargo_overrun").ok_or("no cargo overrun logged")?;
    Ok(format!("first cargo overrun at step {} ({}), {} in total", first.step, first.detail, r.cargo_overruns))
}

fn main() {
    let mut corpus = Corpus::load();
    let results: Vec<(&str, Outcome)> = vec![
        ("corpus realizability", c1(&corpus)),
        ("declared constraint counts", c2(&corpus)),
        ("justice counts", c3(&corpus)),
        ("controller size", c4(&corpus)),
        ("symbolic vs explicit", c5()),
        ("template equivalence", c6()),
        ("strategy verification", c7(&mut corpus)),
        ("well-separation of C2", c8(&mut corpus)),
        ("C3 double acknowledgment play-out", c9()),
        ("closed loop", c10(&mut corpus)),
        ("V1 controller in timed world", c11(&mut corpus)),
    ];
    let mut failed = 0;
    for (k, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
