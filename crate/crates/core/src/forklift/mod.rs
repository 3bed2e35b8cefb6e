//! Closed-loop simulation of a synthesized forklift controller in a
//! [`World`].
//!
//! Each step the world is read into the environment variables, the
//! controller picks the system values, and the world executes the motor and
//! lift commands. The resulting trace is checked against the specification.

pub mod world;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::display_value;
use crate::lang::Side;
use crate::monitor::TraceMonitor;
use crate::pipeline::Synthesis;
use crate::problem::{Player, VarKind};
use crate::strategy::Controller;

pub use world::{Happening, Heading, Layout, LiftOp, Motion, Obstacle, Perturbation, Reading, Script, World};

pub const REPORT_SCHEMA: &str = "gr1-sim/1";

/// Ticks a lift or drop takes in the timed world.
pub const DEFAULT_LIFT_TICKS: usize = 3;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("environment variable `{0}` has no sensor in the world")]
    UnknownSensor(String),
    #[error("system variable `{0}` is missing; the controller must drive `mLeft`, `mRight` and `lift`")]
    MissingActuator(String),
    #[error("script refers to cell {cell}, but the world has {cells} cells")]
    BadCell { cell: usize, cells: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub steps: usize,
    /// Duration of a lift operation; 0 means it completes within the step
    /// and no acknowledgment is sensed.
    pub lift_ticks: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimEvent {
    pub step: usize,
    pub kind: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub spec: String,
    pub config: SimConfig,
    /// Steps actually executed.
    pub steps: usize,
    pub deliveries: usize,
    pub pickups: usize,
    pub motion_actions: usize,
    pub emergency_steps: usize,
    pub motion_during_emergency: usize,
    pub cargo_overruns: usize,
    pub collisions: usize,
    pub guarantee_violations: usize,
    pub assumption_violations: usize,
    /// Step of the first assumption violation; guarantee violations from
    /// then on are permitted by the specification.
    pub first_assumption_violation: Option<usize>,
    /// Guarantee violations before any assumption was violated.
    pub unexcused_guarantee_violations: usize,
    /// Why the run stopped before the requested number of steps.
    pub halted: Option<String>,
    pub events: Vec<SimEvent>,
}

impl RunReport {
    pub fn count(&self, kind: &str) -> usize {
        self.events.iter().filter(|e| e.kind == kind).count()
    }
}

/// Variable indices and value codes the loop needs.
struct Wiring {
    sensors: Vec<(usize, Sensor)>,
    left: usize,
    right: usize,
    lift: usize,
}

#[derive(Clone, Copy)]
enum Sensor {
    Station,
    EmgOff,
    Dist,
    Cargo,
    Ack,
}

impl Wiring {
    fn new(s: &Synthesis) -> Result<Wiring, SimError> {
        let p = &s.game.problem;
        let mut sensors = vec![];
        for (i, v) in p.vars.iter().enumerate() {
            if v.player != Player::Env || v.kind != VarKind::Declared {
                continue;
            }
            let sensor = match v.name.as_str() {
                "station" => Sensor::Station,
                "emgOff" => Sensor::EmgOff,
                "distSense" => Sensor::Dist,
                "cargoSense" => Sensor::Cargo,
                "liftAck" => Sensor::Ack,
                other => return Err(SimError::UnknownSensor(other.to_string())),
            };
            sensors.push((i, sensor));
        }
        let find = |name: &str| p.var_index(name).ok_or_else(|| SimError::MissingActuator(name.to_string()));
        Ok(Wiring { sensors, left: find("mLeft")?, right: find("mRight")?, lift: find("lift")? })
    }

    /// (variable, value index) pairs for a reading.
    fn input(&self, s: &Synthesis, r: &Reading) -> Vec<(usize, usize)> {
        let p = &s.game.problem;
        self.sensors
            .iter()
            .map(|&(i, sensor)| {
                let on = match sensor {
                    Sensor::Station => r.station,
                    Sensor::EmgOff => r.emg_off,
                    Sensor::Dist => r.dist_blocked,
                    Sensor::Cargo => r.cargo_blocked,
                    Sensor::Ack => r.lift_ack,
                };
                let d = &p.vars[i].domain;
                let want = match sensor {
                    Sensor::Dist | Sensor::Cargo => if on { "BLOCKED" } else { "CLEAR" },
                    _ => if on { "true" } else { "false" },
                };
                let x = (0..d.size()).find(|&x| display_value(d, x) == want).unwrap_or(on as usize);
                (i, x)
            })
            .collect()
    }

    fn command(&self, s: &Synthesis, values: &[usize]) -> (Motion, Option<LiftOp>) {
        let p = &s.game.problem;
        let show = |i: usize| display_value(&p.vars[i].domain, values[i]);
        let motion = Motion::from_wheels(&show(self.left), &show(self.right));
        let lift = match show(self.lift).as_str() {
            "LIFT" => Some(LiftOp::Lift),
            "DROP" => Some(LiftOp::Drop),
            _ => None,
        };
        (motion, lift)
    }
}

fn check_cells(script: &Script) -> Result<(), SimError> {
    let cells = script.world.cells;
    let mut used: Vec<usize> = script.world.stations.clone();
    used.extend(&script.world.cargo);
    used.extend(script.world.obstacles.iter().map(|o| o.0));
    used.push(script.world.start);
    for e in &script.events {
        match e.change {
            Perturbation::PlaceCargo { cell } | Perturbation::RemoveCargo { cell } | Perturbation::SetObstacle { cell, .. } => {
                used.push(cell)
            }
            Perturbation::Emergency { .. } => {}
        }
    }
    match used.into_iter().find(|&c| c >= cells) {
        Some(cell) => Err(SimError::BadCell { cell, cells }),
        None => Ok(()),
    }
}

/// Run `c` (synthesized from `s`) in the scripted world.
pub fn run_closed_loop(s: &mut Synthesis, c: &Controller, script: &Script, cfg: SimConfig) -> Result<RunReport, SimError> {
    check_cells(script)?;
    let wiring = Wiring::new(s)?;
    let monitor = TraceMonitor::new(&mut s.game);
    let mut world = World::new(&script.world);
    let mut rep = RunReport {
        schema: REPORT_SCHEMA.into(),
        spec: s.game.problem.name.clone(),
        config: cfg,
        steps: 0,
        deliveries: 0,
        pickups: 0,
        motion_actions: 0,
        emergency_steps: 0,
        motion_during_emergency: 0,
        cargo_overruns: 0,
        collisions: 0,
        guarantee_violations: 0,
        assumption_violations: 0,
        first_assumption_violation: None,
        unexcused_guarantee_violations: 0,
        halted: None,
        events: vec![],
    };
    let mut node: Option<usize> = None;
    let mut prev: Option<Vec<usize>> = None;
    for step in 0..cfg.steps {
        for p in script.at(step) {
            world.apply(p);
        }
        let reading = world.sense();
        let input = wiring.input(s, &reading);
        let matches = |values: &[usize]| input.iter().all(|&(i, x)| values[i] == x);
        let next = match node {
            None => c.initial.iter().copied().find(|&n| matches(&c.states[n].values)),
            Some(n) => c.successors(n).find(|t| matches(&t.input)).map(|t| t.to),
        };
        let Some(next) = next else {
            let shown: Vec<String> =
                input.iter().map(|&(i, x)| format!("{}={}", s.game.problem.vars[i].name, display_value(&s.game.problem.vars[i].domain, x))).collect();
            let why = format!("the controller has no move for input {}", shown.join(" "));
            rep.events.push(SimEvent { step, kind: "halt".into(), detail: why.clone() });
            rep.halted = Some(why);
            break;
        };
        node = Some(next);
        let values = c.states[next].values.clone();
        for v in monitor.check(&s.game, prev.as_deref(), &values) {
            let kind = match v.side {
                Side::Guarantee => {
                    rep.guarantee_violations += 1;
                    if rep.first_assumption_violation.is_none() {
                        rep.unexcused_guarantee_violations += 1;
                    }
                    "guarantee_violation"
                }
                Side::Assumption => {
                    rep.assumption_violations += 1;
                    rep.first_assumption_violation.get_or_insert(step);
                    "assumption_violation"
                }
            };
            rep.events.push(SimEvent { step, kind: kind.into(), detail: format!("{} ({})", v.label, v.kind) });
        }
        let (motion, lift) = wiring.command(s, &values);
        if motion != Motion::Stop {
            rep.motion_actions += 1;
        }
        if reading.emg_off {
            rep.emergency_steps += 1;
            if motion != Motion::Stop {
                rep.motion_during_emergency += 1;
            }
        }
        for h in world.act(motion, lift, cfg.lift_ticks) {
            let (kind, cell) = match h {
                Happening::Delivered { cell } => {
                    rep.deliveries += 1;
                    ("delivery", cell)
                }
                Happening::PickedUp { cell } => {
                    rep.pickups += 1;
                    ("pickup", cell)
                }
                Happening::CargoOverrun { cell } => {
                    rep.cargo_overruns += 1;
                    ("cargo_overrun", cell)
                }
                Happening::Collision { cell } => {
                    rep.collisions += 1;
                    ("collision", cell)
                }
            };
            rep.events.push(SimEvent { step, kind: kind.into(), detail: format!("cell {cell}") });
        }
        prev = Some(values);
        rep.steps = step + 1;
    }
    Ok(rep)
}

/// Lift duration matching a specification: timed if it senses acknowledgments.
pub fn default_lift_ticks(s: &Synthesis) -> usize {
    if s.game.problem.var_index("liftAck").is_some() {
        DEFAULT_LIFT_TICKS
    } else {
        0
    }
}
