//! A ring of cells the forklift drives around, with stations, pallets and
//! obstacles, and a script of perturbations applied during a run.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Obstacle {
    #[default]
    None,
    /// Seen by the distance sensor.
    High,
    /// Only seen by the cargo sensor.
    Low,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Cell {
    pub station: bool,
    /// Number of pallets on the ground.
    pub cargo: u32,
    pub obstacle: Obstacle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Heading {
    Forward,
    Backward,
}

impl Heading {
    fn flip(self) -> Heading {
        match self {
            Heading::Forward => Heading::Backward,
            Heading::Backward => Heading::Forward,
        }
    }
}

/// Initial layout of a world.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub cells: usize,
    pub stations: Vec<usize>,
    #[serde(default)]
    pub cargo: Vec<usize>,
    #[serde(default)]
    pub obstacles: Vec<(usize, Obstacle)>,
    #[serde(default)]
    pub start: usize,
    #[serde(default = "forward")]
    pub heading: Heading,
}

fn forward() -> Heading {
    Heading::Forward
}

/// Something the script changes at the start of a step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Perturbation {
    /// Press (`true`) or release the emergency switch.
    Emergency { on: bool },
    PlaceCargo { cell: usize },
    RemoveCargo { cell: usize },
    SetObstacle { cell: usize, obstacle: Obstacle },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptEvent {
    pub step: usize,
    #[serde(flatten)]
    pub change: Perturbation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Script {
    pub world: Layout,
    #[serde(default)]
    pub events: Vec<ScriptEvent>,
}

impl Script {
    pub fn from_json(text: &str) -> Result<Script, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn at(&self, step: usize) -> impl Iterator<Item = &Perturbation> {
        self.events.iter().filter(move |e| e.step == step).map(|e| &e.change)
    }
}

/// Scripts shipped with the crate.
pub mod scripts {
    /// Two stations, one pallet, no obstacles.
    pub const BENIGN: &str = include_str!("../../scripts/benign.json");
    /// The benign world with the emergency switch held for 300 steps.
    pub const EMERGENCY: &str = include_str!("../../scripts/emergency.json");
    /// Low and high obstacles appearing and disappearing along the ring.
    pub const OBSTACLES: &str = include_str!("../../scripts/obstacles.json");

    pub fn named(name: &str) -> Option<&'static str> {
        match name {
            "benign" => Some(BENIGN),
            "emergency" => Some(EMERGENCY),
            "obstacles" => Some(OBSTACLES),
            _ => None,
        }
    }
}

/// Motor command as executed by the drive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Motion {
    Stop,
    Forward,
    Backward,
    Turn,
    /// Wheels disagree without forming a turn; the robot wobbles in place.
    Wobble,
}

impl Motion {
    pub fn from_wheels(left: &str, right: &str) -> Motion {
        match (left, right) {
            ("STOP", "STOP") => Motion::Stop,
            ("FWD", "FWD") => Motion::Forward,
            ("BWD", "BWD") => Motion::Backward,
            ("FWD", "BWD") | ("BWD", "FWD") => Motion::Turn,
            _ => Motion::Wobble,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftOp {
    Lift,
    Drop,
}

/// What the sensors report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reading {
    pub station: bool,
    pub emg_off: bool,
    pub dist_blocked: bool,
    pub cargo_blocked: bool,
    pub lift_ack: bool,
}

/// Something physical worth reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Happening {
    Delivered { cell: usize },
    PickedUp { cell: usize },
    /// The robot drove into a cell with a pallet on the ground.
    CargoOverrun { cell: usize },
    /// The robot drove into a high obstacle.
    Collision { cell: usize },
}

#[derive(Debug, Clone)]
pub struct World {
    pub cells: Vec<Cell>,
    pub pos: usize,
    pub heading: Heading,
    pub emg_off: bool,
    /// A pallet is on the fork.
    pub carrying: bool,
    /// Lift operation in progress and the ticks left until it completes.
    pub pending: Option<(LiftOp, usize)>,
    ack: bool,
}

impl World {
    pub fn new(l: &Layout) -> World {
        let mut cells = vec![Cell::default(); l.cells];
        for &s in &l.stations {
            cells[s].station = true;
        }
        for &c in &l.cargo {
            cells[c].cargo += 1;
        }
        for &(c, o) in &l.obstacles {
            cells[c].obstacle = o;
        }
        World { cells, pos: l.start, heading: l.heading, emg_off: false, carrying: false, pending: None, ack: false }
    }

    pub fn apply(&mut self, p: &Perturbation) {
        match *p {
            Perturbation::Emergency { on } => self.emg_off = on,
            Perturbation::PlaceCargo { cell } => self.cells[cell].cargo += 1,
            Perturbation::RemoveCargo { cell } => self.cells[cell].cargo = self.cells[cell].cargo.saturating_sub(1),
            Perturbation::SetObstacle { cell, obstacle } => self.cells[cell].obstacle = obstacle,
        }
    }

    fn step_from(&self, pos: usize, h: Heading) -> usize {
        let n = self.cells.len();
        match h {
            Heading::Forward => (pos + 1) % n,
            Heading::Backward => (pos + n - 1) % n,
        }
    }

    /// The cell in front of the forks.
    pub fn ahead(&self) -> usize {
        self.step_from(self.pos, self.heading)
    }

    pub fn sense(&self) -> Reading {
        let next = &self.cells[self.ahead()];
        Reading {
            station: self.cells[self.pos].station,
            emg_off: self.emg_off,
            dist_blocked: next.obstacle == Obstacle::High,
            cargo_blocked: next.cargo > 0 || next.obstacle == Obstacle::Low,
            lift_ack: self.ack,
        }
    }

    /// Execute one command. `duration` is the number of ticks a lift
    /// operation takes; 0 completes it before the next reading.
    pub fn act(&mut self, motion: Motion, lift: Option<LiftOp>, duration: usize) -> Vec<Happening> {
        let mut out = vec![];
        self.ack = false;
        let target = match motion {
            Motion::Forward => Some(self.ahead()),
            Motion::Backward => Some(self.step_from(self.pos, self.heading.flip())),
            Motion::Turn => {
                self.heading = self.heading.flip();
                None
            }
            Motion::Stop | Motion::Wobble => None,
        };
        if let Some(t) = target {
            match self.cells[t].obstacle {
                Obstacle::High => out.push(Happening::Collision { cell: t }),
                _ => {
                    if self.cells[t].cargo > 0 {
                        out.push(Happening::CargoOverrun { cell: t });
                    }
                    self.pos = t;
                }
            }
        }
        if let (Some(op), None) = (lift, self.pending) {
            self.pending = Some((op, duration));
        }
        if let Some((op, left)) = self.pending {
            if left <= 1 {
                self.pending = None;
                self.ack = duration > 0;
                out.extend(self.finish(op));
            } else {
                self.pending = Some((op, left - 1));
            }
        }
        out
    }

    fn finish(&mut self, op: LiftOp) -> Option<Happening> {
        let a = self.ahead();
        match op {
            LiftOp::Lift if !self.carrying && self.cells[a].cargo > 0 => {
                self.cells[a].cargo -= 1;
                self.carrying = true;
                Some(Happening::PickedUp { cell: a })
            }
            LiftOp::Drop if self.carrying => {
                self.cells[a].cargo += 1;
                self.carrying = false;
                self.cells[self.pos].station.then_some(Happening::Delivered { cell: self.pos })
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> World {
        World::new(&Layout { cells: 4, stations: vec![0], cargo: vec![1], obstacles: vec![(3, Obstacle::High)], start: 0, heading: Heading::Forward })
    }

    #[test]
    fn sensing_looks_ahead() {
        let mut w = ring();
        let r = w.sense();
        assert!(r.station && r.cargo_blocked && !r.dist_blocked);
        w.act(Motion::Turn, None, 0);
        let r = w.sense();
        assert!(r.dist_blocked && !r.cargo_blocked);
    }

    #[test]
    fn instant_and_timed_lift() {
        let mut w = ring();
        assert_eq!(w.act(Motion::Stop, Some(LiftOp::Lift), 0), vec![Happening::PickedUp { cell: 1 }]);
        assert!(w.carrying && !w.sense().lift_ack);

        let mut w = ring();
        assert!(w.act(Motion::Stop, Some(LiftOp::Lift), 3).is_empty());
        assert!(w.act(Motion::Stop, None, 3).is_empty());
        assert!(!w.sense().lift_ack);
        assert_eq!(w.act(Motion::Stop, None, 3), vec![Happening::PickedUp { cell: 1 }]);
        assert!(w.sense().lift_ack);
        w.act(Motion::Stop, None, 3);
        assert!(!w.sense().lift_ack);
    }

    #[test]
    fn driving_into_a_pallet_is_an_overrun() {
        let mut w = ring();
        assert_eq!(w.act(Motion::Forward, None, 0), vec![Happening::CargoOverrun { cell: 1 }]);
        w.act(Motion::Turn, None, 0);
        w.act(Motion::Forward, None, 0);
        assert_eq!(w.act(Motion::Forward, None, 0), vec![Happening::Collision { cell: 3 }]);
        assert_eq!(w.pos, 0);
    }
}
