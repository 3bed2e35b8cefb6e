//! Runtime check of concrete traces against the constraints of a game.

use serde::{Deserialize, Serialize};

use crate::bdd::Bdd;
use crate::eval::Compiled;
use crate::game::GameStructure;
use crate::lang::Side;
use crate::problem::NormKind;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub side: Side,
    pub label: String,
    /// `initial`, `safety` or `pattern` (a pattern monitor became violated).
    pub kind: String,
}

/// Violation predicates of the pattern monitors, encoded once.
pub struct TraceMonitor {
    patterns: Vec<(usize, Bdd)>,
}

impl TraceMonitor {
    pub fn new(g: &mut GameStructure) -> TraceMonitor {
        let mut patterns = vec![];
        for (i, o) in g.problem.origins.clone().iter().enumerate() {
            if let Some(e) = &o.violation {
                let c = Compiled::new(e, &g.problem).expect("monitor predicate compiles");
                patterns.push((i, g.encode(&c)));
            }
        }
        TraceMonitor { patterns }
    }

    /// Constraints broken by entering `next` (from `prev`, or initially).
    /// Each source constraint is reported once per step; pattern monitors
    /// are reported when they first become violated.
    pub fn check(&self, g: &GameStructure, prev: Option<&[usize]>, next: &[usize]) -> Vec<ViolationRecord> {
        let mut seen = vec![];
        let mut out = vec![];
        let mut report = |origin: usize, kind: &str, seen: &mut Vec<usize>| {
            if !seen.contains(&origin) {
                seen.push(origin);
                let o = &g.problem.origins[origin];
                out.push(ViolationRecord { side: o.side, label: o.label.clone(), kind: kind.into() });
            }
        };
        for c in &g.conjuncts {
            let nc = &g.problem.constraints[c.constraint];
            let broken = match (prev, nc.kind) {
                (None, NormKind::Initial) => !g.holds(c.bdd, next),
                (Some(cur), NormKind::Safety) => !g.holds_step(c.bdd, cur, next),
                _ => false,
            };
            if broken {
                let kind = if nc.kind == NormKind::Initial { "initial" } else { "safety" };
                report(nc.origin, kind, &mut seen);
            }
        }
        for &(origin, b) in &self.patterns {
            let before = prev.is_some_and(|cur| g.holds(b, cur));
            if !before && g.holds(b, next) {
                report(origin, "pattern", &mut seen);
            }
        }
        out
    }
}
