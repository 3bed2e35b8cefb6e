//! Size and timing summary of one synthesis run.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::lang::{ConstraintKind, Side};
use crate::pipeline::{Strategy, Synthesis};
use crate::problem::{Gr1Problem, Player, VarKind};
use crate::separation::{check_well_separation, Blocked, Separation};

pub const REPORT_SCHEMA: &str = "gr1-report/1";

/// Source constraints of one side, not counting those that define manual
/// auxiliary variables.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ConstraintCounts {
    pub initial: usize,
    pub safety: usize,
    pub justice: usize,
    pub patterns: BTreeMap<String, usize>,
}

impl ConstraintCounts {
    pub fn of(p: &Gr1Problem, side: Side) -> ConstraintCounts {
        let mut c = ConstraintCounts::default();
        for o in p.origins.iter().filter(|o| o.side == side && !o.aux_definition) {
            match (o.kind, o.pattern) {
                (_, Some(id)) => *c.patterns.entry(id.name().to_string()).or_default() += 1,
                (ConstraintKind::Initial, None) => c.initial += 1,
                (ConstraintKind::Safety, None) => c.safety += 1,
                _ => c.justice += 1,
            }
        }
        c
    }

    pub fn pattern(&self, id: &str) -> usize {
        self.patterns.get(id).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bits {
    pub env: usize,
    pub sys: usize,
    /// Manual and pattern auxiliaries of both players.
    pub aux: usize,
    pub aux_manual: usize,
    pub aux_pattern: usize,
}

impl Bits {
    pub fn of(p: &Gr1Problem) -> Bits {
        let kind = |k| p.bits(Player::Env, k) + p.bits(Player::Sys, k);
        let (manual, pattern) = (kind(VarKind::ManualAux), kind(VarKind::PatternAux));
        Bits {
            env: p.bits(Player::Env, VarKind::Declared),
            sys: p.bits(Player::Sys, VarKind::Declared),
            aux: manual + pattern,
            aux_manual: manual,
            aux_pattern: pattern,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationSummary {
    pub well_separated: bool,
    pub blocked: Option<String>,
    pub blockable: Vec<String>,
}

impl From<&Separation> for SeparationSummary {
    fn from(s: &Separation) -> Self {
        match s {
            Separation::WellSeparated => SeparationSummary { well_separated: true, blocked: None, blockable: vec![] },
            Separation::SystemCanForceViolation { blocked, blockable, .. } => SeparationSummary {
                well_separated: false,
                blocked: Some(match blocked {
                    Blocked::Safety => "safety".into(),
                    Blocked::Justice { label, .. } => format!("justice `{label}`"),
                    Blocked::Combination => "combination of justices".into(),
                }),
                blockable: blockable.iter().map(|(_, l)| l.clone()).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecReport {
    pub schema: String,
    pub spec: String,
    pub file: String,
    pub verdict: String,
    pub bits: Bits,
    pub assumptions: ConstraintCounts,
    pub guarantees: ConstraintCounts,
    /// Number of environment justice requirements after compilation.
    pub m: usize,
    /// Number of system justice requirements after compilation.
    pub n: usize,
    pub strategy: String,
    pub states: usize,
    pub transitions: usize,
    /// Milliseconds.
    pub parse_ms: f64,
    pub compile_ms: f64,
    pub realizability_ms: f64,
    pub construction_ms: f64,
    pub separation: Option<SeparationSummary>,
}

impl SpecReport {
    /// Summarize `s`; checks well-separation of realizable specifications
    /// when `separation` is set.
    pub fn new(s: &mut Synthesis, strategy: &Strategy, separation: bool) -> SpecReport {
        let p = &s.game.problem;
        let transitions = match strategy {
            Strategy::Controller(c) => c.transitions.len(),
            Strategy::Counter(cs) => cs.states.iter().map(|st| st.successors.len()).sum(),
        };
        let ms = |d: std::time::Duration| d.as_secs_f64() * 1e3;
        let mut r = SpecReport {
            schema: REPORT_SCHEMA.into(),
            spec: p.name.clone(),
            file: s.file.clone(),
            verdict: format!("{:?}", s.verdict()),
            bits: Bits::of(p),
            assumptions: ConstraintCounts::of(p, Side::Assumption),
            guarantees: ConstraintCounts::of(p, Side::Guarantee),
            m: p.justice_count(Side::Assumption),
            n: p.justice_count(Side::Guarantee),
            strategy: strategy.kind().into(),
            states: strategy.num_states(),
            transitions,
            parse_ms: ms(s.timings.parse),
            compile_ms: ms(s.timings.compile),
            realizability_ms: ms(s.timings.realizability),
            construction_ms: ms(s.timings.construction),
            separation: None,
        };
        if separation && matches!(strategy, Strategy::Controller(_)) {
            r.separation = Some(SeparationSummary::from(&check_well_separation(&mut s.game)));
        }
        r
    }
}

fn counts(c: &ConstraintCounts) -> String {
    let mut parts = vec![format!("{} ini", c.initial), format!("{} safe", c.safety), format!("{} just", c.justice)];
    parts.extend(c.patterns.iter().map(|(id, k)| format!("{k}x{id}")));
    parts.join(", ")
}

impl fmt::Display for SpecReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({}): {}", self.spec, self.file, self.verdict)?;
        writeln!(
            f,
            "  bits        env {}  sys {}  aux {} ({} manual, {} pattern)",
            self.bits.env, self.bits.sys, self.bits.aux, self.bits.aux_manual, self.bits.aux_pattern
        )?;
        writeln!(f, "  assumptions {}", counts(&self.assumptions))?;
        writeln!(f, "  guarantees  {}", counts(&self.guarantees))?;
        writeln!(f, "  justice     m={} n={}", self.m, self.n)?;
        writeln!(f, "  {:<11} {} states, {} transitions", self.strategy, self.states, self.transitions)?;
        write!(
            f,
            "  time (ms)   parse {:.1}  compile {:.1}  realizability {:.1}  construction {:.1}",
            self.parse_ms, self.compile_ms, self.realizability_ms, self.construction_ms
        )?;
        if let Some(s) = &self.separation {
            match &s.blocked {
                None => write!(f, "\n  separation  well separated")?,
                Some(b) => write!(f, "\n  separation  system can force a violation ({b})")?,
            }
        }
        Ok(())
    }
}
