//! Step engine for one play-out session.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bdd::{Bdd, VarSet};
use crate::game::{cur_var, display_value, next_var, GameStructure};
use crate::lang::Side;
use crate::monitor::TraceMonitor;
pub use crate::monitor::ViolationRecord;
use crate::pipeline::Strategy;
use crate::problem::{Gr1Problem, NormKind, Player, VarKind};
use crate::solver::Verdict;

/// Maximum number of legal moves listed in a session view.
pub const LEGAL_MOVES_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// The human plays the environment against the synthesized controller.
    #[serde(rename = "human-env", alias = "HumanEnv_vs_Controller")]
    HumanEnv,
    /// The human plays the system against the counter-strategy.
    #[serde(rename = "human-sys", alias = "HumanSys_vs_CounterStrategy")]
    HumanSys,
    /// The human plays both sides; illegal moves are accepted and flagged.
    #[serde(rename = "free-play", alias = "FreePlay")]
    FreePlay,
}

impl Mode {
    fn movers(self) -> &'static [Player] {
        match self {
            Mode::HumanEnv => &[Player::Env],
            Mode::HumanSys => &[Player::Sys],
            Mode::FreePlay => &[Player::Env, Player::Sys],
        }
    }
}

/// Assignment of values to variables by name.
pub type Assignment = BTreeMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlayError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("`{0}` is not chosen by the human player in this mode")]
    NotYourVariable(String),
    #[error("`{value}` is not a value of `{var}`")]
    UnknownValue { var: String, value: String },
    #[error("no value given for `{0}`")]
    Missing(String),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("mode {mode:?} needs a {needs}, but `{artifact}` has none")]
    ModeUnavailable { mode: Mode, artifact: String, needs: &'static str },
    #[error("the play is over: {0}")]
    Finished(String),
}

impl PlayError {
    pub fn code(&self) -> &'static str {
        match self {
            PlayError::UnknownVariable(_)
            | PlayError::NotYourVariable(_)
            | PlayError::UnknownValue { .. }
            | PlayError::Missing(_) => "bad_assignment",
            PlayError::IllegalMove(_) => "illegal_move",
            PlayError::ModeUnavailable { .. } => "mode_unavailable",
            PlayError::Finished(_) => "finished",
        }
    }
}

/// A synthesized specification shared by sessions.
pub struct Artifact {
    pub name: String,
    pub problem: Gr1Problem,
    pub verdict: Verdict,
    pub strategy: Strategy,
    game: Mutex<ArtifactGame>,
}

struct ArtifactGame {
    g: GameStructure,
    /// Constraints that define auxiliary variables: initial and step parts.
    aux_init: Bdd,
    aux_step: Bdd,
    monitor: TraceMonitor,
}

impl Artifact {
    pub fn new(name: &str, mut g: GameStructure, verdict: Verdict, strategy: Strategy) -> Artifact {
        let (mut aux_init, mut aux_step) = (g.mgr.one(), g.mgr.one());
        for c in g.conjuncts.clone() {
            let nc = &g.problem.constraints[c.constraint];
            if nc.defines.is_empty() {
                continue;
            }
            match nc.kind {
                NormKind::Initial => aux_init = g.mgr.and(aux_init, c.bdd),
                NormKind::Safety => aux_step = g.mgr.and(aux_step, c.bdd),
                NormKind::Justice => {}
            }
        }
        let monitor = TraceMonitor::new(&mut g);
        Artifact {
            name: name.to_string(),
            problem: g.problem.clone(),
            verdict,
            strategy,
            game: Mutex::new(ArtifactGame { g, aux_init, aux_step, monitor }),
        }
    }

    fn assignment(&self, values: &[usize], filter: impl Fn(usize) -> bool) -> IndexMap<String, String> {
        self.problem
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| filter(*i))
            .map(|(i, v)| (v.name.clone(), display_value(&v.domain, values[i])))
            .collect()
    }

    fn declared(&self, players: &[Player]) -> Vec<usize> {
        (0..self.problem.vars.len())
            .filter(|&i| {
                let v = &self.problem.vars[i];
                v.kind == VarKind::Declared && players.contains(&v.player)
            })
            .collect()
    }

    /// Declared variables and manual auxiliaries, the part of a state shown to users.
    fn visible(&self, i: usize) -> bool {
        self.problem.vars[i].kind != VarKind::PatternAux
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reason {
    pub kind: String,
    pub constraint_label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    /// The values the human supplied for this step.
    pub moved: Assignment,
    pub assignment: IndexMap<String, String>,
    pub monitors: IndexMap<String, String>,
    pub annotation: Option<Reason>,
    pub violations: Vec<ViolationRecord>,
    /// The move broke a safety or initial constraint (free play only).
    pub illegal: bool,
    /// Labels of the justice requirements that hold in this state.
    pub satisfied: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JusticeScore {
    pub side: Side,
    pub label: String,
    pub hits: usize,
    pub last_step: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionView {
    pub schema: String,
    pub id: String,
    pub artifact: String,
    pub mode: Mode,
    pub steps: usize,
    pub state: Option<IndexMap<String, String>>,
    /// Environment values already fixed by the counter-strategy for the next step.
    pub pending_env: Option<IndexMap<String, String>>,
    pub legal_moves: Vec<IndexMap<String, String>>,
    pub legal_total: u128,
    pub last: Option<TraceStep>,
    pub scoreboard: Vec<JusticeScore>,
    pub finished: Option<String>,
}

pub struct Session {
    pub id: String,
    pub mode: Mode,
    artifact: Arc<Artifact>,
    state: Option<Vec<usize>>,
    /// Current strategy state (controller or counter-strategy), if any.
    node: Option<usize>,
    trace: Vec<TraceStep>,
    scoreboard: Vec<JusticeScore>,
}

impl Session {
    pub fn new(id: &str, artifact: Arc<Artifact>, mode: Mode) -> Result<Session, PlayError> {
        let needs = match (mode, &artifact.strategy) {
            (Mode::HumanEnv, Strategy::Counter(_)) => Some("controller"),
            (Mode::HumanSys, Strategy::Controller(_)) => Some("counter-strategy"),
            _ => None,
        };
        if let Some(needs) = needs {
            return Err(PlayError::ModeUnavailable { mode, artifact: artifact.name.clone(), needs });
        }
        let scoreboard = {
            let ag = artifact.game.lock().expect("artifact lock");
            let mk = |side, j: &crate::game::Justice| JusticeScore { side, label: j.label.clone(), hits: 0, last_step: None };
            ag.g.j_e.iter().map(|j| mk(Side::Assumption, j)).chain(ag.g.j_s.iter().map(|j| mk(Side::Guarantee, j))).collect()
        };
        Ok(Session { id: id.to_string(), mode, artifact, state: None, node: None, trace: vec![], scoreboard })
    }

    pub fn artifact(&self) -> &Arc<Artifact> {
        &self.artifact
    }

    pub fn trace(&self) -> &[TraceStep] {
        &self.trace
    }

    /// Current full state as value indices.
    pub fn state(&self) -> Option<&[usize]> {
        self.state.as_deref()
    }

    /// Replay the human moves of a recorded trace in a fresh session.
    pub fn replay(id: &str, artifact: Arc<Artifact>, mode: Mode, moves: &[Assignment]) -> Result<Session, PlayError> {
        let mut s = Session::new(id, artifact, mode)?;
        for m in moves {
            s.step(m)?;
        }
        Ok(s)
    }

    fn parse(&self, asg: &Assignment) -> Result<Vec<(usize, usize)>, PlayError> {
        let a = &self.artifact;
        let mine = a.declared(self.mode.movers());
        let mut out = vec![];
        for (name, value) in asg {
            let i = a.problem.var_index(name).ok_or_else(|| PlayError::UnknownVariable(name.clone()))?;
            if !mine.contains(&i) {
                return Err(PlayError::NotYourVariable(name.clone()));
            }
            let d = &a.problem.vars[i].domain;
            let x = (0..d.size())
                .find(|&x| display_value(d, x) == *value)
                .ok_or_else(|| PlayError::UnknownValue { var: name.clone(), value: value.clone() })?;
            out.push((i, x));
        }
        for &i in &mine {
            if !out.iter().any(|&(j, _)| j == i) {
                return Err(PlayError::Missing(a.problem.vars[i].name.clone()));
            }
        }
        Ok(out)
    }

    /// Apply one move of the human player.
    pub fn step(&mut self, asg: &Assignment) -> Result<&TraceStep, PlayError> {
        if let Some(reason) = self.finished() {
            return Err(PlayError::Finished(reason));
        }
        let chosen = self.parse(asg)?;
        let matches = |values: &[usize]| chosen.iter().all(|&(i, x)| values[i] == x);
        let artifact = self.artifact.clone();
        let (next, node, annotation, illegal) = match (&artifact.strategy, self.mode) {
            (Strategy::Controller(c), Mode::HumanEnv) => match self.node {
                None => {
                    let s = c.initial.iter().copied().find(|&s| matches(&c.states[s].values));
                    let s = s.ok_or_else(|| PlayError::IllegalMove("not an initial environment choice".into()))?;
                    (c.states[s].values.clone(), Some(s), None, false)
                }
                Some(n) => {
                    let t = c
                        .successors(n)
                        .find(|t| matches(&t.input))
                        .ok_or_else(|| PlayError::IllegalMove("the environment assumptions forbid this input".into()))?;
                    let reason = Reason {
                        kind: format!("{:?}", t.annotation.kind),
                        constraint_label: t.annotation.constraint_label.clone(),
                    };
                    (c.states[t.to].values.clone(), Some(t.to), Some(reason), false)
                }
            },
            (Strategy::Counter(cs), Mode::HumanSys) => {
                let candidates: Vec<usize> = match self.node {
                    None => cs.initial.clone(),
                    Some(n) => cs.states[n].successors.clone(),
                };
                let s = candidates
                    .into_iter()
                    .find(|&s| matches(&cs.states[s].values))
                    .ok_or_else(|| PlayError::IllegalMove("the guarantees forbid this reply".into()))?;
                let reason = self.node.and_then(|n| cs.states[n].annotation.as_ref()).map(|a| Reason {
                    kind: format!("{:?}", a.kind),
                    constraint_label: a.starved_label.clone(),
                });
                (cs.states[s].values.clone(), Some(s), reason, false)
            }
            (_, Mode::FreePlay) => {
                let next = self.complete(&chosen);
                let illegal = !self.legal(&next);
                (next, None, None, illegal)
            }
            _ => unreachable!("mode checked at session creation"),
        };
        let record = self.record(asg, next, annotation, illegal);
        self.node = node;
        self.trace.push(record);
        Ok(self.trace.last().expect("just pushed"))
    }

    /// Fill in auxiliary values for a free-play move.
    fn complete(&self, chosen: &[(usize, usize)]) -> Vec<usize> {
        let mut ag = self.artifact.game.lock().expect("artifact lock");
        let ArtifactGame { g, aux_init, aux_step, .. } = &mut *ag;
        let n = g.problem.vars.len();
        let primed = self.state.is_some();
        let mut b = match &self.state {
            None => *aux_init,
            Some(cur) => {
                let restricted = g.at_state(*aux_step, cur);
                g.mgr.exists(restricted, g.current)
            }
        };
        b = fix(g, b, chosen, primed);
        let aux: Vec<usize> = (0..n).filter(|&i| g.problem.vars[i].kind != VarKind::Declared).collect();
        let over = bit_set(g, &aux, primed);
        // keep only the aux bits, then pick
        let declared_bits = bit_set(g, &(0..n).filter(|i| !aux.contains(i)).collect::<Vec<_>>(), primed);
        let b = g.mgr.exists(b, declared_bits);
        let other = if primed { g.current } else { g.next };
        let b = g.mgr.exists(b, other);
        let mut values = g.pick_values(b, over, primed).unwrap_or_else(|| vec![0; n]);
        for &(i, x) in chosen {
            values[i] = x;
        }
        if let Some(cur) = &self.state {
            // aux values the definitions leave open keep their value
            if g.pick_values(b, over, primed).is_none() {
                for &i in &aux {
                    values[i] = cur[i];
                }
            }
        }
        values
    }

    fn legal(&self, next: &[usize]) -> bool {
        let ag = self.artifact.game.lock().expect("artifact lock");
        let g = &ag.g;
        match &self.state {
            None => g.holds(g.theta_e, next) && g.holds(g.theta_s, next),
            Some(cur) => g.holds_step(g.rho_e, cur, next) && g.holds_step(g.rho_s, cur, next),
        }
    }

    fn record(&mut self, moved: &Assignment, next: Vec<usize>, annotation: Option<Reason>, illegal: bool) -> TraceStep {
        let ag = self.artifact.game.lock().expect("artifact lock");
        let g = &ag.g;
        let step = self.trace.len();
        let violations = ag.monitor.check(g, self.state.as_deref(), &next);
        let mut satisfied = vec![];
        let justices = g.j_e.iter().chain(&g.j_s);
        for (score, j) in self.scoreboard.iter_mut().zip(justices) {
            if g.holds(j.bdd, &next) {
                score.hits += 1;
                score.last_step = Some(step);
                satisfied.push(j.label.clone());
            }
        }
        let a = &self.artifact;
        let rec = TraceStep {
            step,
            moved: moved.clone(),
            assignment: a.assignment(&next, |i| a.visible(i)),
            monitors: a.assignment(&next, |i| !a.visible(i)),
            annotation,
            violations,
            illegal,
            satisfied,
        };
        drop(ag);
        self.state = Some(next);
        rec
    }

    /// Why no further move is possible, if so.
    pub fn finished(&self) -> Option<String> {
        match (&self.artifact.strategy, self.mode) {
            (Strategy::Counter(cs), Mode::HumanSys) => match self.node {
                None if cs.initial.is_empty() => Some("no initial system choice satisfies the guarantees".into()),
                Some(n) if cs.states[n].successors.is_empty() => {
                    Some("the environment's move leaves the system no legal reply".into())
                }
                _ => None,
            },
            (Strategy::Controller(c), Mode::HumanEnv) => match self.node {
                Some(n) if c.out[n].is_empty() => Some("the environment has no legal move".into()),
                _ => None,
            },
            _ => None,
        }
    }

    /// Legal moves for the human player (capped) and their total number.
    pub fn legal_moves(&self) -> (Vec<IndexMap<String, String>>, u128) {
        let a = &self.artifact;
        let mine = a.declared(self.mode.movers());
        let project = |values: &[usize]| a.assignment(values, |i| mine.contains(&i));
        let mut out: Vec<IndexMap<String, String>> = vec![];
        let mut push = |m: IndexMap<String, String>| {
            if !out.contains(&m) {
                out.push(m);
            }
        };
        match (&a.strategy, self.mode) {
            (Strategy::Controller(c), Mode::HumanEnv) => match self.node {
                None => c.initial.iter().for_each(|&s| push(project(&c.states[s].values))),
                Some(n) => c.successors(n).for_each(|t| push(project(&t.input))),
            },
            (Strategy::Counter(cs), Mode::HumanSys) => {
                let list = match self.node {
                    None => &cs.initial,
                    Some(n) => &cs.states[n].successors,
                };
                list.iter().for_each(|&s| push(project(&cs.states[s].values)));
            }
            _ => {
                let mut ag = self.artifact.game.lock().expect("artifact lock");
                let g = &mut ag.g;
                let primed = self.state.is_some();
                let b = match &self.state {
                    None => g.mgr.and(g.theta_e, g.theta_s),
                    Some(cur) => {
                        let t = g.mgr.and(g.rho_e, g.rho_s);
                        let t = g.at_state(t, cur);
                        g.mgr.exists(t, g.current)
                    }
                };
                let n = g.problem.vars.len();
                let hidden = bit_set(g, &(0..n).filter(|i| !mine.contains(i)).collect::<Vec<_>>(), primed);
                let b = g.mgr.exists(b, hidden);
                let over = bit_set(g, &mine, primed);
                let total = g.mgr.sat_count(b, over);
                let all = g.all_values(b, over, primed);
                drop(ag);
                let moves = all.iter().take(LEGAL_MOVES_CAP).map(|v| project(v)).collect();
                return (moves, total);
            }
        }
        let total = out.len() as u128;
        out.truncate(LEGAL_MOVES_CAP);
        (out, total)
    }

    pub fn view(&self) -> SessionView {
        let a = &self.artifact;
        let (legal_moves, legal_total) = self.legal_moves();
        let pending_env = match (&a.strategy, self.mode, self.node) {
            (Strategy::Counter(cs), Mode::HumanSys, Some(n)) => cs.states[n]
                .env_move
                .as_ref()
                .map(|m| a.assignment(m, |i| a.visible(i) && a.problem.vars[i].player == Player::Env)),
            (Strategy::Counter(cs), Mode::HumanSys, None) => cs
                .initial
                .first()
                .map(|&s| a.assignment(&cs.states[s].values, |i| a.visible(i) && a.problem.vars[i].player == Player::Env)),
            _ => None,
        };
        SessionView {
            schema: super::SCHEMA.into(),
            id: self.id.clone(),
            artifact: a.name.clone(),
            mode: self.mode,
            steps: self.trace.len(),
            state: self.state.as_ref().map(|s| a.assignment(s, |i| a.visible(i))),
            pending_env,
            legal_moves,
            legal_total,
            last: self.trace.last().cloned(),
            scoreboard: self.scoreboard.clone(),
            finished: self.finished(),
        }
    }
}

fn bit_set(g: &GameStructure, vars: &[usize], primed: bool) -> VarSet {
    VarSet::from_vars(
        vars.iter()
            .flat_map(|&v| g.var_bits[v].iter().map(move |&b| if primed { next_var(b) } else { cur_var(b) })),
    )
}

/// Restrict `b` to the given variable values (current or next copy).
fn fix(g: &mut GameStructure, b: Bdd, values: &[(usize, usize)], primed: bool) -> Bdd {
    let mut asg = vec![None; (2 * g.num_bits) as usize];
    for &(v, val) in values {
        let bits = &g.var_bits[v];
        let n = bits.len();
        for (k, &bit) in bits.iter().enumerate() {
            let var = if primed { next_var(bit) } else { cur_var(bit) };
            asg[var as usize] = Some((val >> (n - 1 - k)) & 1 == 1);
        }
    }
    g.mgr.restrict(b, &asg)
}
