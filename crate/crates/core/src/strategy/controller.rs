//! Controller extraction from the system fixpoint memory.

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::bdd::Bdd;
use crate::game::GameStructure;
use crate::problem::Player;
use crate::solver::FixpointMemory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReasonKind {
    GoalSatisfied,
    ApproachGoal,
    PreventEnvJustice,
}

/// Why the controller made a move: the justice goal it satisfied or
/// approached, or the environment justice it keeps the environment from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub kind: ReasonKind,
    /// Index into `J_s` (goal kinds) or `J_e` (`PreventEnvJustice`).
    pub justice: usize,
    pub constraint_label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControllerState {
    /// One value index per problem variable.
    pub values: Vec<usize>,
    /// Index of the system justice goal currently pursued.
    pub memory: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transition {
    pub from: usize,
    /// Environment part of the next state (full-length vector, system entries 0).
    pub input: Vec<usize>,
    pub to: usize,
    pub annotation: Annotation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Controller {
    pub var_names: Vec<String>,
    pub states: Vec<ControllerState>,
    pub initial: Vec<usize>,
    pub transitions: Vec<Transition>,
    /// `out[s]`: indices of the transitions leaving state `s`.
    pub out: Vec<Vec<usize>>,
}

impl Controller {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn successors(&self, s: usize) -> impl Iterator<Item = &Transition> {
        self.out[s].iter().map(move |&t| &self.transitions[t])
    }

    /// The transition taken from `s` on the given environment input.
    pub fn step(&self, s: usize, input: &[usize], env_vars: &[usize]) -> Option<&Transition> {
        self.successors(s).find(|t| env_vars.iter().all(|&v| t.input[v] == input[v]))
    }

    pub(crate) fn rebuild_index(&mut self) {
        self.out = vec![vec![]; self.states.len()];
        for (k, t) in self.transitions.iter().enumerate() {
            self.out[t.from].push(k);
        }
    }
}

/// Rank of a state in the attractor to goal `j`: smallest `r` with the state in `y[j][r]`.
fn y_rank(g: &GameStructure, mem: &FixpointMemory, j: usize, values: &[usize]) -> Option<usize> {
    mem.y[j].iter().position(|&y| g.holds(y, values))
}

struct Primed {
    z: Bdd,
    y: Vec<Vec<Bdd>>,
    x: Vec<Vec<Vec<Bdd>>>,
}

/// Extract the reachable part of the memory-`j` controller.
pub fn extract_controller(g: &mut GameStructure, mem: &FixpointMemory) -> Controller {
    let n = g.j_s.len();
    let primed = Primed {
        z: g.prime(mem.z),
        y: mem.y.iter().map(|ys| ys.iter().map(|&b| g.prime(b)).collect()).collect(),
        x: mem.x.iter().map(|xs| xs.iter().map(|xi| xi.iter().map(|&b| g.prime(b)).collect()).collect()).collect(),
    };
    let mut states: Vec<ControllerState> = vec![];
    let mut index: FxHashMap<(Vec<usize>, usize), usize> = FxHashMap::default();
    let mut intern = |st: ControllerState, states: &mut Vec<ControllerState>| -> usize {
        *index.entry((st.values.clone(), st.memory)).or_insert_with(|| {
            states.push(st);
            states.len() - 1
        })
    };

    // initial states: each environment choice gets the smallest winning system choice
    let env_init = g.mgr.exists(g.theta_e, g.sys_current);
    let mut initial = vec![];
    for e in g.all_values(env_init, g.env_current, false) {
        let ecube = g.player_bdd(&e, Player::Env, false);
        let ok = g.mgr.and(g.theta_s, mem.z);
        let ok = g.mgr.and(ok, ecube);
        let ok = g.mgr.and(ok, g.theta_e);
        let ok = g.mgr.exists(ok, g.env_current);
        if let Some(sv) = g.pick_values(ok, g.sys_current, false) {
            let mut values = e.clone();
            g.merge(&mut values, &sv, Player::Sys);
            initial.push(intern(ControllerState { values, memory: 0 }, &mut states));
        }
    }
    initial.sort_unstable();
    initial.dedup();

    let mut transitions = vec![];
    let mut k = 0;
    while k < states.len() {
        let ControllerState { values, memory: j } = states[k].clone();
        let env_moves = g.at_state(g.rho_e, &values);
        let sys_here = g.at_state(g.rho_s, &values);
        let in_goal = g.holds(g.j_s[j].bdd, &values);
        let rank = y_rank(g, mem, j, &values).expect("controller state inside the winning region");
        // environment justice to hold off if no lower rank is reachable
        let hold = (0..g.j_e.len())
            .find(|&i| g.holds(mem.x[j][rank][i], &values) && !g.holds(g.j_e[i].bdd, &values));
        for input in g.all_values(env_moves, g.env_next, true) {
            let replies = g.at_next(sys_here, &input, Player::Env);
            let reply_into = |g: &mut GameStructure, target: Bdd| {
                let t = g.at_next(target, &input, Player::Env);
                let c = g.mgr.and(replies, t);
                g.pick_values(c, g.sys_next, true)
            };
            let mut chosen = None;
            if in_goal {
                chosen = reply_into(g, primed.z).map(|v| (v, (j + 1) % n, ReasonKind::GoalSatisfied, j));
            }
            if chosen.is_none() {
                for q in 0..rank {
                    if let Some(v) = reply_into(g, primed.y[j][q]) {
                        chosen = Some((v, j, ReasonKind::ApproachGoal, j));
                        break;
                    }
                }
            }
            if chosen.is_none() {
                let i = hold.expect("state outside the goal keeps some environment justice away");
                let v = reply_into(g, primed.x[j][rank][i]).expect("reply inside the justice-avoiding set");
                chosen = Some((v, j, ReasonKind::PreventEnvJustice, i));
            }
            let (sv, memory, kind, justice) = chosen.unwrap();
            let mut next = input.clone();
            g.merge(&mut next, &sv, Player::Sys);
            let label = match kind {
                ReasonKind::PreventEnvJustice => g.j_e[justice].label.clone(),
                _ => g.j_s[justice].label.clone(),
            };
            let to = intern(ControllerState { values: next, memory }, &mut states);
            let mut input_env = input;
            for v in g.player_vars(Player::Sys) {
                input_env[v] = 0;
            }
            transitions.push(Transition {
                from: k,
                input: input_env,
                to,
                annotation: Annotation { kind, justice, constraint_label: label },
            });
        }
        k += 1;
    }
    let mut c = Controller {
        var_names: g.problem.vars.iter().map(|v| v.name.clone()).collect(),
        states,
        initial,
        transitions,
        out: vec![],
    };
    c.rebuild_index();
    c
}
