//! Counter-strategy extraction from the environment's fixpoint memory.
//!
//! Memory is `(r, j, i)`: the rank `r` of the current state in the
//! environment's attractor layers, the system goal `j` being starved, and the
//! environment justice `i` being pursued next.

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::game::GameStructure;
use crate::problem::Player;
use crate::solver::EnvMemory;

/// (rank, starved guarantee, assumption being satisfied)
pub type Memory = (usize, usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CounterKind {
    /// The environment moves so that the system has no legal reply.
    ForceSafetyViolation,
    /// Move towards a lower rank while starving the goal.
    DescendRank,
    /// Visit the pursued environment justice while starving the goal.
    SatisfyEnvJustice,
    /// Approach the pursued environment justice while starving the goal.
    ApproachEnvJustice,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterAnnotation {
    pub kind: CounterKind,
    /// System justice being starved.
    pub starved: usize,
    pub starved_label: String,
    /// Environment justice pursued, when applicable.
    pub env_justice: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterState {
    pub values: Vec<usize>,
    pub memory: Memory,
    /// Environment part of the next state, chosen by the strategy.
    pub env_move: Option<Vec<usize>>,
    pub annotation: Option<CounterAnnotation>,
    /// One successor per legal system reply to `env_move`, in reply order.
    pub successors: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterStrategy {
    pub var_names: Vec<String>,
    pub states: Vec<CounterState>,
    pub initial: Vec<usize>,
    /// The chosen initial environment values leave the system no legal
    /// initial choice at all.
    pub initial_violation: bool,
}

impl CounterStrategy {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// The successor reached when the system answers with `reply`.
    pub fn step(&self, s: usize, reply: &[usize], sys_vars: &[usize]) -> Option<usize> {
        self.states[s].successors.iter().copied().find(|&t| sys_vars.iter().all(|&v| self.states[t].values[v] == reply[v]))
    }
}

/// Memory for a state entering the environment's attractor: its rank and
/// the first goal it can starve there.
fn entry_memory(g: &GameStructure, mem: &EnvMemory, values: &[usize]) -> Memory {
    let r = mem.rank(g, values).expect("state inside the environment winning region");
    let j = (0..g.j_s.len()).find(|&j| g.holds(mem.y[r][j], values)).expect("ranked state lies in some layer");
    (r, j, 0)
}

pub fn extract_counterstrategy(g: &mut GameStructure, mem: &EnvMemory) -> CounterStrategy {
    let m = g.j_e.len();
    let win = mem.win();
    let mut states: Vec<CounterState> = vec![];
    let mut index: FxHashMap<(Vec<usize>, Memory), usize> = FxHashMap::default();
    let mut intern = |values: Vec<usize>, memory, states: &mut Vec<CounterState>| -> usize {
        *index.entry((values.clone(), memory)).or_insert_with(|| {
            states.push(CounterState { values, memory, env_move: None, annotation: None, successors: vec![] });
            states.len() - 1
        })
    };

    // initial: smallest environment choice leaving no winning system answer
    let sys_wins = g.mgr.not(win);
    let sys_wins = g.mgr.and(g.theta_s, sys_wins);
    let sys_wins = g.mgr.exists(sys_wins, g.sys_current);
    let bad = g.mgr.not(sys_wins);
    let bad = g.mgr.and(g.theta_e, bad);
    let bad = g.mgr.exists(bad, g.sys_current);
    let env_choice = g.pick_values(bad, g.env_current, false);
    let mut initial = vec![];
    let mut initial_violation = false;
    if let Some(e) = env_choice {
        let ecube = g.player_bdd(&e, Player::Env, false);
        let inits = g.mgr.and(g.theta_s, ecube);
        let inits = g.mgr.and(inits, g.valid);
        let inits = g.mgr.exists(inits, g.env_current);
        let sys_inits = g.all_values(inits, g.sys_current, false);
        initial_violation = sys_inits.is_empty();
        for sv in sys_inits {
            let mut values = e.clone();
            g.merge(&mut values, &sv, Player::Sys);
            let memory = entry_memory(g, mem, &values);
            initial.push(intern(values, memory, &mut states));
        }
    }

    let mut k = 0;
    while k < states.len() {
        let values = states[k].values.clone();
        let (r, j, i) = states[k].memory;
        let env_here = g.at_state(g.rho_e, &values);
        let sys_here = g.at_state(g.rho_s, &values);
        // env moves after which every system reply lands in `target`
        let forcing = |g: &mut GameStructure, target| {
            let tp = g.prime(target);
            let out = g.mgr.not(tp);
            let escape = g.mgr.and_exists(sys_here, out, g.sys_next);
            let forced = g.mgr.not(escape);
            let c = g.mgr.and(env_here, forced);
            g.pick_values(c, g.env_next, true)
        };
        let lower = mem.z[r - 1];
        let x = &mem.x[r][j][i];
        let starved_label = g.j_s[j].label.clone();
        let annotate = |kind, env_justice| CounterAnnotation { kind, starved: j, starved_label: starved_label.clone(), env_justice };
        let (mv, annotation, next_i) = if let Some(mv) = forcing(g, lower) {
            let kind = if r == 1 { CounterKind::ForceSafetyViolation } else { CounterKind::DescendRank };
            (mv, annotate(kind, None), i)
        } else if let Some(mv) = g.holds(g.j_e[i].bdd, &values).then(|| forcing(g, mem.y[r][j])).flatten() {
            (mv, annotate(CounterKind::SatisfyEnvJustice, Some(i)), (i + 1) % m)
        } else {
            let kx = x.iter().position(|&b| g.holds(b, &values)).expect("state inside the pursued justice layer");
            let mv = forcing(g, x[kx - 1]).expect("layer below is forceable");
            (mv, annotate(CounterKind::ApproachEnvJustice, Some(i)), i)
        };
        let replies = g.at_next(sys_here, &mv, Player::Env);
        let mut succ = vec![];
        for sv in g.all_values(replies, g.sys_next, true) {
            let mut next = mv.clone();
            g.merge(&mut next, &sv, Player::Sys);
            let memory = if g.holds(lower, &next) { entry_memory(g, mem, &next) } else { (r, j, next_i) };
            succ.push(intern(next, memory, &mut states));
        }
        let mut env_move = mv;
        for v in g.player_vars(Player::Sys) {
            env_move[v] = 0;
        }
        let st = &mut states[k];
        st.env_move = Some(env_move);
        st.annotation = Some(annotation);
        st.successors = succ;
        k += 1;
    }
    CounterStrategy {
        var_names: g.problem.vars.iter().map(|v| v.name.clone()).collect(),
        states,
        initial,
        initial_violation,
    }
}
