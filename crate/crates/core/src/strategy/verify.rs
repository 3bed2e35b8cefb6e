//! Independent checks of extracted strategies against the game: safety of
//! every move, totality on legal inputs, and fairness via SCC analysis.

use std::collections::BTreeSet;

use thiserror::Error;

use super::controller::{Controller, ReasonKind};
use super::counter::CounterStrategy;
use crate::game::GameStructure;
use crate::graph::{bfs_path, is_nontrivial, sccs};
use crate::problem::Player;
use crate::solver::{EnvMemory, FixpointMemory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("transition {0} violates the system safety guarantees")]
    UnsafeMove(usize),
    #[error("transition {0} is not a legal environment move")]
    IllegalInput(usize),
    #[error("state {state} has no transition for a legal environment input")]
    MissingInput { state: usize },
    #[error("state {state} has several transitions for one input")]
    Nondeterministic { state: usize },
    #[error("initial state {0} violates the initial conditions")]
    BadInitial(usize),
    #[error("an initial environment choice has no initial controller state")]
    UncoveredInitial,
    #[error("fair run starves goal `{goal}`: prefix {prefix:?}, cycle {cycle:?}")]
    Unfair { goal: String, prefix: Vec<usize>, cycle: Vec<usize> },
    #[error("transition {transition}: {message}")]
    Annotation { transition: usize, message: String },
}

/// Model-check the closed loop of `c` against `g`.
pub fn verify_controller(c: &Controller, g: &mut GameStructure) -> Result<(), Violation> {
    let env_vars = g.player_vars(Player::Env);
    let both = g.mgr.and(g.theta_e, g.theta_s);
    for &s in &c.initial {
        if !g.holds(both, &c.states[s].values) {
            return Err(Violation::BadInitial(s));
        }
    }
    let env_init = g.mgr.exists(g.theta_e, g.sys_current);
    for e in g.all_values(env_init, g.env_current, false) {
        if !c.initial.iter().any(|&s| env_vars.iter().all(|&v| c.states[s].values[v] == e[v])) {
            return Err(Violation::UncoveredInitial);
        }
    }
    for (k, t) in c.transitions.iter().enumerate() {
        let (from, to) = (&c.states[t.from].values, &c.states[t.to].values);
        if !g.holds_step(g.rho_e, from, to) {
            return Err(Violation::IllegalInput(k));
        }
        if !g.holds_step(g.rho_s, from, to) {
            return Err(Violation::UnsafeMove(k));
        }
    }
    for s in 0..c.num_states() {
        let legal = g.at_state(g.rho_e, &c.states[s].values);
        let wanted: BTreeSet<Vec<usize>> = g.all_values(legal, g.env_next, true).into_iter().collect();
        let got: Vec<Vec<usize>> = c.successors(s).map(|t| env_vars.iter().map(|&v| t.input[v]).collect()).collect();
        let got_set: BTreeSet<Vec<usize>> = got.iter().cloned().collect();
        if got_set.len() != got.len() {
            return Err(Violation::Nondeterministic { state: s });
        }
        let wanted: BTreeSet<Vec<usize>> = wanted.into_iter().map(|w| env_vars.iter().map(|&v| w[v]).collect()).collect();
        if wanted != got_set {
            return Err(Violation::MissingInput { state: s });
        }
    }
    // fairness: no cycle avoiding some J_s[j] may visit every J_e[i]
    let succ = |s: usize| c.successors(s).map(|t| t.to).collect::<Vec<_>>();
    let holds = |b, s: usize| g.holds(b, &c.states[s].values);
    let in_js: Vec<Vec<bool>> = g.j_s.iter().map(|j| (0..c.num_states()).map(|s| holds(j.bdd, s)).collect()).collect();
    let in_je: Vec<Vec<bool>> = g.j_e.iter().map(|j| (0..c.num_states()).map(|s| holds(j.bdd, s)).collect()).collect();
    for (j, js) in in_js.iter().enumerate() {
        let keep = |s: usize| !js[s];
        for comp in sccs(c.num_states(), &succ, &keep) {
            if !is_nontrivial(&comp, &succ) || !in_je.iter().all(|je| comp.iter().any(|&s| je[s])) {
                continue;
            }
            let (prefix, cycle) = lasso(&c.initial, &succ, &comp, &in_je, c.num_states());
            return Err(Violation::Unfair { goal: g.j_s[j].label.clone(), prefix, cycle });
        }
    }
    Ok(())
}

/// A lasso from `initial` into `comp` whose cycle meets every set in `reqs`.
pub(crate) fn lasso(
    initial: &[usize],
    succ: &dyn Fn(usize) -> Vec<usize>,
    comp: &[usize],
    reqs: &[Vec<bool>],
    n: usize,
) -> (Vec<usize>, Vec<usize>) {
    let mut inside = vec![false; n];
    comp.iter().for_each(|&s| inside[s] = true);
    let prefix = bfs_path(initial, succ, &|_| true, &|s| inside[s], false).expect("component reachable");
    let entry = *prefix.last().unwrap();
    let mut cycle = vec![entry];
    for r in reqs {
        let here = *cycle.last().unwrap();
        if r[here] {
            continue;
        }
        let seg = bfs_path(&[here], succ, &|s| inside[s], &|s| r[s], false).expect("inside component");
        cycle.extend(&seg[1..]);
    }
    let here = *cycle.last().unwrap();
    let back = bfs_path(&[here], succ, &|s| inside[s], &|s| s == entry, true).expect("cycle");
    cycle.extend(&back[1..]);
    cycle.pop();
    (prefix[..prefix.len() - 1].to_vec(), cycle)
}

/// Check every annotation against the fixpoint ranks it claims.
pub fn check_annotations(c: &Controller, g: &GameStructure, mem: &FixpointMemory) -> Result<(), Violation> {
    let rank = |j: usize, v: &[usize]| mem.y[j].iter().position(|&y| g.holds(y, v));
    for (k, t) in c.transitions.iter().enumerate() {
        let from = &c.states[t.from];
        let to = &c.states[t.to];
        let fail = |m: &str| Err(Violation::Annotation { transition: k, message: m.into() });
        let j = from.memory;
        let bound = match t.annotation.kind {
            ReasonKind::PreventEnvJustice => g.j_e.len(),
            _ => g.j_s.len(),
        };
        if t.annotation.justice >= bound {
            return fail("justice index out of range");
        }
        match t.annotation.kind {
            ReasonKind::GoalSatisfied => {
                if t.annotation.justice != j || !g.holds(g.j_s[j].bdd, &from.values) {
                    return fail("GoalSatisfied from a state outside the goal");
                }
                if to.memory != (j + 1) % g.j_s.len() {
                    return fail("GoalSatisfied without advancing the goal index");
                }
            }
            ReasonKind::ApproachGoal => {
                let (a, b) = (rank(j, &from.values), rank(j, &to.values));
                if to.memory != j || !matches!((a, b), (Some(a), Some(b)) if b < a) {
                    return fail("ApproachGoal does not decrease the rank");
                }
            }
            ReasonKind::PreventEnvJustice => {
                let i = t.annotation.justice;
                let Some(r) = rank(j, &from.values) else { return fail("source outside the winning region") };
                if g.holds(g.j_e[i].bdd, &from.values) {
                    return fail("PreventEnvJustice from a state satisfying that justice");
                }
                if to.memory != j || !g.holds(mem.x[j][r][i], &to.values) {
                    return fail("PreventEnvJustice leaves the justice-avoiding set");
                }
            }
        }
    }
    Ok(())
}

/// Check that every play consistent with a counter-strategy is won by the
/// environment: legal environment moves, and each infinite play visits all
/// environment justices while starving some system justice.
pub fn verify_counterstrategy(cs: &CounterStrategy, g: &mut GameStructure) -> Result<(), String> {
    let n = cs.states.len();
    for &s in &cs.initial {
        let v = &cs.states[s].values;
        if !g.holds(g.theta_e, v) {
            return Err(format!("initial state {s} violates the initial assumptions"));
        }
    }
    for (s, st) in cs.states.iter().enumerate() {
        for &t in &st.successors {
            let to = &cs.states[t].values;
            if !g.holds_step(g.rho_e, &st.values, to) {
                return Err(format!("move from state {s} to {t} violates the safety assumptions"));
            }
            if !g.holds_step(g.rho_s, &st.values, to) {
                return Err(format!("reply from state {s} to {t} is not a legal system move"));
            }
        }
        // every legal system reply to the chosen move must be present
        if let Some(input) = &st.env_move {
            let here = g.at_state(g.rho_s, &st.values);
            let replies = g.at_next(here, input, Player::Env);
            let count = g.all_values(replies, g.sys_next, true).len();
            if count != st.successors.len() {
                return Err(format!("state {s} covers {} of {count} system replies", st.successors.len()));
            }
        } else {
            return Err(format!("state {s} has no environment move"));
        }
    }
    let succ = |s: usize| cs.states[s].successors.clone();
    for (i, je) in g.j_e.iter().enumerate() {
        let keep = |s: usize| !g.holds(je.bdd, &cs.states[s].values);
        if let Some(comp) = sccs(n, &succ, &keep).into_iter().find(|c| is_nontrivial(c, &succ)) {
            return Err(format!("a play avoids environment justice {i} forever (states {comp:?})"));
        }
    }
    let in_js: Vec<Vec<bool>> =
        g.j_s.iter().map(|j| (0..n).map(|s| g.holds(j.bdd, &cs.states[s].values)).collect()).collect();
    for comp in sccs(n, &succ, &|_| true) {
        if is_nontrivial(&comp, &succ) && in_js.iter().all(|js| comp.iter().any(|&s| js[s])) {
            return Err(format!("a play satisfies every system justice (states {comp:?})"));
        }
    }
    Ok(())
}

/// Check the counter-strategy's rank bookkeeping against the dual memory.
pub fn check_counter_memory(cs: &CounterStrategy, g: &GameStructure, mem: &EnvMemory) -> Result<(), String> {
    for (s, st) in cs.states.iter().enumerate() {
        let (r, j, _) = st.memory;
        if r == 0 || !g.holds(mem.z[r], &st.values) {
            return Err(format!("state {s} is outside its rank {r}"));
        }
        if !g.holds(mem.y[r][j], &st.values) && !g.holds(mem.x[r][j][st.memory.2].last().copied().unwrap(), &st.values) {
            return Err(format!("state {s} is outside the sets of its memory"));
        }
    }
    Ok(())
}
