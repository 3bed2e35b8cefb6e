//! Well-separation: can the system, while respecting its own safety, force
//! the environment to violate its assumptions from some reachable state?

use crate::bdd::Bdd;
use crate::eval::Compiled;
use crate::game::GameStructure;
use crate::lang::Side;

/// Which assumptions the system can force into violation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Blocked {
    /// The environment cannot keep its safety assumptions.
    Safety,
    /// The system can keep this environment justice from recurring.
    Justice { index: usize, label: String },
    /// Each justice alone can be met, but not all of them together.
    Combination,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Separation {
    WellSeparated,
    SystemCanForceViolation {
        /// A reachable state from which the system wins against the assumptions.
        witness: Vec<(String, String)>,
        blocked: Blocked,
        /// How the system does it, in words.
        sketch: String,
        /// Every environment justice the system can keep from recurring
        /// from some reachable state, as (index, label).
        blockable: Vec<(usize, String)>,
    },
}

impl Separation {
    pub fn is_well_separated(&self) -> bool {
        matches!(self, Separation::WellSeparated)
    }
}

/// States from which the environment can satisfy all its justice
/// requirements while keeping its safety, whatever legal moves the system makes.
fn env_can_comply(g: &mut GameStructure, justice: &[Bdd]) -> Bdd {
    let mut z = g.mgr.one();
    loop {
        let ez = g.epre(z);
        let mut z_new = g.mgr.one();
        for &j in justice {
            let goal = g.mgr.and(j, ez);
            let mut y = g.mgr.zero();
            loop {
                let ey = g.epre(y);
                let y_new = g.mgr.or(goal, ey);
                if y_new == y {
                    break;
                }
                y = y_new;
            }
            z_new = g.mgr.and(z_new, y);
        }
        if z_new == z {
            return z;
        }
        z = z_new;
    }
}

/// States in which some assumption monitor records that the environment has
/// already broken its pattern. The environment gets there on its own.
fn env_already_violated(g: &mut GameStructure) -> Bdd {
    let mut out = g.mgr.zero();
    let exprs: Vec<_> = g
        .problem
        .origins
        .iter()
        .filter(|o| o.side == Side::Assumption)
        .filter_map(|o| o.violation.clone())
        .collect();
    for e in exprs {
        let c = Compiled::new(&e, &g.problem).expect("monitor predicate compiles");
        let b = g.encode(&c);
        out = g.mgr.or(out, b);
    }
    out
}

/// Only states the play can reach while the environment has not yet broken
/// an assumption pattern by itself are considered.
pub fn check_well_separation(g: &mut GameStructure) -> Separation {
    let all: Vec<Bdd> = g.j_e.iter().map(|j| j.bdd).collect();
    let comply = env_can_comply(g, &all);
    let violated = env_already_violated(g);
    let intact = g.mgr.not(violated);
    let reach = g.reachable_within(intact);
    let not_comply = g.mgr.not(comply);
    let bad = g.mgr.and(reach, not_comply);
    let Some(state) = g.pick_values(bad, g.current, false) else { return Separation::WellSeparated };
    let mut blockable = vec![];
    for (i, &j) in all.iter().enumerate() {
        let single = env_can_comply(g, &[j]);
        let out = g.mgr.not(single);
        if !g.mgr.and(reach, out).is_false() {
            blockable.push((i, g.j_e[i].label.clone()));
        }
    }
    let safe = env_can_comply(g, &[]);
    let blocked = if !g.holds(safe, &state) {
        Blocked::Safety
    } else {
        (0..all.len())
            .find(|&i| {
                let single = env_can_comply(g, &[all[i]]);
                !g.holds(single, &state)
            })
            .map(|index| Blocked::Justice { index, label: g.j_e[index].label.clone() })
            .unwrap_or(Blocked::Combination)
    };
    let sketch = match &blocked {
        Blocked::Safety => "the system can steer into a state where every environment move breaks a safety assumption".into(),
        Blocked::Justice { label, .. } => {
            format!("the system can keep the play forever outside the states satisfying `{label}`")
        }
        Blocked::Combination => "the system can play the environment justices off against each other".into(),
    };
    Separation::SystemCanForceViolation { witness: g.show(&state), blocked, sketch, blockable }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;
    use crate::problem::compile;

    fn game(src: &str) -> GameStructure {
        GameStructure::build(compile(&parse(src).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn unconstrained_environment_is_well_separated() {
        let mut g = game("VARENV e : boolean; VAR s : boolean; GAR G F (s);");
        assert!(check_well_separation(&mut g).is_well_separated());
    }

    #[test]
    fn system_can_block_a_response() {
        // the environment may only raise e while s holds; the system never sets s
        let mut g = game(
            "VARENV e : boolean; VAR s : boolean;
             ASM !e; ASM G (next(e) -> s); ASM G F (e);",
        );
        match check_well_separation(&mut g) {
            Separation::SystemCanForceViolation { blocked: Blocked::Justice { index: 0, .. }, .. } => {}
            other => panic!("{other:?}"),
        }
    }
}
