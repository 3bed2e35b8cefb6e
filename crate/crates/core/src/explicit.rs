//! Explicit-state GR(1) solver over enumerated value-level states. It shares
//! no code with the symbolic engine beyond name resolution and serves as an
//! independent oracle on small games.

use crate::eval::Compiled;
use crate::lang::ast::Side;
use crate::problem::{Gr1Problem, NormKind, Player};
use crate::solver::Verdict;

/// Largest state space (in bits of the binary encoding) the oracle accepts.
pub const MAX_ORACLE_BITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("state space of {0} bits exceeds the oracle limit of {MAX_ORACLE_BITS}")]
    TooLarge(usize),
    #[error("{0}")]
    Resolve(String),
}

type Set = Vec<bool>;

pub struct ExplicitGame {
    pub states: Vec<Vec<usize>>,
    /// For each state, the legal environment moves; each with the list of
    /// successor states reachable by a legal system reply.
    pub moves: Vec<Vec<Vec<usize>>>,
    pub theta_e: Set,
    pub theta_s: Set,
    pub j_e: Vec<Set>,
    pub j_s: Vec<Set>,
    env_vars: Vec<usize>,
}

fn all_states(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &k in sizes {
        out = out.into_iter().flat_map(|p| (0..k).map(move |v| [p.clone(), vec![v]].concat())).collect();
    }
    out
}

impl ExplicitGame {
    pub fn new(p: &Gr1Problem) -> Result<ExplicitGame, OracleError> {
        let bits = p.total_bits();
        if bits > MAX_ORACLE_BITS {
            return Err(OracleError::TooLarge(bits));
        }
        let sizes: Vec<usize> = p.vars.iter().map(|v| v.domain.size()).collect();
        let states = all_states(&sizes);
        let index = |s: &[usize]| s.iter().zip(&sizes).fold(0usize, |acc, (&v, &k)| acc * k + v);
        let env_vars: Vec<usize> = (0..p.vars.len()).filter(|&v| p.vars[v].player == Player::Env).collect();
        let sys_vars: Vec<usize> = (0..p.vars.len()).filter(|&v| p.vars[v].player == Player::Sys).collect();
        let compile = |side: Side, kind: NormKind| -> Result<Vec<Compiled>, OracleError> {
            p.constraints_of(side, kind)
                .map(|c| Compiled::new(&c.expr, p).map_err(OracleError::Resolve))
                .collect()
        };
        let (init_e, init_s) = (compile(Side::Assumption, NormKind::Initial)?, compile(Side::Guarantee, NormKind::Initial)?);
        let (safe_e, safe_s) = (compile(Side::Assumption, NormKind::Safety)?, compile(Side::Guarantee, NormKind::Safety)?);
        let (just_e, just_s) = (compile(Side::Assumption, NormKind::Justice)?, compile(Side::Guarantee, NormKind::Justice)?);
        let holds_all = |cs: &[Compiled], s: &[usize], n: Option<&[usize]>| cs.iter().all(|c| c.eval(s, n));
        let theta_e = states.iter().map(|s| holds_all(&init_e, s, None)).collect();
        let theta_s = states.iter().map(|s| holds_all(&init_s, s, None)).collect();
        let justice = |cs: &[Compiled]| -> Vec<Set> {
            if cs.is_empty() {
                vec![vec![true; states.len()]]
            } else {
                cs.iter().map(|c| states.iter().map(|s| c.eval(s, None)).collect()).collect()
            }
        };
        let (j_e, j_s) = (justice(&just_e), justice(&just_s));
        let env_parts = all_states(&env_vars.iter().map(|&v| sizes[v]).collect::<Vec<_>>());
        let sys_parts = all_states(&sys_vars.iter().map(|&v| sizes[v]).collect::<Vec<_>>());
        let mut moves = Vec::with_capacity(states.len());
        let mut next = vec![0usize; p.vars.len()];
        for s in &states {
            let mut per_state = vec![];
            for e in &env_parts {
                for (k, &v) in env_vars.iter().enumerate() {
                    next[v] = e[k];
                }
                for &v in &sys_vars {
                    next[v] = 0;
                }
                if !holds_all(&safe_e, s, Some(&next)) {
                    continue;
                }
                let mut succ = vec![];
                for sp in &sys_parts {
                    for (k, &v) in sys_vars.iter().enumerate() {
                        next[v] = sp[k];
                    }
                    if holds_all(&safe_s, s, Some(&next)) {
                        succ.push(index(&next));
                    }
                }
                per_state.push(succ);
            }
            moves.push(per_state);
        }
        Ok(ExplicitGame { states, moves, theta_e, theta_s, j_e, j_s, env_vars })
    }

    pub fn cpre(&self, target: &Set) -> Set {
        self.moves
            .iter()
            .map(|ms| ms.iter().all(|succ| succ.iter().any(|&t| target[t])))
            .collect()
    }

    pub fn epre(&self, target: &Set) -> Set {
        self.moves
            .iter()
            .map(|ms| ms.iter().any(|succ| succ.iter().all(|&t| target[t])))
            .collect()
    }

    /// System winning region of the GR(1) game.
    pub fn winning_region(&self) -> Set {
        let n = self.states.len();
        let or = |a: &Set, b: &Set| a.iter().zip(b).map(|(x, y)| *x || *y).collect::<Set>();
        let and = |a: &Set, b: &Set| a.iter().zip(b).map(|(x, y)| *x && *y).collect::<Set>();
        let mut z = vec![true; n];
        loop {
            let z_old = z.clone();
            for js in &self.j_s {
                let goal = and(js, &self.cpre(&z));
                let mut y = vec![false; n];
                loop {
                    let start = or(&goal, &self.cpre(&y));
                    let mut y_new = vec![false; n];
                    for je in &self.j_e {
                        let not_je: Set = je.iter().map(|b| !b).collect();
                        let mut x = z.clone();
                        loop {
                            let x_new = or(&start, &and(&not_je, &self.cpre(&x)));
                            if x_new == x {
                                break;
                            }
                            x = x_new;
                        }
                        y_new = or(&y_new, &x);
                    }
                    if y_new == y {
                        break;
                    }
                    y = y_new;
                }
                z = y;
            }
            if z == z_old {
                return z;
            }
        }
    }

    pub fn verdict(&self) -> Verdict {
        let z = self.winning_region();
        // every initial environment choice must admit a system initial choice in z
        let same_env = |a: &[usize], b: &[usize]| self.env_vars.iter().all(|&v| a[v] == b[v]);
        let ok = (0..self.states.len()).filter(|&s| self.theta_e[s]).all(|s| {
            (0..self.states.len()).any(|t| same_env(&self.states[s], &self.states[t]) && self.theta_s[t] && z[t])
        });
        if ok {
            Verdict::Realizable
        } else {
            Verdict::Unrealizable
        }
    }
}

pub fn explicit_oracle(p: &Gr1Problem) -> Result<Verdict, OracleError> {
    Ok(ExplicitGame::new(p)?.verdict())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;
    use crate::problem::compile;

    fn verdict(src: &str) -> Verdict {
        explicit_oracle(&compile(&parse(src).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(verdict("VAR s : boolean; GAR G (!s); GAR G F (s);"), Verdict::Unrealizable);
        assert_eq!(verdict("VARENV e : boolean; VAR s : boolean; GAR G F (s <-> e);"), Verdict::Realizable);
        assert_eq!(verdict("VARENV e : boolean; VAR s : boolean; ASM G (FALSE); GAR G F (FALSE);"), Verdict::Realizable);
    }
}
