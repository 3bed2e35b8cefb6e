//! GR(1) realizability via the three-nested fixpoint, and its dual for the
//! environment.

use crate::bdd::Bdd;
use crate::game::GameStructure;

/// Intermediate sets of the system fixpoint, sufficient for strategy extraction.
#[derive(Debug, Clone)]
pub struct FixpointMemory {
    pub z: Bdd,
    /// `y[j][r]`: increasing approximations of the attractor to goal `j`.
    pub y: Vec<Vec<Bdd>>,
    /// `x[j][r][i]`: the greatest fixpoint for environment justice `i` at rank `r`.
    pub x: Vec<Vec<Vec<Bdd>>>,
}

/// Intermediate sets of the environment's fixpoint (complement of `Z`).
#[derive(Debug, Clone)]
pub struct EnvMemory {
    /// `z[0]` is empty; `z[r]` grows with `r`; the last entry is the environment winning region.
    pub z: Vec<Bdd>,
    /// `y[r][j]` for `r >= 1` (`y[0]` is empty).
    pub y: Vec<Vec<Bdd>>,
    /// `x[r][j][i][k]`: increasing approximations, `x[r][j][i][0]` empty.
    pub x: Vec<Vec<Vec<Vec<Bdd>>>>,
}

impl EnvMemory {
    pub fn win(&self) -> Bdd {
        *self.z.last().expect("non-empty")
    }

    /// Smallest `r` with `state ∈ z[r]`.
    pub fn rank(&self, g: &GameStructure, values: &[usize]) -> Option<usize> {
        (1..self.z.len()).find(|&r| g.holds(self.z[r], values))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Realizable,
    Unrealizable,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub verdict: Verdict,
    pub sys: FixpointMemory,
    /// Present exactly when the verdict is `Unrealizable`.
    pub env: Option<EnvMemory>,
    pub iterations: usize,
}

/// Compute the system winning region with memory.
pub fn solve_sys(g: &mut GameStructure) -> (FixpointMemory, usize) {
    let n = g.j_s.len();
    let m = g.j_e.len();
    let mut z = g.mgr.one();
    let mut ys = vec![vec![]; n];
    let mut xs = vec![vec![]; n];
    let mut iterations = 0;
    loop {
        let z_old = z;
        for j in 0..n {
            iterations += 1;
            let cz = g.cpre(z);
            let goal = g.mgr.and(g.j_s[j].bdd, cz);
            let mut y = g.mgr.zero();
            let mut ylist = vec![];
            let mut xlist = vec![];
            loop {
                let cy = g.cpre(y);
                let start = g.mgr.or(goal, cy);
                let mut xr = Vec::with_capacity(m);
                let mut y_new = g.mgr.zero();
                for i in 0..m {
                    let not_je = g.mgr.not(g.j_e[i].bdd);
                    let mut x = z;
                    loop {
                        let cx = g.cpre(x);
                        let stay = g.mgr.and(not_je, cx);
                        let x_new = g.mgr.or(start, stay);
                        if x_new == x {
                            break;
                        }
                        x = x_new;
                    }
                    xr.push(x);
                    y_new = g.mgr.or(y_new, x);
                }
                ylist.push(y_new);
                xlist.push(xr);
                if y_new == y {
                    break;
                }
                y = y_new;
            }
            z = y;
            ys[j] = ylist;
            xs[j] = xlist;
        }
        if z == z_old {
            break;
        }
    }
    (FixpointMemory { z, y: ys, x: xs }, iterations)
}

/// Environment winning region: some system goal `j` is eventually avoided
/// forever while every environment goal recurs, or the system is forced
/// into a deadlock.
pub fn solve_env(g: &mut GameStructure) -> EnvMemory {
    let n = g.j_s.len();
    let m = g.j_e.len();
    let zero = g.mgr.zero();
    let mut zs = vec![zero];
    let mut ys = vec![vec![]];
    let mut xs = vec![vec![]];
    loop {
        let z = *zs.last().unwrap();
        let ez = g.epre(z);
        let mut z_new = z;
        let mut yr = Vec::with_capacity(n);
        let mut xr = Vec::with_capacity(n);
        for j in 0..n {
            let not_js = g.mgr.not(g.j_s[j].bdd);
            let mut y = g.mgr.one();
            let mut xj;
            loop {
                let ey = g.epre(y);
                xj = Vec::with_capacity(m);
                let mut y_new = g.mgr.one();
                for i in 0..m {
                    let recur = g.mgr.and(g.j_e[i].bdd, ey);
                    let mut x = g.mgr.zero();
                    let mut ranks = vec![x];
                    loop {
                        let ex = g.epre(x);
                        let inner = g.mgr.or(recur, ex);
                        let inner = g.mgr.and(not_js, inner);
                        let x_new = g.mgr.or(ez, inner);
                        if x_new == x {
                            break;
                        }
                        x = x_new;
                        ranks.push(x);
                    }
                    y_new = g.mgr.and(y_new, x);
                    xj.push(ranks);
                }
                if y_new == y {
                    break;
                }
                y = y_new;
            }
            z_new = g.mgr.or(z_new, y);
            yr.push(y);
            xr.push(xj);
        }
        if z_new == z {
            break;
        }
        zs.push(z_new);
        ys.push(yr);
        xs.push(xr);
    }
    EnvMemory { z: zs, y: ys, x: xs }
}

/// Winning initial condition: every environment initial choice admits a
/// system initial choice inside `win`.
pub fn initially_winning(g: &mut GameStructure, win: Bdd) -> bool {
    let ok = g.mgr.and(g.theta_s, win);
    let some_sys = g.mgr.exists(ok, g.sys_current);
    let bad_env = g.mgr.not(some_sys);
    let bad = g.mgr.and(g.theta_e, bad_env);
    let bad = g.mgr.exists(bad, g.current);
    bad.is_false()
}

pub fn check_realizability(g: &mut GameStructure) -> Solution {
    let (sys, iterations) = solve_sys(g);
    let verdict = if initially_winning(g, sys.z) { Verdict::Realizable } else { Verdict::Unrealizable };
    let env = (verdict == Verdict::Unrealizable).then(|| solve_env(g));
    Solution { verdict, sys, env, iterations }
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
    fn contradiction_unrealizable() {
        let mut g = game("VAR s : boolean; GAR G (!s); GAR G F (s);");
        let sol = check_realizability(&mut g);
        assert_eq!(sol.verdict, Verdict::Unrealizable);
        let env = sol.env.unwrap();
        let not_z = g.mgr.not(sol.sys.z);
        assert_eq!(env.win(), not_z);
    }

    #[test]
    fn copy_env_realizable() {
        let mut g = game("VARENV e : boolean; VAR s : boolean; GAR G F (s <-> e);");
        assert_eq!(check_realizability(&mut g).verdict, Verdict::Realizable);
    }

    #[test]
    fn env_deadlock_is_system_win() {
        let mut g = game("VARENV e : boolean; VAR s : boolean; ASM G (FALSE); GAR G F (FALSE);");
        assert_eq!(check_realizability(&mut g).verdict, Verdict::Realizable);
    }

    #[test]
    fn z_is_fixed_point() {
        let mut g = game(
            "VARENV e : boolean; VAR s : {A, B, C};
             ASM G F (e);
             GAR G (e -> next(s) != A);
             GAR G F (s = A); GAR G F (s = C);",
        );
        let (mem, _) = solve_sys(&mut g);
        for j in 0..g.j_s.len() {
            assert_eq!(*mem.y[j].last().unwrap(), mem.z, "goal {j}");
        }
        // one more outer round from Z returns Z
        let cz = g.cpre(mem.z);
        let within = g.mgr.and(mem.z, cz);
        assert_eq!(within, mem.z);
    }
}
