//! Symbolic game structure: bit encoding of the state space and the initial,
//! transition and justice predicates as BDDs.
//!
//! Each state bit `b` owns two diagram variables: `2b` (current) and `2b + 1`
//! (next). Bits are allocated per variable in problem order (environment,
//! system, auxiliary), most significant bit first, so the lexicographic order
//! on diagram variables is the order on value indices.

use crate::bdd::{Bdd, BddManager, VarId, VarSet};
use crate::eval::Compiled;
use crate::lang::ast::{Domain, Side};
use crate::problem::{Gr1Problem, NormKind, Player};

/// Largest supported number of state bits.
pub const MAX_STATE_BITS: usize = 64;

#[derive(Debug, Clone)]
pub struct Justice {
    pub bdd: Bdd,
    /// Normalized constraint index; `None` for the padding `TRUE` goal.
    pub constraint: Option<usize>,
    pub label: String,
}

/// One initial or safety conjunct with the constraint it encodes.
#[derive(Debug, Clone)]
pub struct Conjunct {
    pub constraint: usize,
    pub bdd: Bdd,
}

pub struct GameStructure {
    pub mgr: BddManager,
    pub problem: Gr1Problem,
    /// State bits of each variable, most significant first.
    pub var_bits: Vec<Vec<u32>>,
    pub num_bits: u32,
    pub theta_e: Bdd,
    pub theta_s: Bdd,
    pub rho_e: Bdd,
    pub rho_s: Bdd,
    pub j_e: Vec<Justice>,
    pub j_s: Vec<Justice>,
    pub conjuncts: Vec<Conjunct>,
    /// Domain constraints (unused codes excluded) over current bits, all variables.
    pub valid: Bdd,
    pub env_next: VarSet,
    pub sys_next: VarSet,
    pub current: VarSet,
    pub next: VarSet,
    pub env_current: VarSet,
    pub sys_current: VarSet,
    to_next: Vec<VarId>,
    to_current: Vec<VarId>,
}

pub fn cur_var(bit: u32) -> VarId {
    2 * bit
}

pub fn next_var(bit: u32) -> VarId {
    2 * bit + 1
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error("state space too large: {0} bits (limit {MAX_STATE_BITS})")]
    TooManyBits(usize),
    #[error("cannot encode constraint {label}: {message}")]
    Encode { label: String, message: String },
}

impl GameStructure {
    pub fn build(problem: Gr1Problem) -> Result<GameStructure, BuildError> {
        let total = problem.total_bits();
        if total > MAX_STATE_BITS {
            return Err(BuildError::TooManyBits(total));
        }
        let mut var_bits = vec![];
        let mut next_bit = 0u32;
        for v in &problem.vars {
            let n = v.domain.bits() as u32;
            var_bits.push((next_bit..next_bit + n).collect::<Vec<_>>());
            next_bit += n;
        }
        let num_bits = next_bit;
        let mgr = BddManager::new((2 * num_bits).max(1));
        let mut to_next: Vec<VarId> = (0..2 * num_bits).collect();
        let mut to_current: Vec<VarId> = (0..2 * num_bits).collect();
        for b in 0..num_bits {
            to_next[cur_var(b) as usize] = next_var(b);
            to_current[next_var(b) as usize] = cur_var(b);
        }
        let bits_of = |player: Player, primed: bool| {
            VarSet::from_vars(problem.vars.iter().zip(&var_bits).filter(|(v, _)| v.player == player).flat_map(
                |(_, bits)| bits.iter().map(move |&b| if primed { next_var(b) } else { cur_var(b) }),
            ))
        };
        let env_next = bits_of(Player::Env, true);
        let sys_next = bits_of(Player::Sys, true);
        let env_current = bits_of(Player::Env, false);
        let sys_current = bits_of(Player::Sys, false);
        let one = mgr.one();
        let mut g = GameStructure {
            mgr,
            problem,
            var_bits,
            num_bits,
            theta_e: one,
            theta_s: one,
            rho_e: one,
            rho_s: one,
            j_e: vec![],
            j_s: vec![],
            conjuncts: vec![],
            valid: one,
            env_next,
            sys_next,
            current: env_current.union(sys_current),
            next: env_next.union(sys_next),
            env_current,
            sys_current,
            to_next,
            to_current,
        };
        // domain constraints
        let mut valid = g.mgr.one();
        for v in 0..g.problem.vars.len() {
            let (d_cur, d_next) = (g.value_domain(v, false), g.value_domain(v, true));
            valid = g.mgr.and(valid, d_cur);
            match g.problem.vars[v].player {
                Player::Env => {
                    g.theta_e = g.mgr.and(g.theta_e, d_cur);
                    g.rho_e = g.mgr.and(g.rho_e, d_next);
                }
                Player::Sys => {
                    g.theta_s = g.mgr.and(g.theta_s, d_cur);
                    g.rho_s = g.mgr.and(g.rho_s, d_next);
                }
            }
        }
        g.valid = valid;
        for idx in 0..g.problem.constraints.len() {
            let c = g.problem.constraints[idx].clone();
            let compiled = Compiled::new(&c.expr, &g.problem).map_err(|message| BuildError::Encode {
                label: g.problem.origin_label(&c).to_string(),
                message,
            })?;
            let bdd = g.encode(&compiled);
            match (c.side, c.kind) {
                (Side::Assumption, NormKind::Initial) => g.theta_e = g.mgr.and(g.theta_e, bdd),
                (Side::Guarantee, NormKind::Initial) => g.theta_s = g.mgr.and(g.theta_s, bdd),
                (Side::Assumption, NormKind::Safety) => g.rho_e = g.mgr.and(g.rho_e, bdd),
                (Side::Guarantee, NormKind::Safety) => g.rho_s = g.mgr.and(g.rho_s, bdd),
                (side, NormKind::Justice) => {
                    let j = Justice { bdd, constraint: Some(idx), label: g.problem.origin_label(&c).to_string() };
                    match side {
                        Side::Assumption => g.j_e.push(j),
                        Side::Guarantee => g.j_s.push(j),
                    }
                }
            }
            if c.kind != NormKind::Justice {
                g.conjuncts.push(Conjunct { constraint: idx, bdd });
            }
        }
        for list in [&mut g.j_e, &mut g.j_s] {
            if list.is_empty() {
                list.push(Justice { bdd: one, constraint: None, label: "TRUE".into() });
            }
        }
        Ok(g)
    }

    /// Predicate "variable `v` holds value index `value`".
    pub fn value_bdd(&mut self, v: usize, value: usize, primed: bool) -> Bdd {
        let bits = &self.var_bits[v];
        let n = bits.len();
        let lits: Vec<(VarId, bool)> = bits
            .iter()
            .enumerate()
            .map(|(k, &b)| (if primed { next_var(b) } else { cur_var(b) }, (value >> (n - 1 - k)) & 1 == 1))
            .collect();
        self.mgr.cube(&lits)
    }

    pub fn value_domain(&mut self, v: usize, primed: bool) -> Bdd {
        let size = self.problem.vars[v].domain.size();
        if size == 1usize << self.var_bits[v].len() {
            return self.mgr.one();
        }
        let mut out = self.mgr.zero();
        for value in 0..size {
            let c = self.value_bdd(v, value, primed);
            out = self.mgr.or(out, c);
        }
        out
    }

    pub fn encode(&mut self, c: &Compiled) -> Bdd {
        match c {
            Compiled::Const(b) => self.mgr.constant(*b),
            Compiled::Var { var, next } => self.value_bdd(*var, 1, *next),
            Compiled::IsValue { var, next, value } => self.value_bdd(*var, *value, *next),
            Compiled::Same { a, a_next, b, b_next } => {
                let mut out = self.mgr.one();
                let (ba, bb) = (self.var_bits[*a].clone(), self.var_bits[*b].clone());
                for (x, y) in ba.iter().zip(&bb) {
                    let vx = if *a_next { next_var(*x) } else { cur_var(*x) };
                    let vy = if *b_next { next_var(*y) } else { cur_var(*y) };
                    let (px, py) = (self.mgr.var(vx), self.mgr.var(vy));
                    let eq = self.mgr.iff(px, py);
                    out = self.mgr.and(out, eq);
                }
                out
            }
            Compiled::Not(a) => {
                let a = self.encode(a);
                self.mgr.not(a)
            }
            Compiled::And(a, b) | Compiled::Or(a, b) | Compiled::Imp(a, b) | Compiled::Iff(a, b) => {
                let (x, y) = (self.encode(a), self.encode(b));
                match c {
                    Compiled::And(..) => self.mgr.and(x, y),
                    Compiled::Or(..) => self.mgr.or(x, y),
                    Compiled::Imp(..) => self.mgr.imp(x, y),
                    _ => self.mgr.iff(x, y),
                }
            }
        }
    }

    pub fn prime(&mut self, b: Bdd) -> Bdd {
        let map = std::mem::take(&mut self.to_next);
        let r = self.mgr.rename(b, &map);
        self.to_next = map;
        r
    }

    pub fn unprime(&mut self, b: Bdd) -> Bdd {
        let map = std::mem::take(&mut self.to_current);
        let r = self.mgr.rename(b, &map);
        self.to_current = map;
        r
    }

    /// Controllable predecessor: for every legal environment move there is a
    /// legal system reply leading into `s`. Environment deadlock counts as a
    /// system win, system deadlock as a loss.
    pub fn cpre(&mut self, s: Bdd) -> Bdd {
        let sp = self.prime(s);
        let reply = self.mgr.and_exists(self.rho_s, sp, self.sys_next);
        let no_reply = self.mgr.not(reply);
        let bad = self.mgr.and_exists(self.rho_e, no_reply, self.env_next);
        self.mgr.not(bad)
    }

    /// Environment-forceable predecessor: some legal environment move such
    /// that every legal system reply leads into `s`.
    pub fn epre(&mut self, s: Bdd) -> Bdd {
        let sp = self.prime(s);
        let not_sp = self.mgr.not(sp);
        let escape = self.mgr.and_exists(self.rho_s, not_sp, self.sys_next);
        let forced = self.mgr.not(escape);
        self.mgr.and_exists(self.rho_e, forced, self.env_next)
    }

    /// States reachable from the initial states under both transition relations.
    pub fn reachable(&mut self) -> Bdd {
        let one = self.mgr.one();
        self.reachable_within(one)
    }

    /// States reachable from the initial states without leaving `allowed`.
    pub fn reachable_within(&mut self, allowed: Bdd) -> Bdd {
        let init = self.mgr.and(self.theta_e, self.theta_s);
        let init = self.mgr.and(init, allowed);
        let trans = self.mgr.and(self.rho_e, self.rho_s);
        let allowed_next = self.prime(allowed);
        let trans = self.mgr.and(trans, allowed_next);
        let mut reach = init;
        let mut frontier = init;
        while !frontier.is_false() {
            let img = self.mgr.and_exists(frontier, trans, self.current);
            let img = self.unprime(img);
            let not_reach = self.mgr.not(reach);
            frontier = self.mgr.and(img, not_reach);
            reach = self.mgr.or(reach, frontier);
        }
        reach
    }

    /// Cube of a full state (one value index per variable), current or next bits.
    pub fn state_bdd(&mut self, values: &[usize], primed: bool) -> Bdd {
        let mut lits = vec![];
        for (v, &val) in values.iter().enumerate() {
            let bits = &self.var_bits[v];
            let n = bits.len();
            for (k, &b) in bits.iter().enumerate() {
                lits.push((if primed { next_var(b) } else { cur_var(b) }, (val >> (n - 1 - k)) & 1 == 1));
            }
        }
        self.mgr.cube(&lits)
    }

    /// Cube fixing only the given player's variables.
    pub fn player_bdd(&mut self, values: &[usize], player: Player, primed: bool) -> Bdd {
        let mut lits = vec![];
        for (v, &val) in values.iter().enumerate() {
            if self.problem.vars[v].player != player {
                continue;
            }
            let bits = &self.var_bits[v];
            let n = bits.len();
            for (k, &b) in bits.iter().enumerate() {
                lits.push((if primed { next_var(b) } else { cur_var(b) }, (val >> (n - 1 - k)) & 1 == 1));
            }
        }
        self.mgr.cube(&lits)
    }

    /// Decode an assignment to diagram variables into value indices.
    /// Variables not covered by `lits` are left at 0.
    pub fn decode(&self, lits: &[(VarId, bool)], primed: bool) -> Vec<usize> {
        let mut bitval = vec![false; self.num_bits as usize];
        for &(v, val) in lits {
            if (v % 2 == 1) == primed {
                bitval[(v / 2) as usize] = val;
            }
        }
        self.var_bits
            .iter()
            .map(|bits| bits.iter().fold(0usize, |acc, &b| (acc << 1) | bitval[b as usize] as usize))
            .collect()
    }

    /// Restrict a diagram to a concrete current state.
    pub fn at_state(&mut self, b: Bdd, values: &[usize]) -> Bdd {
        let mut asg = vec![None; (2 * self.num_bits) as usize];
        for (v, &val) in values.iter().enumerate() {
            let bits = &self.var_bits[v];
            let n = bits.len();
            for (k, &bit) in bits.iter().enumerate() {
                asg[cur_var(bit) as usize] = Some((val >> (n - 1 - k)) & 1 == 1);
            }
        }
        self.mgr.restrict(b, &asg)
    }

    /// Whether a concrete state satisfies a current-state predicate.
    pub fn holds(&self, b: Bdd, values: &[usize]) -> bool {
        let mut bitval = vec![false; self.num_bits as usize];
        for (v, &val) in values.iter().enumerate() {
            let bits = &self.var_bits[v];
            let n = bits.len();
            for (k, &bit) in bits.iter().enumerate() {
                bitval[bit as usize] = (val >> (n - 1 - k)) & 1 == 1;
            }
        }
        self.mgr.eval(b, |var| var % 2 == 0 && bitval[(var / 2) as usize])
    }

    pub fn var_name(&self, v: VarId) -> String {
        let bit = v / 2;
        for (i, bits) in self.var_bits.iter().enumerate() {
            if let Some(k) = bits.iter().position(|&b| b == bit) {
                let name = &self.problem.vars[i].name;
                let suffix = if bits.len() > 1 { format!("[{k}]") } else { String::new() };
                return format!("{name}{suffix}{}", if v % 2 == 1 { "'" } else { "" });
            }
        }
        format!("v{v}")
    }

    /// Render a value-index state as `name=value` pairs.
    pub fn show(&self, values: &[usize]) -> Vec<(String, String)> {
        self.problem
            .vars
            .iter()
            .zip(values)
            .map(|(v, &x)| (v.name.clone(), display_value(&v.domain, x)))
            .collect()
    }
}

/// Concrete-state helpers used by strategy extraction and checking.
impl GameStructure {
    fn bit_values(&self, values: &[usize]) -> Vec<bool> {
        let mut bitval = vec![false; self.num_bits as usize];
        for (v, &val) in values.iter().enumerate() {
            let bits = &self.var_bits[v];
            let n = bits.len();
            for (k, &bit) in bits.iter().enumerate() {
                bitval[bit as usize] = (val >> (n - 1 - k)) & 1 == 1;
            }
        }
        bitval
    }

    /// Whether the step `cur -> next` satisfies a two-state predicate.
    pub fn holds_step(&self, b: Bdd, cur: &[usize], next: &[usize]) -> bool {
        let (c, n) = (self.bit_values(cur), self.bit_values(next));
        self.mgr.eval(b, |var| if var % 2 == 0 { c[(var / 2) as usize] } else { n[(var / 2) as usize] })
    }

    /// Restrict the next-state bits of `player`'s variables to the values in
    /// `values` (a full state vector; other players' entries are ignored).
    pub fn at_next(&mut self, b: Bdd, values: &[usize], player: Player) -> Bdd {
        let mut asg = vec![None; (2 * self.num_bits) as usize];
        for (v, &val) in values.iter().enumerate() {
            if self.problem.vars[v].player != player {
                continue;
            }
            let bits = &self.var_bits[v];
            let n = bits.len();
            for (k, &bit) in bits.iter().enumerate() {
                asg[next_var(bit) as usize] = Some((val >> (n - 1 - k)) & 1 == 1);
            }
        }
        self.mgr.restrict(b, &asg)
    }

    /// Lexicographically smallest assignment of `over` satisfying `b`, as
    /// value indices (variables outside `over` are 0).
    pub fn pick_values(&self, b: Bdd, over: VarSet, primed: bool) -> Option<Vec<usize>> {
        self.mgr.pick_min(b, over).map(|lits| self.decode(&lits, primed))
    }

    /// All assignments of `over` satisfying `b`, as value indices.
    pub fn all_values(&self, b: Bdd, over: VarSet, primed: bool) -> Vec<Vec<usize>> {
        let vars: Vec<VarId> = over.iter().collect();
        self.mgr
            .enumerate(b, over)
            .into_iter()
            .map(|bits| {
                let lits: Vec<(VarId, bool)> = vars.iter().copied().zip(bits).collect();
                self.decode(&lits, primed)
            })
            .collect()
    }

    /// Copy the entries of `player`'s variables from `src` into `dst`.
    pub fn merge(&self, dst: &mut [usize], src: &[usize], player: Player) {
        for (v, var) in self.problem.vars.iter().enumerate() {
            if var.player == player {
                dst[v] = src[v];
            }
        }
    }

    pub fn player_vars(&self, player: Player) -> Vec<usize> {
        (0..self.problem.vars.len()).filter(|&v| self.problem.vars[v].player == player).collect()
    }
}

pub fn display_value(d: &Domain, x: usize) -> String {
    match d {
        Domain::Boolean => (if x == 1 { "true" } else { "false" }).to_string(),
        Domain::Enumeration(vals) => vals.get(x).cloned().unwrap_or_else(|| format!("#{x}")),
    }
}
