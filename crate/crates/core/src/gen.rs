//! Seeded random GR(1) problems for property tests and oracle comparison.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lang::ast::{Domain, Expr, PatternId, PatternInstance, Side};
use crate::problem::{Gr1Problem, NormKind, Player, StateVar, VarKind};

#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    pub max_bits: usize,
    pub max_env_justice: usize,
    pub max_sys_justice: usize,
    pub max_safety: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { max_bits: 8, max_env_justice: 2, max_sys_justice: 2, max_safety: 3 }
    }
}

struct Builder<'a> {
    rng: &'a mut ChaCha8Rng,
    vars: &'a [StateVar],
}

impl Builder<'_> {
    fn atom(&mut self, next_of: Option<Player>) -> Expr {
        let candidates: Vec<(usize, bool)> = self
            .vars
            .iter()
            .enumerate()
            .flat_map(|(i, v)| {
                let mut c = vec![(i, false)];
                if next_of == Some(Player::Sys) || (next_of == Some(Player::Env) && v.player == Player::Env) {
                    c.push((i, true));
                }
                c
            })
            .collect();
        let &(i, primed) = candidates.choose(self.rng).expect("variables");
        let v = &self.vars[i];
        let base = Expr::id(&v.name);
        let base = if primed { Expr::next(base) } else { base };
        match &v.domain {
            Domain::Boolean => base,
            Domain::Enumeration(vals) => Expr::eq(base, Expr::id(vals.choose(self.rng).unwrap())),
        }
    }

    fn expr(&mut self, depth: u32, next_of: Option<Player>) -> Expr {
        if depth == 0 || self.rng.gen_bool(0.3) {
            let a = self.atom(next_of);
            return if self.rng.gen_bool(0.3) { Expr::not(a) } else { a };
        }
        let a = self.expr(depth - 1, next_of);
        let b = self.expr(depth - 1, next_of);
        match self.rng.gen_range(0..5) {
            0 => Expr::not(Expr::and(a, b)),
            1 => Expr::and(a, b),
            2 => Expr::or(a, b),
            3 => Expr::imp(a, b),
            _ => Expr::iff(a, b),
        }
    }
}

/// A random propositional formula over boolean atoms.
pub fn random_prop(rng: &mut impl Rng, atoms: &[&str], depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.35) {
        return match rng.gen_range(0..10) {
            0 => Expr::Bool(rng.gen_bool(0.5)),
            1 | 2 => Expr::not(Expr::id(*atoms.choose(rng).unwrap())),
            _ => Expr::id(*atoms.choose(rng).unwrap()),
        };
    }
    let a = random_prop(rng, atoms, depth - 1);
    let b = random_prop(rng, atoms, depth - 1);
    match rng.gen_range(0..4) {
        0 => Expr::and(a, b),
        1 => Expr::or(a, b),
        2 => Expr::imp(a, b),
        _ => Expr::not(Expr::iff(a, b)),
    }
}

/// A random instance of `pattern` with propositional parameters.
pub fn random_instance(rng: &mut impl Rng, pattern: PatternId, atoms: &[&str]) -> PatternInstance {
    let names: &[&str] = if pattern == PatternId::P26 { &["p", "s"] } else { &["p", "q", "r"] };
    PatternInstance {
        pattern,
        params: names.iter().map(|n| (n.to_string(), random_prop(rng, atoms, 2))).collect(),
        bound: (pattern == PatternId::P15).then(|| rng.gen_range(1..=3)),
    }
}

/// A random problem with at most `cfg.max_bits` state bits.
pub fn random_problem(seed: u64, cfg: GenConfig) -> Gr1Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vars = vec![];
    let mut bits = 0;
    let n_env = rng.gen_range(1..=3);
    let n_sys = rng.gen_range(1..=3);
    for (k, player) in (0..n_env).map(|k| (k, Player::Env)).chain((0..n_sys).map(|k| (k, Player::Sys))) {
        let domain = if rng.gen_bool(0.25) {
            let size = rng.gen_range(3..=4);
            Domain::Enumeration((0..size).map(|x| format!("V{x}")).collect())
        } else {
            Domain::Boolean
        };
        if bits + domain.bits() > cfg.max_bits {
            continue;
        }
        bits += domain.bits();
        let prefix = if player == Player::Env { "e" } else { "s" };
        vars.push(StateVar { name: format!("{prefix}{k}"), domain, player, kind: VarKind::Declared });
    }
    let mut constraints = vec![];
    let env_vars: Vec<StateVar> = vars.iter().filter(|v| v.player == Player::Env).cloned().collect();
    if rng.gen_bool(0.5) {
        let e = Builder { rng: &mut rng, vars: &env_vars }.expr(1, None);
        constraints.push((Side::Assumption, NormKind::Initial, e));
    }
    let mut b = Builder { rng: &mut rng, vars: &vars };
    if b.rng.gen_bool(0.5) {
        let e = b.expr(1, None);
        constraints.push((Side::Guarantee, NormKind::Initial, e));
    }
    for (side, player) in [(Side::Assumption, Player::Env), (Side::Guarantee, Player::Sys)] {
        let k = b.rng.gen_range(0..=cfg.max_safety);
        for _ in 0..k {
            let e = Expr::imp(b.expr(1, None), b.expr(1, Some(player)));
            constraints.push((side, NormKind::Safety, e));
        }
    }
    for (side, max) in [(Side::Assumption, cfg.max_env_justice), (Side::Guarantee, cfg.max_sys_justice)] {
        let k = b.rng.gen_range(0..=max);
        for _ in 0..k {
            let e = b.expr(2, None);
            constraints.push((side, NormKind::Justice, e));
        }
    }
    Gr1Problem::from_parts(&format!("random-{seed}"), vars, constraints)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_bounded() {
        for seed in 0..50 {
            let p = random_problem(seed, GenConfig::default());
            assert!(p.total_bits() <= 8);
            assert_eq!(p, random_problem(seed, GenConfig::default()));
        }
    }
}
