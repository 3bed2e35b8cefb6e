//! Symbolic check that every auxiliary variable is a function of the rest of
//! the state: its defining constraints fix exactly one initial value and,
//! for every current state and every choice of the other next values,
//! exactly one next value.

use std::fmt;

use thiserror::Error;

use super::ast::SpecDocument;
use crate::bdd::{Bdd, VarSet};
use crate::game::{cur_var, next_var, BuildError, GameStructure};
use crate::problem::{compile, CompileError, NormKind, StateVar, VarKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness(pub Vec<(String, String)>);

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuxError {
    #[error("auxiliary variable `{var}` is not fully determined ({phase}); no value allowed at: {witness}")]
    Incomplete { var: String, phase: &'static str, witness: Witness },
    #[error("auxiliary variable `{var}` is not uniquely determined ({phase}); several values allowed at: {witness}")]
    Nondeterministic { var: String, phase: &'static str, witness: Witness },
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Build(#[from] BuildError),
}

/// Check the manual (`spec_`) auxiliary variables of a document.
pub fn validate_aux(doc: &SpecDocument) -> Result<(), AuxError> {
    let problem = compile(doc)?;
    let mut g = GameStructure::build(problem)?;
    let manual: Vec<usize> = (0..g.problem.vars.len()).filter(|&v| g.problem.vars[v].kind == VarKind::ManualAux).collect();
    for v in manual {
        check_var(&mut g, v)?;
    }
    Ok(())
}

/// Check every auxiliary variable (manual and compiler-generated) of a game.
pub fn validate_game_aux(g: &mut GameStructure) -> Result<(), AuxError> {
    validate_game_aux_of(g, |v| v.kind != VarKind::Declared)
}

/// Check the variables of a built game selected by `which`.
pub fn validate_game_aux_of(g: &mut GameStructure, which: impl Fn(&StateVar) -> bool) -> Result<(), AuxError> {
    let aux: Vec<usize> = (0..g.problem.vars.len()).filter(|&v| which(&g.problem.vars[v])).collect();
    for v in aux {
        check_var(g, v)?;
    }
    Ok(())
}

fn witness(g: &GameStructure, lits: &[(u32, bool)], with_next: bool, skip: usize) -> Witness {
    let cur = g.decode(lits, false);
    let mut out: Vec<(String, String)> =
        g.show(&cur).into_iter().enumerate().filter(|(i, _)| with_next || *i != skip).map(|(_, p)| p).collect();
    if with_next {
        let nxt = g.decode(lits, true);
        for (i, (k, val)) in g.show(&nxt).into_iter().enumerate() {
            if i != skip {
                out.push((format!("{k}'"), val));
            }
        }
    }
    Witness(out)
}

pub(crate) fn check_var(g: &mut GameStructure, v: usize) -> Result<(), AuxError> {
    let name = g.problem.vars[v].name.clone();
    let defs: Vec<(NormKind, usize)> = g
        .problem
        .constraints
        .iter()
        .enumerate()
        .filter(|(_, c)| c.defines.contains(&v))
        .map(|(i, c)| (c.kind, i))
        .collect();
    for (kind, phase) in [(NormKind::Initial, "initial value"), (NormKind::Safety, "next value")] {
        if !defs.iter().any(|(k, _)| *k == kind) {
            return Err(AuxError::Incomplete { var: name, phase, witness: Witness(vec![]) });
        }
    }
    let mut init = g.mgr.one();
    let mut step = g.mgr.one();
    for (kind, idx) in &defs {
        let bdd = g.conjuncts.iter().find(|c| c.constraint == *idx).map(|c| c.bdd).expect("conjunct");
        match kind {
            NormKind::Initial => init = g.mgr.and(init, bdd),
            _ => step = g.mgr.and(step, bdd),
        }
    }
    let bits = g.var_bits[v].clone();
    let own_cur = VarSet::from_vars(bits.iter().map(|&b| cur_var(b)));
    let own_next = VarSet::from_vars(bits.iter().map(|&b| next_var(b)));
    let dom_cur = g.value_domain(v, false);
    let dom_next = g.value_domain(v, true);
    let valid = g.valid;
    let others_cur = g.mgr.exists(valid, own_cur);
    let valid_next = g.prime(valid);
    let others_next = g.mgr.exists(valid_next, own_next);

    // initial value: function of the other current values
    let init_ok = g.mgr.and(init, dom_cur);
    check_function(g, init_ok, own_cur, &bits, false, others_cur, &name, "initial value", v)?;
    // next value: function of the current state and the other next values
    let ctx = g.mgr.and(valid, others_next);
    let step_ok = g.mgr.and(step, dom_next);
    check_function(g, step_ok, own_next, &bits, true, ctx, &name, "next value", v)
}

#[allow(clippy::too_many_arguments)]
fn check_function(
    g: &mut GameStructure,
    rel: Bdd,
    own: VarSet,
    bits: &[u32],
    primed: bool,
    ctx: Bdd,
    name: &str,
    phase: &'static str,
    v: usize,
) -> Result<(), AuxError> {
    let over = g.current.union(g.next);
    let some = g.mgr.exists(rel, own);
    let none = g.mgr.not(some);
    let missing = g.mgr.and(ctx, none);
    if let Some(lits) = g.mgr.pick_min(missing, over) {
        return Err(AuxError::Incomplete { var: name.into(), phase, witness: witness(g, &lits, primed, v) });
    }
    for &b in bits {
        let var = if primed { next_var(b) } else { cur_var(b) };
        let (pos, neg) = (g.mgr.var(var), g.mgr.nvar(var));
        let with_pos = g.mgr.and(rel, pos);
        let with_neg = g.mgr.and(rel, neg);
        let a = g.mgr.exists(with_pos, own);
        let c = g.mgr.exists(with_neg, own);
        let both = g.mgr.and(a, c);
        let both = g.mgr.and(both, ctx);
        if let Some(lits) = g.mgr.pick_min(both, over) {
            return Err(AuxError::Nondeterministic { var: name.into(), phase, witness: witness(g, &lits, primed, v) });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;

    const HEAD: &str = "VARENV ack : boolean; VAR lift : {LIFT, DROP, NIL}; spec_loaded : boolean;";

    fn run(body: &str) -> Result<(), AuxError> {
        validate_aux(&parse(&format!("{HEAD}\n{body}")).unwrap())
    }

    #[test]
    fn loaded_definition_ok() {
        run("GAR !spec_loaded;
             GAR G (lift = LIFT -> next(spec_loaded));
             GAR G (lift = DROP -> !next(spec_loaded));
             GAR G (lift = NIL -> next(spec_loaded) = spec_loaded);")
        .unwrap();
    }

    #[test]
    fn undefined_is_incomplete() {
        assert!(matches!(run(""), Err(AuxError::Incomplete { .. })));
    }

    #[test]
    fn contradictory_is_incomplete_not_nondeterministic() {
        let e = run("GAR !spec_loaded; GAR G (next(spec_loaded)); GAR G (!next(spec_loaded));").unwrap_err();
        assert!(matches!(e, AuxError::Incomplete { phase: "next value", .. }), "{e}");
    }

    #[test]
    fn missing_case_and_loose_case() {
        let e = run("GAR !spec_loaded; GAR G (lift = LIFT -> next(spec_loaded));").unwrap_err();
        assert!(matches!(e, AuxError::Nondeterministic { .. }), "{e}");
        let e = run("GAR spec_loaded | !spec_loaded; GAR G (lift = LIFT -> next(spec_loaded)); GAR G (lift != LIFT -> !next(spec_loaded));").unwrap_err();
        assert!(matches!(e, AuxError::Nondeterministic { phase: "initial value", .. }), "{e}");
    }
}
