//! Normalized GR(1) problem: DEFINEs expanded, patterns and past operators
//! compiled away. Every constraint remembers the source constraint it came from.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::eval::VarTable;
use crate::lang::ast::*;
use crate::lang::typecheck::aux_owner;
use crate::lang::{expand_defines, typecheck, LangError};
use crate::patterns::{compile_past, expand_pattern, TemplateExpansion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Player {
    Env,
    Sys,
}

impl Player {
    pub fn of(side: Side) -> Player {
        match side {
            Side::Assumption => Player::Env,
            Side::Guarantee => Player::Sys,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VarKind {
    Declared,
    ManualAux,
    PatternAux,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StateVar {
    pub name: String,
    pub domain: Domain,
    pub player: Player,
    pub kind: VarKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Initial,
    Safety,
    Justice,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormConstraint {
    pub side: Side,
    pub kind: NormKind,
    /// Past-free expression; safety bodies may use `next`.
    pub expr: Expr,
    /// Index into [`Gr1Problem::origins`].
    pub origin: usize,
    /// Auxiliary variables whose value this constraint determines.
    pub defines: Vec<usize>,
}

/// A constraint of the source document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Origin {
    pub side: Side,
    /// Position within its side's list (0-based).
    pub index: usize,
    pub label: String,
    pub kind: ConstraintKind,
    pub pattern: Option<PatternId>,
    /// One of the constraints defining a manual auxiliary variable.
    pub aux_definition: bool,
    /// For safety-style patterns: predicate (over current state) meaning
    /// "this pattern has been violated".
    pub violation: Option<Expr>,
    #[serde(skip)]
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Gr1Problem {
    pub name: String,
    pub vars: Vec<StateVar>,
    pub constraints: Vec<NormConstraint>,
    pub origins: Vec<Origin>,
    /// The DEFINE-expanded source document.
    #[serde(skip)]
    pub source: SpecDocument,
}

impl VarTable for Gr1Problem {
    fn lookup(&self, name: &str) -> Option<(usize, &Domain)> {
        self.var_index(name).map(|i| (i, &self.vars[i].domain))
    }
}

impl Gr1Problem {
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn constraints_of(&self, side: Side, kind: NormKind) -> impl Iterator<Item = &NormConstraint> {
        self.constraints.iter().filter(move |c| c.side == side && c.kind == kind)
    }

    /// Number of justice requirements before padding (may be zero).
    pub fn justice_count(&self, side: Side) -> usize {
        self.constraints_of(side, NormKind::Justice).count()
    }

    pub fn bits(&self, player: Player, kind: VarKind) -> usize {
        self.vars
            .iter()
            .filter(|v| v.player == player && v.kind == kind)
            .map(|v| v.domain.bits())
            .sum()
    }

    pub fn total_bits(&self) -> usize {
        self.vars.iter().map(|v| v.domain.bits()).sum()
    }

    pub fn origin_label(&self, c: &NormConstraint) -> &str {
        &self.origins[c.origin].label
    }

    /// A problem built directly from normalized parts (used by generators and tests).
    pub fn from_parts(name: &str, vars: Vec<StateVar>, constraints: Vec<(Side, NormKind, Expr)>) -> Gr1Problem {
        let mut origins = vec![];
        let mut out = vec![];
        let mut counts = [0usize; 2];
        for (side, kind, expr) in constraints {
            let slot = &mut counts[side as usize];
            let index = *slot;
            *slot += 1;
            origins.push(Origin {
                side,
                index,
                label: format!("{}#{}", side.keyword(), index + 1),
                kind: match kind {
                    NormKind::Initial => ConstraintKind::Initial,
                    NormKind::Safety => ConstraintKind::Safety,
                    NormKind::Justice => ConstraintKind::Justice,
                },
                pattern: None,
                aux_definition: false,
                violation: None,
                span: Span::default(),
            });
            out.push(NormConstraint { side, kind, expr, origin: origins.len() - 1, defines: vec![] });
        }
        Gr1Problem { name: name.to_string(), vars, constraints: out, origins, source: SpecDocument::empty(name) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("{}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n"))]
    Lang(Vec<LangError>),
}

struct Fresh {
    used: HashSet<String>,
    counter: usize,
}

impl Fresh {
    fn next(&mut self, hint: &str) -> String {
        loop {
            self.counter += 1;
            let name = format!("aux_{hint}_{}", self.counter);
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }
}

/// Wrap every variable reference satisfying `is_var` in `next(..)`.
fn prime_vars(e: &Expr, is_var: &dyn Fn(&str) -> bool) -> Expr {
    match e {
        Expr::Id(n) if is_var(n) => Expr::next(e.clone()),
        _ => e.map_children(|c| prime_vars(c, is_var)),
    }
}

/// Normalize a parsed document into a GR(1) problem. Runs the type checker first.
pub fn compile(doc: &SpecDocument) -> Result<Gr1Problem, CompileError> {
    typecheck(doc).map_err(CompileError::Lang)?;
    let src = expand_defines(doc);
    let mut vars: Vec<StateVar> = vec![];
    for v in &src.env_vars {
        vars.push(StateVar { name: v.name.clone(), domain: v.domain.clone(), player: Player::Env, kind: VarKind::Declared });
    }
    for v in &src.sys_vars {
        vars.push(StateVar { name: v.name.clone(), domain: v.domain.clone(), player: Player::Sys, kind: VarKind::Declared });
    }
    for v in &src.aux_vars {
        vars.push(StateVar {
            name: v.name.clone(),
            domain: v.domain.clone(),
            player: Player::of(aux_owner(doc, &v.name)),
            kind: VarKind::ManualAux,
        });
    }
    let mut fresh = Fresh {
        used: doc.vars().map(|v| v.name.clone()).chain(doc.defines.keys().cloned()).collect(),
        counter: 0,
    };
    let mut constraints = vec![];
    let mut origins = vec![];
    for (side, list) in [(Side::Assumption, &src.assumptions), (Side::Guarantee, &src.guarantees)] {
        for (index, c) in list.iter().enumerate() {
            let origin = origins.len();
            let mut exp = TemplateExpansion::default();
            let mut f = |h: &str| fresh.next(h);
            let aux_def = src.is_aux_definition(c);
            let mut push = |kind: NormKind, expr: Expr, defines: Vec<usize>| {
                constraints.push(NormConstraint { side, kind, expr, origin, defines });
            };
            match &c.body {
                ConstraintBody::Initial(e) | ConstraintBody::Safety(e) | ConstraintBody::Justice(e) => {
                    let (e2, past) = compile_past(e, &mut f);
                    exp.extend(past);
                    let kind = match c.kind() {
                        ConstraintKind::Initial => NormKind::Initial,
                        ConstraintKind::Safety => NormKind::Safety,
                        _ => NormKind::Justice,
                    };
                    let defines = if aux_def {
                        let names = if kind == NormKind::Initial { e.idents() } else { e.next_idents() };
                        names
                            .iter()
                            .filter_map(|n| vars.iter().position(|v| &v.name == n && v.kind == VarKind::ManualAux))
                            .collect()
                    } else {
                        vec![]
                    };
                    let invariant = kind == NormKind::Safety && !e2.has_next();
                    let primable = |name: &String| {
                        exp.new_aux_vars.iter().any(|v| &v.name == name)
                            || vars.iter().any(|v| &v.name == name && (side == Side::Guarantee || v.player == Player::Env))
                    };
                    let known = |name: &String| {
                        exp.new_aux_vars.iter().any(|v| &v.name == name) || vars.iter().any(|v| &v.name == name)
                    };
                    if invariant && e2.idents().iter().filter(|n| known(n)).all(primable) {
                        // G(p) without next: p initially and after every step
                        let shifted = prime_vars(&e2, &|n| known(&n.to_string()));
                        push(NormKind::Initial, e2, vec![]);
                        push(NormKind::Safety, shifted, defines);
                    } else {
                        push(kind, e2, defines);
                    }
                }
                ConstraintBody::Pattern(inst) => {
                    let mut params = inst.clone();
                    for (_, v) in params.params.iter_mut() {
                        let (e2, past) = compile_past(v, &mut f);
                        exp.extend(past);
                        *v = e2;
                    }
                    let t = expand_pattern(&params, &mut f);
                    exp.extend(t);
                }
            }
            let first_new = vars.len();
            for v in &exp.new_aux_vars {
                vars.push(StateVar { name: v.name.clone(), domain: v.domain.clone(), player: Player::of(side), kind: VarKind::PatternAux });
            }
            // Each expansion constraint defines the aux variables it mentions under `next`
            // (safety) or at all (initial).
            let new_range = first_new..vars.len();
            let defined = |e: &Expr, initial: bool| -> Vec<usize> {
                let names = if initial { e.idents() } else { e.next_idents() };
                new_range.clone().filter(|&i| names.contains(&vars[i].name)).collect()
            };
            let mut extra = vec![];
            for e in &exp.initial {
                extra.push(NormConstraint { side, kind: NormKind::Initial, expr: e.clone(), origin, defines: defined(e, true) });
            }
            for e in &exp.safety {
                // a past operator's update also mentions `next` of the inner variables;
                // it defines only the variable on its left-hand side
                let mut d = defined(e, false);
                if let Expr::Iff(lhs, _) = e {
                    if let Expr::Next(v) = &**lhs {
                        d.retain(|&i| Expr::id(&vars[i].name) == **v);
                    }
                }
                extra.push(NormConstraint { side, kind: NormKind::Safety, expr: e.clone(), origin, defines: d });
            }
            for e in &exp.justice {
                extra.push(NormConstraint { side, kind: NormKind::Justice, expr: e.clone(), origin, defines: vec![] });
            }
            constraints.extend(extra);
            origins.push(Origin {
                side,
                index,
                label: c.display_label(index + 1),
                kind: c.kind(),
                pattern: match &c.body {
                    ConstraintBody::Pattern(p) => Some(p.pattern),
                    _ => None,
                },
                aux_definition: aux_def,
                violation: exp.violation.clone(),
                span: c.span,
            });
        }
    }
    Ok(Gr1Problem { name: doc.name.clone(), vars, constraints, origins, source: src })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;

    #[test]
    fn pattern_and_past_expansion_is_attributed() {
        let doc = parse(
            "VARENV e : boolean; VAR s : boolean; spec_m : boolean;
             ASM Globally (e) leads to (!e);
             GAR !spec_m;
             GAR G (next(spec_m) <-> s);
             GAR G (PREV(s) -> e);",
        )
        .unwrap();
        let p = compile(&doc).unwrap();
        let names: Vec<_> = p.vars.iter().map(|v| (v.name.as_str(), v.player, v.kind)).collect();
        assert_eq!(
            names,
            vec![
                ("e", Player::Env, VarKind::Declared),
                ("s", Player::Sys, VarKind::Declared),
                ("spec_m", Player::Sys, VarKind::ManualAux),
                ("aux_p26_1", Player::Env, VarKind::PatternAux),
                ("aux_prev_2", Player::Sys, VarKind::PatternAux),
            ]
        );
        assert_eq!(p.justice_count(Side::Assumption), 1);
        assert_eq!(p.justice_count(Side::Guarantee), 0);
        assert!(p.origins[1].aux_definition && p.origins[2].aux_definition && !p.origins[3].aux_definition);
        let defining: Vec<_> = p.constraints.iter().filter(|c| !c.defines.is_empty()).map(|c| c.origin).collect();
        assert_eq!(defining, vec![0, 0, 1, 2, 3, 3]);
    }

    #[test]
    fn invariants_hold_initially_and_after_every_step() {
        let doc = parse(
            "VARENV e : boolean; VAR s : boolean;
             ASM G (!e);
             ASM G (s -> e);
             GAR G (e -> s);",
        )
        .unwrap();
        let p = compile(&doc).unwrap();
        let shown: Vec<_> =
            p.constraints.iter().map(|c| (c.side, c.kind, crate::lang::pretty_expr(&c.expr))).collect();
        assert_eq!(
            shown,
            vec![
                (Side::Assumption, NormKind::Initial, "!e".to_string()),
                (Side::Assumption, NormKind::Safety, "!next(e)".to_string()),
                // rho_e may not prime system variables
                (Side::Assumption, NormKind::Safety, "s -> e".to_string()),
                (Side::Guarantee, NormKind::Initial, "e -> s".to_string()),
                (Side::Guarantee, NormKind::Safety, "next(e) -> next(s)".to_string()),
            ]
        );
    }
}
