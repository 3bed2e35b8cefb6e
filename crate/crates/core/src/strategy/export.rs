//! JSON and DOT renderings of strategies, and JSON import of controllers.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::controller::{Annotation, Controller, ControllerState, ReasonKind, Transition};
use super::counter::{CounterAnnotation, CounterStrategy};
use crate::game::display_value;
use crate::lang::ast::Domain;
use crate::problem::{Gr1Problem, Player};

pub const SCHEMA: &str = "gr1-strategy/1";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VarInfo {
    pub name: String,
    pub player: Player,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson<M> {
    pub id: usize,
    pub assignment: IndexMap<String, String>,
    pub memory: M,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TransitionJson<A> {
    pub from: usize,
    pub input: IndexMap<String, String>,
    pub to: usize,
    pub annotation: A,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrategyJson<M, A> {
    pub schema: String,
    pub kind: String,
    pub spec: String,
    pub variables: Vec<VarInfo>,
    pub states: Vec<StateJson<M>>,
    pub initial: Vec<usize>,
    pub transitions: Vec<TransitionJson<A>>,
}

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("malformed strategy JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema `{0}`")]
    Schema(String),
    #[error("unknown variable or value `{0}`")]
    Unknown(String),
}

fn values_of(d: &Domain) -> Vec<String> {
    (0..d.size()).map(|x| display_value(d, x)).collect()
}

pub(crate) fn variables(p: &Gr1Problem) -> Vec<VarInfo> {
    p.vars.iter().map(|v| VarInfo { name: v.name.clone(), player: v.player, values: values_of(&v.domain) }).collect()
}

pub(crate) fn assignment(p: &Gr1Problem, values: &[usize], only: Option<Player>) -> IndexMap<String, String> {
    p.vars
        .iter()
        .zip(values)
        .filter(|(v, _)| only.is_none_or(|pl| v.player == pl))
        .map(|(v, &x)| (v.name.clone(), display_value(&v.domain, x)))
        .collect()
}

pub fn controller_json(c: &Controller, p: &Gr1Problem) -> String {
    let doc = StrategyJson {
        schema: SCHEMA.into(),
        kind: "controller".into(),
        spec: p.name.clone(),
        variables: variables(p),
        states: c
            .states
            .iter()
            .enumerate()
            .map(|(id, s)| StateJson { id, assignment: assignment(p, &s.values, None), memory: s.memory })
            .collect(),
        initial: c.initial.clone(),
        transitions: c
            .transitions
            .iter()
            .map(|t| TransitionJson {
                from: t.from,
                input: assignment(p, &t.input, Some(Player::Env)),
                to: t.to,
                annotation: t.annotation.clone(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CounterMemory {
    pub rank: usize,
    pub starved: usize,
    pub env_justice: usize,
}

pub fn counter_json(cs: &CounterStrategy, p: &Gr1Problem) -> String {
    let mut transitions = vec![];
    for (from, s) in cs.states.iter().enumerate() {
        for &to in &s.successors {
            transitions.push(TransitionJson {
                from,
                input: assignment(p, s.env_move.as_deref().unwrap_or_default(), Some(Player::Env)),
                to,
                annotation: s.annotation.clone(),
            });
        }
    }
    let doc: StrategyJson<CounterMemory, Option<CounterAnnotation>> = StrategyJson {
        schema: SCHEMA.into(),
        kind: "counter_strategy".into(),
        spec: p.name.clone(),
        variables: variables(p),
        states: cs
            .states
            .iter()
            .enumerate()
            .map(|(id, s)| StateJson {
                id,
                assignment: assignment(p, &s.values, None),
                memory: CounterMemory { rank: s.memory.0, starved: s.memory.1, env_justice: s.memory.2 },
            })
            .collect(),
        initial: cs.initial.clone(),
        transitions,
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

/// Read back a controller written by [`controller_json`].
pub fn import_controller(text: &str) -> Result<Controller, ExportError> {
    let doc: StrategyJson<usize, Annotation> = serde_json::from_str(text)?;
    if doc.schema != SCHEMA || doc.kind != "controller" {
        return Err(ExportError::Schema(format!("{} / {}", doc.schema, doc.kind)));
    }
    let decode = |a: &IndexMap<String, String>| -> Result<Vec<usize>, ExportError> {
        doc.variables
            .iter()
            .map(|v| match a.get(&v.name) {
                None => Ok(0),
                Some(x) => v.values.iter().position(|y| y == x).ok_or_else(|| ExportError::Unknown(format!("{}={x}", v.name))),
            })
            .collect()
    };
    let mut states = vec![];
    for s in &doc.states {
        states.push(ControllerState { values: decode(&s.assignment)?, memory: s.memory });
    }
    let mut transitions = vec![];
    for t in &doc.transitions {
        transitions.push(Transition { from: t.from, input: decode(&t.input)?, to: t.to, annotation: t.annotation.clone() });
    }
    let mut c = Controller {
        var_names: doc.variables.iter().map(|v| v.name.clone()).collect(),
        states,
        initial: doc.initial,
        transitions,
        out: vec![],
    };
    c.rebuild_index();
    Ok(c)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn state_label(p: &Gr1Problem, values: &[usize]) -> String {
    p.vars
        .iter()
        .zip(values)
        .filter(|(v, _)| v.kind == crate::problem::VarKind::Declared)
        .map(|(v, &x)| format!("{}={}", v.name, display_value(&v.domain, x)))
        .collect::<Vec<_>>()
        .join("\\n")
}

pub fn controller_dot(c: &Controller, p: &Gr1Problem) -> String {
    let mut out = String::from("digraph controller {\n  node [shape=box, fontsize=9];\n");
    for (id, s) in c.states.iter().enumerate() {
        let shape = if c.initial.contains(&id) { ", peripheries=2" } else { "" };
        out.push_str(&format!("  s{id} [label=\"{id} (j={})\\n{}\"{shape}];\n", s.memory, state_label(p, &s.values)));
    }
    for t in &c.transitions {
        let (kind, color) = match t.annotation.kind {
            ReasonKind::GoalSatisfied => ("GoalSatisfied", "darkgreen"),
            ReasonKind::ApproachGoal => ("ApproachGoal", "blue"),
            ReasonKind::PreventEnvJustice => ("PreventEnvJustice", "red"),
        };
        out.push_str(&format!(
            "  s{} -> s{} [label=\"{kind}: {}\", color={color}, class=\"{kind}\"];\n",
            t.from,
            t.to,
            dot_escape(&t.annotation.constraint_label)
        ));
    }
    out.push_str("}\n");
    out
}

pub fn counter_dot(cs: &CounterStrategy, p: &Gr1Problem) -> String {
    let mut out = String::from("digraph counter_strategy {\n  node [shape=box, fontsize=9];\n");
    for (id, s) in cs.states.iter().enumerate() {
        let shape = if cs.initial.contains(&id) { ", peripheries=2" } else { "" };
        let (r, j, i) = s.memory;
        let note = s.annotation.as_ref().map(|a| format!("{:?}", a.kind)).unwrap_or_default();
        out.push_str(&format!(
            "  s{id} [label=\"{id} (r={r} j={j} i={i})\\n{note}\\n{}\"{shape}];\n",
            state_label(p, &s.values)
        ));
        for &t in &s.successors {
            out.push_str(&format!("  s{id} -> s{t};\n"));
        }
    }
    out.push_str("}\n");
    out
}
