//! Interactive play-out of synthesized strategies.
//!
//! A [`Service`] holds artifacts (synthesized specifications) and sessions.
//! Each session lets a human play one side of the game against the
//! controller or counter-strategy, or both sides freely. [`server`] exposes
//! the service over HTTP.

pub mod server;
mod session;

use std::sync::{Arc, Mutex, RwLock};

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::display_value;
use crate::pipeline::{self, PipelineError, Strategy};

pub use session::{
    Artifact, Assignment, JusticeScore, Mode, PlayError, Reason, Session, SessionView, TraceStep, ViolationRecord,
    LEGAL_MOVES_CAP,
};

/// Version tag carried by every payload.
pub const SCHEMA: &str = "gr1-playout/1";

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("unknown session `{0}`")]
    UnknownSession(String),
    #[error("unknown artifact `{0}`")]
    UnknownArtifact(String),
    #[error("request needs exactly one of `spec` and `artifact`")]
    BadRequest,
    #[error(transparent)]
    Spec(#[from] PipelineError),
    #[error(transparent)]
    Play(#[from] PlayError),
}

impl ServiceError {
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::UnknownSession(_) | ServiceError::UnknownArtifact(_) => "not_found",
            ServiceError::BadRequest => "bad_request",
            ServiceError::Spec(_) => "spec_error",
            ServiceError::Play(e) => e.code(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CreateSession {
    /// Specification source text.
    #[serde(default)]
    pub spec: Option<String>,
    /// Name of a loaded or bundled artifact.
    #[serde(default)]
    pub artifact: Option<String>,
    pub mode: Mode,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SessionSummary {
    pub id: String,
    pub artifact: String,
    pub mode: Mode,
    pub steps: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArtifactSummary {
    pub name: String,
    pub verdict: String,
    pub strategy: String,
    pub states: usize,
    pub loaded: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphNode {
    pub id: usize,
    pub initial: bool,
    pub values: IndexMap<String, String>,
    pub memory: serde_json::Value,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    pub label: Option<String>,
}

/// One page of a strategy graph: the nodes `offset..offset+limit` and the
/// edges leaving them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphPage {
    pub schema: String,
    pub artifact: String,
    pub kind: String,
    pub total: usize,
    pub offset: usize,
    pub limit: usize,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
}

#[derive(Default)]
pub struct Service {
    artifacts: RwLock<IndexMap<String, Arc<Artifact>>>,
    sessions: Mutex<IndexMap<String, Arc<Mutex<Session>>>>,
    next_id: Mutex<u64>,
}

impl Service {
    pub fn new() -> Service {
        Service::default()
    }

    /// Synthesize a bundled specification or file and register it.
    pub fn load_artifact(&self, name_or_path: &str) -> Result<Arc<Artifact>, ServiceError> {
        if let Some(a) = self.artifacts.read().expect("artifact table").get(name_or_path) {
            return Ok(a.clone());
        }
        if crate::corpus::source(name_or_path).is_none() && !std::path::Path::new(name_or_path).exists() {
            return Err(ServiceError::UnknownArtifact(name_or_path.to_string()));
        }
        let (s, strategy) = pipeline::run(name_or_path)?;
        Ok(self.register(name_or_path, s, strategy))
    }

    /// Synthesize specification text and register it under its `SPEC` name.
    pub fn load_text(&self, text: &str) -> Result<Arc<Artifact>, ServiceError> {
        let loaded = pipeline::load_text("request.gr1spec", text)?;
        let mut name = loaded.doc.name.clone();
        let mut s = pipeline::synthesize(loaded)?;
        let strategy = s.strategy();
        let table = self.artifacts.read().expect("artifact table");
        let base = name.clone();
        let mut k = 1;
        while table.contains_key(&name) {
            k += 1;
            name = format!("{base}-{k}");
        }
        drop(table);
        Ok(self.register(&name, s, strategy))
    }

    fn register(&self, name: &str, s: pipeline::Synthesis, strategy: Strategy) -> Arc<Artifact> {
        let verdict = s.verdict();
        let a = Arc::new(Artifact::new(name, s.game, verdict, strategy));
        self.artifacts.write().expect("artifact table").insert(name.to_string(), a.clone());
        a
    }

    pub fn artifacts(&self) -> Vec<ArtifactSummary> {
        let table = self.artifacts.read().expect("artifact table");
        let mut out: Vec<ArtifactSummary> = table
            .values()
            .map(|a| ArtifactSummary {
                name: a.name.clone(),
                verdict: format!("{:?}", a.verdict),
                strategy: a.strategy.kind().into(),
                states: a.strategy.num_states(),
                loaded: true,
            })
            .collect();
        for name in crate::corpus::names() {
            if !table.contains_key(name) {
                out.push(ArtifactSummary {
                    name: name.to_string(),
                    verdict: "unknown".into(),
                    strategy: "none".into(),
                    states: 0,
                    loaded: false,
                });
            }
        }
        out
    }

    pub fn create_session(&self, req: &CreateSession) -> Result<SessionView, ServiceError> {
        let artifact = match (&req.spec, &req.artifact) {
            (Some(text), None) => self.load_text(text)?,
            (None, Some(name)) => self.load_artifact(name)?,
            _ => return Err(ServiceError::BadRequest),
        };
        let id = {
            let mut n = self.next_id.lock().expect("id counter");
            *n += 1;
            format!("s{}", *n)
        };
        let session = Session::new(&id, artifact, req.mode)?;
        let view = session.view();
        self.sessions.lock().expect("session table").insert(id, Arc::new(Mutex::new(session)));
        Ok(view)
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ServiceError> {
        self.sessions
            .lock()
            .expect("session table")
            .get(id)
            .cloned()
            .ok_or_else(|| ServiceError::UnknownSession(id.to_string()))
    }

    pub fn sessions(&self) -> Vec<SessionSummary> {
        let table: Vec<_> = self.sessions.lock().expect("session table").values().cloned().collect();
        table
            .iter()
            .map(|s| {
                let s = s.lock().expect("session");
                SessionSummary { id: s.id.clone(), artifact: s.artifact().name.clone(), mode: s.mode, steps: s.trace().len() }
            })
            .collect()
    }

    pub fn view(&self, id: &str) -> Result<SessionView, ServiceError> {
        Ok(self.session(id)?.lock().expect("session").view())
    }

    pub fn step(&self, id: &str, assignment: &Assignment) -> Result<SessionView, ServiceError> {
        let s = self.session(id)?;
        let mut s = s.lock().expect("session");
        s.step(assignment)?;
        Ok(s.view())
    }

    pub fn trace(&self, id: &str) -> Result<Vec<TraceStep>, ServiceError> {
        Ok(self.session(id)?.lock().expect("session").trace().to_vec())
    }

    pub fn graph(&self, name: &str, offset: usize, limit: usize) -> Result<GraphPage, ServiceError> {
        let a = self.load_artifact(name)?;
        Ok(graph_page(&a, offset, limit))
    }
}

fn graph_page(a: &Artifact, offset: usize, limit: usize) -> GraphPage {
    let p = &a.problem;
    let values = |v: &[usize]| -> IndexMap<String, String> {
        p.vars
            .iter()
            .enumerate()
            .filter(|(_, var)| var.kind != crate::problem::VarKind::PatternAux)
            .map(|(i, var)| (var.name.clone(), display_value(&var.domain, v[i])))
            .collect()
    };
    let total = a.strategy.num_states();
    let range = offset.min(total)..offset.saturating_add(limit).min(total);
    let (mut nodes, mut edges) = (vec![], vec![]);
    match &a.strategy {
        Strategy::Controller(c) => {
            for s in range {
                let st = &c.states[s];
                nodes.push(GraphNode {
                    id: s,
                    initial: c.initial.contains(&s),
                    values: values(&st.values),
                    memory: serde_json::json!({ "goal": st.memory }),
                });
                for t in c.successors(s) {
                    let label = format!("{:?}:{}", t.annotation.kind, t.annotation.constraint_label);
                    edges.push(GraphEdge { from: s, to: t.to, label: Some(label) });
                }
            }
        }
        Strategy::Counter(cs) => {
            for s in range {
                let st = &cs.states[s];
                let (r, j, i) = st.memory;
                nodes.push(GraphNode {
                    id: s,
                    initial: cs.initial.contains(&s),
                    values: values(&st.values),
                    memory: serde_json::json!({ "rank": r, "starved": j, "env_justice": i }),
                });
                let label = st.annotation.as_ref().map(|an| format!("{:?}:{}", an.kind, an.starved_label));
                for &t in &st.successors {
                    edges.push(GraphEdge { from: s, to: t, label: label.clone() });
                }
            }
        }
    }
    GraphPage {
        schema: SCHEMA.into(),
        artifact: a.name.clone(),
        kind: a.strategy.kind().into(),
        total,
        offset,
        limit,
        nodes,
        edges,
    }
}
