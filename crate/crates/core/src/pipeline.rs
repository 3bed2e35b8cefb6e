//! End-to-end synthesis of one specification: parse, check, compile, build
//! the game, solve, extract a strategy. Used by the CLI, the play-out service
//! and the simulator.

use std::path::Path;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::corpus;
use crate::game::{BuildError, GameStructure};
use crate::lang::{self, validate_game_aux_of, AuxError, LangError, SpecDocument};
use crate::problem::{compile, CompileError};
use crate::solver::{check_realizability, Solution, Verdict};
use crate::strategy::{extract_controller, extract_counterstrategy, Controller, CounterStrategy};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    /// Errors already carry `line:col`; `file` is prepended when printing.
    #[error("{}", .errors.iter().map(|e| format!("{file}:{e}")).collect::<Vec<_>>().join("\n"))]
    Lang { file: String, errors: Vec<LangError> },
    #[error("{file}: {source}")]
    Aux { file: String, source: AuxError },
    #[error("{file}: {source}")]
    Build { file: String, source: BuildError },
}

impl PipelineError {
    /// Specification errors (as opposed to I/O problems).
    pub fn is_spec_error(&self) -> bool {
        !matches!(self, PipelineError::Io { .. })
    }
}

/// A document with the name it was loaded under.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub file: String,
    pub doc: SpecDocument,
    pub parse_time: Duration,
}

/// Load a bundled specification by name (`v1`, `v2_c3_bad_ack`, ...) or a
/// `.gr1spec` file by path.
pub fn load(name_or_path: &str) -> Result<Loaded, PipelineError> {
    let (file, text) = match corpus::source(name_or_path) {
        Some(text) if !Path::new(name_or_path).exists() => (format!("{name_or_path}.gr1spec"), text.to_string()),
        _ => {
            let text = std::fs::read_to_string(name_or_path)
                .map_err(|source| PipelineError::Io { path: name_or_path.to_string(), source })?;
            (name_or_path.to_string(), text)
        }
    };
    load_text(&file, &text)
}

pub fn load_text(file: &str, text: &str) -> Result<Loaded, PipelineError> {
    let t = Instant::now();
    let mut doc = lang::load(text).map_err(|errors| PipelineError::Lang { file: file.to_string(), errors })?;
    if doc.name.is_empty() {
        doc.name = Path::new(file).file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    }
    Ok(Loaded { file: file.to_string(), doc, parse_time: t.elapsed() })
}

#[derive(Debug, Clone, Copy, Default, serde::Serialize)]
pub struct Timings {
    pub parse: Duration,
    pub compile: Duration,
    pub realizability: Duration,
    pub construction: Duration,
}

#[derive(Debug, Clone)]
pub enum Strategy {
    Controller(Controller),
    Counter(CounterStrategy),
}

impl Strategy {
    pub fn num_states(&self) -> usize {
        match self {
            Strategy::Controller(c) => c.num_states(),
            Strategy::Counter(c) => c.num_states(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Strategy::Controller(_) => "controller",
            Strategy::Counter(_) => "counter_strategy",
        }
    }

    pub fn controller(&self) -> Option<&Controller> {
        match self {
            Strategy::Controller(c) => Some(c),
            Strategy::Counter(_) => None,
        }
    }

    pub fn counter(&self) -> Option<&CounterStrategy> {
        match self {
            Strategy::Counter(c) => Some(c),
            Strategy::Controller(_) => None,
        }
    }
}

pub struct Synthesis {
    pub file: String,
    pub doc: SpecDocument,
    pub game: GameStructure,
    pub solution: Solution,
    pub timings: Timings,
}

impl Synthesis {
    pub fn verdict(&self) -> Verdict {
        self.solution.verdict
    }

    /// Extract the controller or counter-strategy, timing it as construction.
    pub fn strategy(&mut self) -> Strategy {
        let t = Instant::now();
        let s = match self.solution.verdict {
            Verdict::Realizable => Strategy::Controller(extract_controller(&mut self.game, &self.solution.sys)),
            Verdict::Unrealizable => {
                let env = self.solution.env.as_ref().expect("dual memory for unrealizable games");
                Strategy::Counter(extract_counterstrategy(&mut self.game, env))
            }
        };
        self.timings.construction = t.elapsed();
        s
    }
}

/// Compile, validate auxiliary variables, build and solve.
pub fn synthesize(loaded: Loaded) -> Result<Synthesis, PipelineError> {
    let Loaded { file, doc, parse_time } = loaded;
    let t = Instant::now();
    let problem = compile(&doc).map_err(|e| match e {
        CompileError::Lang(errors) => PipelineError::Lang { file: file.clone(), errors },
    })?;
    let mut game = GameStructure::build(problem).map_err(|source| PipelineError::Build { file: file.clone(), source })?;
    validate_game_aux_of(&mut game, |v| v.kind == crate::problem::VarKind::ManualAux)
        .map_err(|source| PipelineError::Aux { file: file.clone(), source })?;
    let compile_time = t.elapsed();
    let t = Instant::now();
    let solution = check_realizability(&mut game);
    let timings = Timings { parse: parse_time, compile: compile_time, realizability: t.elapsed(), construction: Duration::ZERO };
    Ok(Synthesis { file, doc, game, solution, timings })
}

/// `load` followed by `synthesize` and strategy extraction.
pub fn run(name_or_path: &str) -> Result<(Synthesis, Strategy), PipelineError> {
    let mut s = synthesize(load(name_or_path)?)?;
    let strategy = s.strategy();
    Ok((s, strategy))
}
