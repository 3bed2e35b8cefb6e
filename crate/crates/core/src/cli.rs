//! The `gr1` command line.
//!
//! Exit codes: 0 success, 1 specification error, 2 unrealizable (`check`,
//! `synth`), 3 internal error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::forklift::{self, world::scripts, Script, SimConfig, SimError};
use crate::patterns::{catalog, catalog_text};
use crate::pipeline::{self, PipelineError, Strategy};
use crate::playout::{server, Service};
use crate::report::SpecReport;
use crate::solver::Verdict;
use crate::strategy::{controller_dot, controller_json, counter_dot, counter_json};

pub const EXIT_OK: u8 = 0;
pub const EXIT_SPEC_ERROR: u8 = 1;
pub const EXIT_UNREALIZABLE: u8 = 2;
pub const EXIT_INTERNAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "gr1", version, about = "GR(1) synthesis, play-out and simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Print machine-readable JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Write the strategy as JSON to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the strategy graph in DOT format to this file.
    #[arg(long)]
    pub dot: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide realizability and report sizes and timings.
    Check {
        /// Bundled specification name or `.gr1spec` path.
        spec: String,
        #[arg(long)]
        json: bool,
        /// Also check well-separation (realizable specifications only).
        #[arg(long)]
        separation: bool,
    },
    /// Synthesize a controller.
    Synth {
        spec: String,
        #[command(flatten)]
        output: Output,
    },
    /// Extract a counter-strategy for an unrealizable specification.
    Counter {
        spec: String,
        #[command(flatten)]
        output: Output,
    },
    /// Run a controller in closed loop with the simulated forklift world.
    Sim {
        #[arg(long)]
        spec: String,
        /// Script file, or one of `benign`, `emergency`, `obstacles`.
        #[arg(long, default_value = "benign")]
        script: String,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        /// Ticks a lift operation takes; defaults to 3 for specifications
        /// with lift acknowledgments and 0 otherwise.
        #[arg(long)]
        lift_ticks: Option<usize>,
        /// Write the full run report as JSON to this file.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Interactive play-out service.
    Playout {
        #[command(subcommand)]
        command: PlayoutCommand,
    },
    /// The specification pattern catalog.
    Patterns {
        #[command(subcommand)]
        command: PatternsCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum PlayoutCommand {
    /// Serve the HTTP API on localhost.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Specifications to synthesize before accepting requests.
        #[arg(long, value_delimiter = ',')]
        preload: Vec<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum PatternsCommand {
    List {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Spec(#[from] PipelineError),
    #[error("{0}")]
    Script(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("{path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Spec(_) | CliError::Script(_) => EXIT_SPEC_ERROR,
            _ => EXIT_INTERNAL,
        }
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Write { path: path.display().to_string(), source })
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn print(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    writeln!(out, "{text}").map_err(|e| CliError::Internal(format!("stdout: {e}")))
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Realizable => EXIT_OK,
        Verdict::Unrealizable => EXIT_UNREALIZABLE,
    }
}

fn export(s: &pipeline::Synthesis, strategy: &Strategy, output: &Output) -> Result<(), CliError> {
    let p = &s.game.problem;
    let (text, dot) = match strategy {
        Strategy::Controller(c) => (controller_json(c, p), controller_dot(c, p)),
        Strategy::Counter(cs) => (counter_json(cs, p), counter_dot(cs, p)),
    };
    if let Some(path) = &output.out {
        write_file(path, &text)?;
    }
    if let Some(path) = &output.dot {
        write_file(path, &dot)?;
    }
    Ok(())
}

fn load_script(name_or_path: &str) -> Result<Script, CliError> {
    let text = match scripts::named(name_or_path) {
        Some(t) => t.to_string(),
        None => std::fs::read_to_string(name_or_path).map_err(|e| CliError::Script(format!("{name_or_path}: {e}")))?,
    };
    Script::from_json(&text).map_err(|e| CliError::Script(format!("{name_or_path}: {e}")))
}

/// Run a parsed command, printing to `out`; returns the exit code.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    match cli.command {
        Command::Check { spec, json: as_json, separation } => {
            let mut s = pipeline::synthesize(pipeline::load(&spec)?)?;
            let strategy = s.strategy();
            let r = SpecReport::new(&mut s, &strategy, separation);
            print(out, &if as_json { json(&r) } else { r.to_string() })?;
            Ok(verdict_code(s.verdict()))
        }
        Command::Synth { spec, output } => {
            let (mut s, strategy) = pipeline::run(&spec)?;
            export(&s, &strategy, &output)?;
            let r = SpecReport::new(&mut s, &strategy, false);
            print(out, &if output.json { json(&r) } else { r.to_string() })?;
            Ok(verdict_code(s.verdict()))
        }
        Command::Counter { spec, output } => {
            let (mut s, strategy) = pipeline::run(&spec)?;
            if s.verdict() == Verdict::Realizable {
                print(out, &format!("{spec} is realizable; there is no counter-strategy"))?;
                return Ok(EXIT_OK);
            }
            export(&s, &strategy, &output)?;
            let r = SpecReport::new(&mut s, &strategy, false);
            print(out, &if output.json { json(&r) } else { r.to_string() })?;
            Ok(EXIT_OK)
        }
        Command::Sim { spec, script, steps, lift_ticks, report, json: as_json } => {
            let script = load_script(&script)?;
            let (mut s, strategy) = pipeline::run(&spec)?;
            let Strategy::Controller(c) = strategy else {
                print(out, &format!("{spec} is unrealizable; nothing to simulate"))?;
                return Ok(EXIT_UNREALIZABLE);
            };
            let lift_ticks = lift_ticks.unwrap_or_else(|| forklift::default_lift_ticks(&s));
            let r = forklift::run_closed_loop(&mut s, &c, &script, SimConfig { steps, lift_ticks })?;
            if let Some(path) = &report {
                write_file(path, &json(&r))?;
            }
            if as_json {
                print(out, &json(&r))?;
            } else {
                print(
                    out,
                    &format!(
                        "{}: {} steps, {} deliveries, {} guarantee violations, {} assumption violations, {} cargo overruns, {} motion actions during emergency{}",
                        r.spec,
                        r.steps,
                        r.deliveries,
                        r.guarantee_violations,
                        r.assumption_violations,
                        r.cargo_overruns,
                        r.motion_during_emergency,
                        r.halted.as_ref().map(|h| format!(" (halted: {h})")).unwrap_or_default()
                    ),
                )?;
            }
            Ok(EXIT_OK)
        }
        Command::Playout { command: PlayoutCommand::Serve { port, preload } } => {
            let service = Arc::new(Service::new());
            for name in &preload {
                service.load_artifact(name).map_err(|e| match e {
                    crate::playout::ServiceError::Spec(e) => CliError::Spec(e),
                    e => CliError::Script(e.to_string()),
                })?;
            }
            let rt = tokio::runtime::Runtime::new().map_err(|e| CliError::Internal(e.to_string()))?;
            print(out, &format!("serving on http://127.0.0.1:{port}"))?;
            rt.block_on(server::serve(service, port)).map_err(|e| CliError::Internal(format!("server: {e}")))?;
            Ok(EXIT_OK)
        }
        Command::Patterns { command: PatternsCommand::List { json: as_json } } => {
            if as_json {
                let entries: Vec<_> = catalog()
                    .iter()
                    .map(|e| {
                        serde_json::json!({
                            "id": e.id.name(), "name": e.name, "syntax": e.syntax, "ltl": e.ltl, "template": e.template
                        })
                    })
                    .collect();
                print(out, &json(&entries))?;
            } else {
                print(out, catalog_text().trim_end())?;
            }
            Ok(EXIT_OK)
        }
    }
}

/// Parse arguments and run; errors go to stderr.
pub fn run_args<I, T>(args: I, out: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_SPEC_ERROR } else { EXIT_OK };
        }
    };
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| execute(cli, out))) {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
        Err(_) => EXIT_INTERNAL,
    }
}

pub fn main() -> ExitCode {
    ExitCode::from(run_args(std::env::args_os(), &mut std::io::stdout()))
}
