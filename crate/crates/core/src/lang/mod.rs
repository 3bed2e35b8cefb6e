//! Specification language: syntax tree, parser, type checker, DEFINE
//! expansion, pretty printer and auxiliary-variable validation.

pub mod ast;
pub mod aux;
pub mod parser;
pub mod pretty;
pub mod typecheck;

pub use ast::*;
pub use aux::{validate_aux, validate_game_aux, validate_game_aux_of, AuxError};
pub use parser::{parse, parse_expr};
pub use pretty::{pretty, pretty_expr};
pub use typecheck::{expand_defines, typecheck};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LangError {
    #[error("{line}:{col}: {message}{}", expected_suffix(expected))]
    Parse { line: u32, col: u32, message: String, expected: Vec<String> },
    #[error("{line}:{col}: duplicate identifier `{name}`")]
    Duplicate { name: String, line: u32, col: u32 },
    #[error("{line}:{col}: {message}")]
    Type { line: u32, col: u32, message: String },
}

impl LangError {
    pub fn position(&self) -> (u32, u32) {
        match self {
            LangError::Parse { line, col, .. }
            | LangError::Duplicate { line, col, .. }
            | LangError::Type { line, col, .. } => (*line, *col),
        }
    }
}

fn expected_suffix(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(", expected {}", expected.join(" or "))
    }
}

/// Parse and type check. The returned document still contains DEFINE references.
pub fn load(text: &str) -> Result<SpecDocument, Vec<LangError>> {
    let doc = parse(text).map_err(|e| vec![e])?;
    typecheck(&doc)?;
    Ok(doc)
}
