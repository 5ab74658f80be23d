//! Concrete syntax: parsing PDHOL source text and printing it back.
//!
//! The printer and parser are inverse up to alpha-equivalence: for every
//! well-scoped problem `p`, `parse_problem(print_problem(p))` succeeds and is
//! alpha-equal to `p`.

mod lexer;
mod parser;
mod printer;

use serde::Serialize;

use crate::ast::{Problem, Span};

pub use parser::parse_problem;
pub use printer::{print_problem, print_term, print_type};

/// Position of a piece of source text, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub file: String,
    pub line: u32,
    pub column: u32,
    pub length: u32,
}

impl SourceSpan {
    pub fn new(file: &str, span: Span) -> SourceSpan {
        SourceSpan { file: file.to_string(), line: span.line, column: span.col, length: span.len }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: SourceSpan,
}

impl Diagnostic {
    pub fn error(message: impl Into<String>, file: &str, span: Span) -> Diagnostic {
        Diagnostic {
            severity: Severity::Error,
            message: message.into(),
            span: SourceSpan::new(file, span),
        }
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{}:{}:{}: {}: {}",
            self.span.file, self.span.line, self.span.column, sev, self.message
        )
    }
}

/// Convenience for tests and tools: parse or panic with rendered diagnostics.
pub fn parse_problem_or_panic(source: &str, file: &str) -> Problem {
    match parse_problem(source, file) {
        Ok(p) => p,
        Err(diags) => {
            let rendered: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
            panic!("parse failed:\n{}", rendered.join("\n"));
        }
    }
}
