//! Source positions, structured diagnostics and the crate-wide error type.

use std::fmt;

use serde::Serialize;

use crate::analyzer::AnalysisError;
use crate::frontend::SyntaxError;
use crate::oracle::OracleError;
use crate::translator::TranslateError;

/// A 1-based line/column position in NP-SPEC source.
///
/// Positions never participate in structural equality, hashing or
/// ordering, so two ASTs that differ only in layout compare equal.
#[derive(Clone, Copy, Debug, Default, Eq)]
pub struct Pos {
    pub line: u32,
    pub column: u32,
}

impl Pos {
    pub fn new(line: u32, column: u32) -> Self {
        Pos { line, column }
    }
}

impl PartialEq for Pos {
    fn eq(&self, _other: &Self) -> bool {
        true
    }
}

impl std::hash::Hash for Pos {
    fn hash<H: std::hash::Hasher>(&self, _state: &mut H) {}
}

impl PartialOrd for Pos {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pos {
    fn cmp(&self, _other: &Self) -> std::cmp::Ordering {
        std::cmp::Ordering::Equal
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Note,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Note => "note",
        })
    }
}

/// Machine-readable diagnostic record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub message: String,
    pub line: u32,
    pub column: u32,
}

impl Diagnostic {
    pub fn new(severity: Severity, code: &'static str, message: impl Into<String>, pos: Pos) -> Self {
        Diagnostic {
            severity,
            code,
            message: message.into(),
            line: pos.line,
            column: pos.column,
        }
    }

    pub fn warning(code: &'static str, message: impl Into<String>, pos: Pos) -> Self {
        Self::new(Severity::Warning, code, message, pos)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("diagnostic serializes")
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(
                f,
                "{}[{}] {}:{}: {}",
                self.severity, self.code, self.line, self.column, self.message
            )
        } else {
            write!(f, "{}[{}]: {}", self.severity, self.code, self.message)
        }
    }
}

/// Process exit codes used by the command-line tool.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(i32)]
pub enum ExitCode {
    Success = 0,
    Input = 1,
    Semantic = 2,
    CheckFailed = 3,
    Ceiling = 4,
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl Error {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Error::Io(_) | Error::Syntax(_) => ExitCode::Input,
            Error::Analysis(_) | Error::Translate(_) => ExitCode::Semantic,
            Error::Oracle(e) => e.exit_code(),
        }
    }

    pub fn diagnostic(&self) -> Diagnostic {
        match self {
            Error::Io(e) => Diagnostic::new(Severity::Error, "E0001", e.to_string(), Pos::default()),
            Error::Syntax(e) => e.diagnostic(),
            Error::Analysis(e) => e.diagnostic(),
            Error::Translate(e) => e.diagnostic(),
            Error::Oracle(e) => e.diagnostic(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
