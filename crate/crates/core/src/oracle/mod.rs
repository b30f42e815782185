//! Reference semantics and cross-validation.
//!
//! The NP-SPEC side enumerates every guess and evaluates the stratified
//! program directly on the analyzed spec. The ASP side grounds a translated
//! program naively and enumerates its answer sets by brute force. The two
//! sides share no evaluation code, so agreement between them is evidence
//! that the translation is correct.

mod answer_sets;
mod check;
mod eval;
mod ground;
mod guess;
mod solve;

use std::fmt;

use num_bigint::BigUint;

use crate::diagnostics::{Diagnostic, ExitCode, Pos, Severity};
use crate::value::{fmt_atom, Tuple};

pub use answer_sets::{enumerate_answer_sets, DEFAULT_ATOM_LIMIT};
pub use check::{cross_check, cross_check_program, CheckLimits, CheckReport, CombinationResult, Counterexample, Verdict};
pub use eval::{eval_stratified, Interpretation};
pub use ground::{naive_ground, GroundAggregate, GroundHead, GroundProgram, GroundRule, DEFAULT_GROUND_LIMIT};
pub use guess::{enumerate_guesses, Guess, GuessSlot, GuessSpace, Guesses, DEFAULT_GUESS_LIMIT};
pub use solve::{solve, Answer, SolveMode, Solutions};

/// A ground atom, optionally classically negated.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub pred: String,
    pub strong_neg: bool,
    pub args: Tuple,
}

impl GroundAtom {
    pub fn new(pred: impl Into<String>, args: Tuple) -> Self {
        GroundAtom { pred: pred.into(), strong_neg: false, args }
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.strong_neg {
            f.write_str("-")?;
        }
        f.write_str(&fmt_atom(&self.pred, &self.args))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("guess space has {count} candidates, more than the limit of {limit}")]
    GuessLimit { count: BigUint, limit: u64 },
    #[error("ground program has {atoms} undecided atoms, more than the limit of {limit}")]
    AtomLimit { atoms: usize, limit: usize },
    #[error("grounding produced more than {limit} atoms")]
    GroundLimit { limit: usize },
    #[error("{pos}: {message}")]
    Arithmetic { message: String, pos: Pos },
    #[error("grounding failed: {0}")]
    Ground(String),
}

impl OracleError {
    pub fn code(&self) -> &'static str {
        match self {
            OracleError::GuessLimit { .. } => "E0401",
            OracleError::AtomLimit { .. } => "E0402",
            OracleError::GroundLimit { .. } => "E0403",
            OracleError::Arithmetic { .. } => "E0404",
            OracleError::Ground(_) => "E0405",
        }
    }

    /// Ceiling refusals exit with 4, evaluation errors with 2.
    pub fn exit_code(&self) -> ExitCode {
        match self {
            OracleError::GuessLimit { .. } | OracleError::AtomLimit { .. } | OracleError::GroundLimit { .. } => {
                ExitCode::Ceiling
            }
            OracleError::Arithmetic { .. } | OracleError::Ground(_) => ExitCode::Semantic,
        }
    }

    pub fn diagnostic(&self) -> Diagnostic {
        match self {
            OracleError::Arithmetic { message, pos } => Diagnostic::new(Severity::Error, self.code(), message.clone(), *pos),
            other => Diagnostic::new(Severity::Error, self.code(), other.to_string(), Pos::default()),
        }
    }

    pub fn is_ceiling(&self) -> bool {
        self.exit_code() == ExitCode::Ceiling
    }
}
