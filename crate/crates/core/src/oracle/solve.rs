use std::collections::BTreeSet;
use std::fmt;

use crate::analyzer::Analysis;

use super::eval::{Evaluator, Interpretation};
use super::guess::{enumerate_guesses, GuessSpace};
use super::{GroundAtom, OracleError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolveMode {
    First,
    All,
    Count,
}

/// An interpretation restricted to guessed and derived predicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Answer {
    pub atoms: BTreeSet<GroundAtom>,
}

impl Answer {
    pub fn project(analysis: &Analysis, interp: &Interpretation) -> Self {
        let table = &analysis.table;
        let atoms = interp
            .relations
            .iter()
            .filter(|(p, _)| table.guessed.contains_key(*p) || table.derived.contains_key(*p))
            .flat_map(|(p, ts)| ts.iter().map(move |t| GroundAtom::new(p.clone(), t.clone())))
            .collect();
        Answer { atoms }
    }
}

/// One fact per line, sorted.
impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.atoms {
            writeln!(f, "{a}.")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solutions {
    pub count: u64,
    /// Empty in count mode.
    pub answers: Vec<Answer>,
}

/// Runs every guess through the stratified program and keeps those that
/// do not derive `fail`, in enumeration order.
pub fn solve(analysis: &Analysis, mode: SolveMode, limit: u64) -> Result<Solutions, OracleError> {
    let space = GuessSpace::new(analysis);
    let guesses = enumerate_guesses(&space, limit)?;
    let evaluator = Evaluator::new(analysis);
    let mut out = Solutions { count: 0, answers: Vec::new() };
    for g in guesses {
        let interp = evaluator.eval(&g, true)?;
        if interp.fail {
            continue;
        }
        out.count += 1;
        if mode != SolveMode::Count {
            out.answers.push(Answer::project(analysis, &interp));
        }
        if mode == SolveMode::First {
            break;
        }
    }
    Ok(out)
}
