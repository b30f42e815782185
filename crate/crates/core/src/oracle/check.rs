//! Agreement between the oracle and the translation pipeline.

use std::collections::BTreeSet;
use std::fmt;

use crate::analyzer::Analysis;
use crate::diagnostics::ExitCode;
use crate::translator::{translate, AspProgram, EmitOptions};

use super::answer_sets::{enumerate_answer_sets, DEFAULT_ATOM_LIMIT};
use super::ground::{naive_ground, DEFAULT_GROUND_LIMIT};
use super::guess::DEFAULT_GUESS_LIMIT;
use super::solve::{solve, Answer, SolveMode};
use super::{GroundAtom, OracleError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckLimits {
    /// Maximum number of candidate guesses for the oracle.
    pub guesses: u64,
    /// Maximum number of undecided ground atoms for answer-set enumeration.
    pub atoms: usize,
    /// Maximum number of ground atoms and rule instances.
    pub ground: usize,
}

impl Default for CheckLimits {
    fn default() -> Self {
        CheckLimits { guesses: DEFAULT_GUESS_LIMIT, atoms: DEFAULT_ATOM_LIMIT, ground: DEFAULT_GROUND_LIMIT }
    }
}

/// The first answer found on one side only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub only_in_oracle: Option<Answer>,
    pub only_in_translation: Option<Answer>,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |a: &Answer| a.atoms.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
        if let Some(a) = &self.only_in_oracle {
            write!(f, "answer missing from translation: {{{}}}", show(a))?;
        }
        if let Some(a) = &self.only_in_translation {
            if self.only_in_oracle.is_some() {
                f.write_str("; ")?;
            }
            write!(f, "answer not admitted by the spec: {{{}}}", show(a))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(Counterexample),
    /// A ceiling was hit on one side.
    Inconclusive(String),
    /// The option combination cannot translate this spec.
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombinationResult {
    pub options: EmitOptions,
    pub verdict: Verdict,
    pub oracle_answers: Option<usize>,
    pub asp_answers: Option<usize>,
}

impl fmt::Display for CombinationResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let count = |c: Option<usize>| c.map_or("-".to_string(), |c| c.to_string());
        match &self.verdict {
            Verdict::Pass => write!(f, "PASS {} ({} answers)", self.options, count(self.oracle_answers)),
            Verdict::Fail(c) => write!(
                f,
                "FAIL {} (oracle {}, translation {}): {c}",
                self.options,
                count(self.oracle_answers),
                count(self.asp_answers)
            ),
            Verdict::Inconclusive(why) => write!(f, "INCONCLUSIVE {}: {why}", self.options),
            Verdict::Invalid(why) => write!(f, "INVALID {}: {why}", self.options),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub results: Vec<CombinationResult>,
}

impl CheckReport {
    pub fn failed(&self) -> bool {
        self.results.iter().any(|r| matches!(r.verdict, Verdict::Fail(_)))
    }

    pub fn inconclusive(&self) -> bool {
        self.results.iter().any(|r| matches!(r.verdict, Verdict::Inconclusive(_)))
    }

    /// 3 on any failure, otherwise 4 when some combination was inconclusive.
    pub fn exit_code(&self) -> ExitCode {
        if self.failed() {
            ExitCode::CheckFailed
        } else if self.inconclusive() {
            ExitCode::Ceiling
        } else {
            ExitCode::Success
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

fn project(analysis: &Analysis, model: &BTreeSet<GroundAtom>) -> Answer {
    let t = &analysis.table;
    Answer {
        atoms: model
            .iter()
            .filter(|a| !a.strong_neg && (t.guessed.contains_key(&a.pred) || t.derived.contains_key(&a.pred)))
            .cloned()
            .collect(),
    }
}

fn compare(oracle: &BTreeSet<Answer>, asp: &BTreeSet<Answer>) -> Verdict {
    if oracle == asp {
        return Verdict::Pass;
    }
    Verdict::Fail(Counterexample {
        only_in_oracle: oracle.difference(asp).next().cloned(),
        only_in_translation: asp.difference(oracle).next().cloned(),
    })
}

fn asp_answers(analysis: &Analysis, program: &AspProgram, limits: &CheckLimits) -> Result<Result<BTreeSet<Answer>, String>, OracleError> {
    let models = naive_ground(program, limits.ground).and_then(|g| enumerate_answer_sets(&g, limits.atoms));
    match models {
        Ok(m) => Ok(Ok(m.iter().map(|m| project(analysis, m)).collect())),
        Err(e) if e.is_ceiling() => Ok(Err(e.to_string())),
        Err(e) => Err(e),
    }
}

fn verdict(options: &EmitOptions, oracle: &Result<BTreeSet<Answer>, String>, asp: &Result<BTreeSet<Answer>, String>) -> CombinationResult {
    let mut result = CombinationResult {
        options: *options,
        verdict: Verdict::Pass,
        oracle_answers: oracle.as_ref().ok().map(BTreeSet::len),
        asp_answers: asp.as_ref().ok().map(BTreeSet::len),
    };
    result.verdict = match (oracle, asp) {
        (Ok(o), Ok(a)) => compare(o, a),
        (Err(why), _) | (_, Err(why)) => Verdict::Inconclusive(why.clone()),
    };
    result
}

/// Grounds and solves an already translated program and compares its
/// projected answer sets with `oracle`.
pub fn cross_check_program(
    analysis: &Analysis,
    oracle: &BTreeSet<Answer>,
    program: &AspProgram,
    options: &EmitOptions,
    limits: &CheckLimits,
) -> Result<CombinationResult, OracleError> {
    let asp = asp_answers(analysis, program, limits)?;
    Ok(verdict(options, &Ok(oracle.clone()), &asp))
}

fn oracle_answers(analysis: &Analysis, limits: &CheckLimits) -> Result<Result<BTreeSet<Answer>, String>, OracleError> {
    match solve(analysis, SolveMode::All, limits.guesses) {
        Ok(s) => Ok(Ok(s.answers.into_iter().collect())),
        Err(e) if e.is_ceiling() => Ok(Err(e.to_string())),
        Err(e) => Err(e),
    }
}

/// Compares the oracle's answers with the answer sets of the translation
/// under each option combination. The oracle only runs once some
/// translation has been solved within the ceilings.
pub fn cross_check(analysis: &Analysis, options: &[EmitOptions], limits: &CheckLimits) -> Result<CheckReport, OracleError> {
    let mut oracle = None;
    let mut report = CheckReport::default();
    for opts in options {
        let invalid = |why: String| CombinationResult { options: *opts, verdict: Verdict::Invalid(why), oracle_answers: None, asp_answers: None };
        if !opts.is_valid() {
            report.results.push(invalid("choice rules are not available in the dlv dialect".into()));
            continue;
        }
        let program = match translate(analysis, opts) {
            Ok(p) => p,
            Err(e) => {
                report.results.push(invalid(e.kind.to_string()));
                continue;
            }
        };
        let asp = asp_answers(analysis, &program, limits)?;
        let result = match &asp {
            Err(why) => CombinationResult { options: *opts, verdict: Verdict::Inconclusive(why.clone()), oracle_answers: None, asp_answers: None },
            Ok(_) => {
                if oracle.is_none() {
                    oracle = Some(oracle_answers(analysis, limits)?);
                }
                verdict(opts, oracle.as_ref().unwrap(), &asp)
            }
        };
        report.results.push(result);
    }
    Ok(report)
}
