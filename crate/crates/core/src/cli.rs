//! Command-line front end. Argument parsing lives here so the binary is a
//! thin wrapper and tests can drive [`run`] directly.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analyzer::{analyze, Analysis};
use crate::corpus;
use crate::diagnostics::{Diagnostic, Error, ExitCode};
use crate::frontend::{parse, pretty_print, Spec};
use crate::oracle::{
    cross_check, solve, CheckLimits, GuessSpace, SolveMode, DEFAULT_ATOM_LIMIT, DEFAULT_GROUND_LIMIT, DEFAULT_GUESS_LIMIT,
};
use crate::translator::{emit_dialect, translate, Dialect, EmitOptions, GuessEncoding, PermCheck, TranslationReport};

#[derive(Debug, Parser)]
#[command(name = "npspec", version, about = "Translate NP-SPEC to ASP and check the translation against a reference solver")]
pub struct Cli {
    /// Diagnostic output format on standard error.
    #[arg(long, value_enum, global = true, default_value_t = DiagnosticsFormat::Human)]
    pub diagnostics: DiagnosticsFormat,
    /// Write the main output to PATH instead of standard output.
    #[arg(short = 'o', long = "output", global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Translate a spec into ASP.
    Translate {
        /// Input file, or `corpus:NAME` for a bundled instance.
        input: String,
        #[command(flatten)]
        emit: EmitArgs,
        /// Print a translation summary on standard error.
        #[arg(long)]
        report: bool,
    },
    /// Solve a spec with the reference semantics.
    Solve {
        input: String,
        #[arg(long, value_enum, default_value_t = ModeArg::First)]
        mode: ModeArg,
        /// Maximum number of candidate guesses.
        #[arg(long, default_value_t = DEFAULT_GUESS_LIMIT, value_parser = clap::value_parser!(u64).range(1..))]
        limit: u64,
    },
    /// Compare reference answers with answer sets of the translation.
    Check {
        input: String,
        /// Restrict to one dialect; all when omitted.
        #[arg(long, value_enum)]
        dialect: Option<DialectArg>,
        #[arg(long, value_enum)]
        guess: Option<GuessArg>,
        #[arg(long = "perm-check", value_enum)]
        perm_check: Option<PermCheckArg>,
        #[arg(long, default_value_t = DEFAULT_GUESS_LIMIT, value_parser = clap::value_parser!(u64).range(1..))]
        limit: u64,
        /// Maximum number of undecided ground atoms for answer-set enumeration.
        #[arg(long = "atoms-limit", default_value_t = DEFAULT_ATOM_LIMIT, value_parser = positive_usize)]
        atoms_limit: usize,
    },
    /// Show the parsed spec, strata, guess space and safety obligations.
    Inspect { input: String },
    /// List the bundled instances, or print one.
    Corpus { name: Option<String> },
}

#[derive(Debug, Args, Clone, Copy)]
pub struct EmitArgs {
    #[arg(long, value_enum, default_value_t = DialectArg::Gringo)]
    pub dialect: DialectArg,
    #[arg(long, value_enum, default_value_t = GuessArg::Disjunctive)]
    pub guess: GuessArg,
    #[arg(long = "perm-check", value_enum, default_value_t = PermCheckArg::Constraints)]
    pub perm_check: PermCheckArg,
    /// Factor applied to the largest integer for the dlv `#maxint` directive.
    #[arg(long = "maxint-multiplier", default_value_t = 1, value_parser = clap::value_parser!(i64).range(1..))]
    pub maxint_multiplier: i64,
}

impl EmitArgs {
    pub fn options(&self) -> EmitOptions {
        EmitOptions { maxint_multiplier: self.maxint_multiplier, ..EmitOptions::new(self.dialect.into(), self.guess.into(), self.perm_check.into()) }
    }
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DiagnosticsFormat {
    Human,
    /// One JSON object per line.
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DialectArg {
    Dlv,
    Gringo,
}

impl From<DialectArg> for Dialect {
    fn from(d: DialectArg) -> Self {
        match d {
            DialectArg::Dlv => Dialect::Dlv,
            DialectArg::Gringo => Dialect::Gringo,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GuessArg {
    Disjunctive,
    Choice,
}

impl From<GuessArg> for GuessEncoding {
    fn from(g: GuessArg) -> Self {
        match g {
            GuessArg::Disjunctive => GuessEncoding::Disjunctive,
            GuessArg::Choice => GuessEncoding::Choice,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PermCheckArg {
    Constraints,
    Aggregate,
}

impl From<PermCheckArg> for PermCheck {
    fn from(p: PermCheckArg) -> Self {
        match p {
            PermCheckArg::Constraints => PermCheck::Constraints,
            PermCheckArg::Aggregate => PermCheck::Aggregate,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    First,
    All,
    Count,
}

impl From<ModeArg> for SolveMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::First => SolveMode::First,
            ModeArg::All => SolveMode::All,
            ModeArg::Count => SolveMode::Count,
        }
    }
}

/// Everything a run produced. The binary copies `stdout` and `stderr` to
/// the process streams and exits with `exit`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub exit: ExitCode,
    pub stdout: String,
    pub stderr: String,
}

struct Session {
    format: DiagnosticsFormat,
    stderr: String,
}

impl Session {
    fn diagnostic(&mut self, d: &Diagnostic) {
        match self.format {
            DiagnosticsFormat::Human => writeln!(self.stderr, "{d}"),
            DiagnosticsFormat::Structured => writeln!(self.stderr, "{}", d.to_json()),
        }
        .unwrap();
    }
}

/// Reads a path, or a bundled instance written `corpus:NAME`.
pub fn read_input(input: &str) -> Result<String, Error> {
    if let Some(name) = input.strip_prefix("corpus:") {
        return corpus::find(name).map(|e| e.source.to_string()).ok_or_else(|| {
            Error::Io(std::io::Error::new(std::io::ErrorKind::NotFound, format!("no bundled instance named `{name}`")))
        });
    }
    std::fs::read_to_string(input).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{input}: {e}"))))
}

fn load(input: &str) -> Result<(Spec, Analysis), Error> {
    let spec = parse(&read_input(input)?)?;
    let analysis = analyze(&spec)?;
    Ok((spec, analysis))
}

fn do_translate(s: &mut Session, input: &str, emit: &EmitArgs, report: bool) -> Result<(String, ExitCode), Error> {
    let (_, analysis) = load(input)?;
    let opts = emit.options();
    let program = translate(&analysis, &opts)?;
    let text = emit_dialect(&program, &opts)?;
    for w in &program.warnings {
        s.diagnostic(w);
    }
    if report {
        writeln!(s.stderr, "{}", TranslationReport::new(&program, &opts)).unwrap();
    }
    Ok((text, ExitCode::Success))
}

fn do_solve(input: &str, mode: SolveMode, limit: u64) -> Result<(String, ExitCode), Error> {
    let (_, analysis) = load(input)?;
    let solutions = solve(&analysis, mode, limit)?;
    let mut out = String::new();
    if mode == SolveMode::Count {
        writeln!(out, "{}", solutions.count).unwrap();
    } else {
        for (i, a) in solutions.answers.iter().enumerate() {
            writeln!(out, "% answer {}", i + 1).unwrap();
            out.push_str(&a.to_string());
        }
        if solutions.answers.is_empty() {
            out.push_str("% no answers\n");
        }
    }
    Ok((out, ExitCode::Success))
}

fn do_check(input: &str, options: Vec<EmitOptions>, limits: CheckLimits) -> Result<(String, ExitCode), Error> {
    let (_, analysis) = load(input)?;
    let report = cross_check(&analysis, &options, &limits)?;
    Ok((report.to_string(), report.exit_code()))
}

fn do_inspect(input: &str) -> Result<(String, ExitCode), Error> {
    let (spec, analysis) = load(input)?;
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "== spec").unwrap();
    w.push_str(&pretty_print(&spec));
    writeln!(w, "== strata").unwrap();
    for (i, s) in analysis.strata.strata.iter().enumerate() {
        writeln!(w, "{i}: {}", s.join(" ")).unwrap();
    }
    writeln!(w, "== guess space").unwrap();
    let space = GuessSpace::new(&analysis);
    for slot in &space.slots {
        writeln!(w, "{} {:?}/{}: {}", slot.pred, slot.kind, slot.arity, slot.count()).unwrap();
    }
    writeln!(w, "total: {}", space.count()).unwrap();
    writeln!(w, "== safety obligations").unwrap();
    for o in &analysis.obligations {
        writeln!(w, "rule {}: {} ({})", o.rule + 1, o.variable, o.reason).unwrap();
    }
    writeln!(w, "== active domain").unwrap();
    writeln!(w, "{} values", analysis.universe.len()).unwrap();
    Ok((out, ExitCode::Success))
}

fn do_corpus(name: Option<&str>) -> Result<(String, ExitCode), Error> {
    if let Some(name) = name {
        return Ok((read_input(&format!("corpus:{name}"))?, ExitCode::Success));
    }
    let mut out = String::new();
    for row in corpus::corpus_manifest()? {
        let atoms = row.undecided_atoms.map_or("-".to_string(), |a| a.to_string());
        writeln!(out, "{:<22} {:<11} {:<16} {:>28} {:>5}  {}", row.name, format!("{:?}", row.category).to_lowercase(), row.tag, row.guesses, atoms, row.description)
            .unwrap();
    }
    Ok((out, ExitCode::Success))
}

fn check_options(dialect: Option<DialectArg>, guess: Option<GuessArg>, perm: Option<PermCheckArg>) -> Vec<EmitOptions> {
    EmitOptions::combinations()
        .into_iter()
        .filter(|o| dialect.is_none_or(|d| o.dialect == d.into()))
        .filter(|o| guess.is_none_or(|g| o.guess == g.into()))
        .filter(|o| perm.is_none_or(|p| o.perm_check == p.into()))
        .collect()
}

pub fn run(cli: &Cli) -> RunOutput {
    let mut s = Session { format: cli.diagnostics, stderr: String::new() };
    let result = match &cli.command {
        Command::Translate { input, emit, report } => do_translate(&mut s, input, emit, *report),
        Command::Solve { input, mode, limit } => do_solve(input, (*mode).into(), *limit),
        Command::Check { input, dialect, guess, perm_check, limit, atoms_limit } => do_check(
            input,
            check_options(*dialect, *guess, *perm_check),
            CheckLimits { guesses: *limit, atoms: *atoms_limit, ground: DEFAULT_GROUND_LIMIT },
        ),
        Command::Inspect { input } => do_inspect(input),
        Command::Corpus { name } => do_corpus(name.as_deref()),
    };
    let (text, exit) = match result {
        Ok(r) => r,
        Err(e) => {
            s.diagnostic(&e.diagnostic());
            return RunOutput { exit: e.exit_code(), stdout: String::new(), stderr: s.stderr };
        }
    };
    if let Some(path) = &cli.output {
        if let Err(e) = std::fs::write(path, &text) {
            let e = Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())));
            s.diagnostic(&e.diagnostic());
            return RunOutput { exit: e.exit_code(), stdout: String::new(), stderr: s.stderr };
        }
        return RunOutput { exit, stdout: String::new(), stderr: s.stderr };
    }
    RunOutput { exit, stdout: text, stderr: s.stderr }
}

/// Parses `args` (including the program name) and runs. Usage errors exit
/// with the input error code.
pub fn run_args<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let exit = if e.use_stderr() { ExitCode::Input } else { ExitCode::Success };
            let text = e.render().to_string();
            if e.use_stderr() {
                RunOutput { exit, stdout: String::new(), stderr: text }
            } else {
                RunOutput { exit, stdout: text, stderr: String::new() }
            }
        }
    }
}
