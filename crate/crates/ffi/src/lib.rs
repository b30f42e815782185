//! C ABI over the npspec compiler.
//!
//! A spec is parsed and analyzed once into an opaque `NpspecProgram`, then
//! translated, solved or cross-checked any number of times. Every call
//! returns an `NpspecStatus`; on failure the diagnostic text is available
//! from `npspec_last_error_message` on the same thread. Strings handed out
//! by the library must be released with `npspec_string_free`.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use npspec::analyzer::{analyze, Analysis};
use npspec::diagnostics::{Error, ExitCode};
use npspec::frontend::parse;
use npspec::oracle::{cross_check, solve, CheckLimits, SolveMode};
use npspec::translator::{emit_dialect, translate, Dialect, EmitOptions, GuessEncoding, PermCheck};

pub const NPSPEC_DIALECT_DLV: u32 = 0;
pub const NPSPEC_DIALECT_GRINGO: u32 = 1;

pub const NPSPEC_GUESS_DISJUNCTIVE: u32 = 0;
pub const NPSPEC_GUESS_CHOICE: u32 = 1;

pub const NPSPEC_PERM_CHECK_CONSTRAINTS: u32 = 0;
pub const NPSPEC_PERM_CHECK_AGGREGATE: u32 = 1;

pub const NPSPEC_MODE_FIRST: u32 = 0;
pub const NPSPEC_MODE_ALL: u32 = 1;
pub const NPSPEC_MODE_COUNT: u32 = 2;

/// Result of every fallible call. Values 0 to 4 match the command-line
/// exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NpspecStatus {
    Ok = 0,
    /// Syntax error or unreadable input.
    InputError = 1,
    /// Analysis or translation error.
    SemanticError = 2,
    /// A cross-check found a disagreement.
    CheckFailed = 3,
    /// An enumeration ceiling was hit.
    Ceiling = 4,
    NullArgument = 5,
    InvalidArgument = 6,
    Panic = 7,
}

impl From<ExitCode> for NpspecStatus {
    fn from(c: ExitCode) -> Self {
        match c {
            ExitCode::Success => NpspecStatus::Ok,
            ExitCode::Input => NpspecStatus::InputError,
            ExitCode::Semantic => NpspecStatus::SemanticError,
            ExitCode::CheckFailed => NpspecStatus::CheckFailed,
            ExitCode::Ceiling => NpspecStatus::Ceiling,
        }
    }
}

/// An analyzed spec.
pub struct NpspecProgram {
    analysis: Analysis,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).unwrap()));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: NpspecStatus, msg: impl Into<String>) -> NpspecStatus {
    set_error(msg);
    status
}

fn fail_with(e: Error) -> NpspecStatus {
    fail(e.exit_code().into(), e.diagnostic().to_string())
}

fn guarded(f: impl FnOnce() -> NpspecStatus) -> NpspecStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(NpspecStatus::Panic, format!("internal error: {msg}"))
        }
    }
}

unsafe fn write_string(out: *mut *mut c_char, s: String) {
    *out = CString::new(s.replace('\0', " ")).unwrap().into_raw();
}

fn emit_options(dialect: u32, guess: u32, perm_check: u32) -> Result<EmitOptions, NpspecStatus> {
    let dialect = match dialect {
        NPSPEC_DIALECT_DLV => Dialect::Dlv,
        NPSPEC_DIALECT_GRINGO => Dialect::Gringo,
        d => return Err(fail(NpspecStatus::InvalidArgument, format!("unknown dialect {d}"))),
    };
    let guess = match guess {
        NPSPEC_GUESS_DISJUNCTIVE => GuessEncoding::Disjunctive,
        NPSPEC_GUESS_CHOICE => GuessEncoding::Choice,
        g => return Err(fail(NpspecStatus::InvalidArgument, format!("unknown guess encoding {g}"))),
    };
    let perm_check = match perm_check {
        NPSPEC_PERM_CHECK_CONSTRAINTS => PermCheck::Constraints,
        NPSPEC_PERM_CHECK_AGGREGATE => PermCheck::Aggregate,
        p => return Err(fail(NpspecStatus::InvalidArgument, format!("unknown permutation check {p}"))),
    };
    Ok(EmitOptions::new(dialect, guess, perm_check))
}

/// Parses and analyzes a NUL-terminated UTF-8 spec. On success `*out`
/// receives a handle to release with `npspec_program_free`.
#[no_mangle]
pub unsafe extern "C" fn npspec_program_parse(source: *const c_char, out: *mut *mut NpspecProgram) -> NpspecStatus {
    guarded(|| {
        if source.is_null() || out.is_null() {
            return fail(NpspecStatus::NullArgument, "null argument");
        }
        *out = ptr::null_mut();
        let Ok(text) = CStr::from_ptr(source).to_str() else {
            return fail(NpspecStatus::InputError, "source is not valid UTF-8");
        };
        let spec = match parse(text) {
            Ok(s) => s,
            Err(e) => return fail_with(e.into()),
        };
        match analyze(&spec) {
            Ok(analysis) => {
                *out = Box::into_raw(Box::new(NpspecProgram { analysis }));
                NpspecStatus::Ok
            }
            Err(e) => fail_with(e.into()),
        }
    })
}

/// Releases a handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn npspec_program_free(program: *mut NpspecProgram) {
    if !program.is_null() {
        drop(Box::from_raw(program));
    }
}

/// Translates to ASP text in the given dialect.
#[no_mangle]
pub unsafe extern "C" fn npspec_program_translate(
    program: *const NpspecProgram,
    dialect: u32,
    guess: u32,
    perm_check: u32,
    out: *mut *mut c_char,
) -> NpspecStatus {
    guarded(|| {
        if program.is_null() || out.is_null() {
            return fail(NpspecStatus::NullArgument, "null argument");
        }
        *out = ptr::null_mut();
        let opts = match emit_options(dialect, guess, perm_check) {
            Ok(o) => o,
            Err(s) => return s,
        };
        let analysis = &(*program).analysis;
        match translate(analysis, &opts).and_then(|p| emit_dialect(&p, &opts)) {
            Ok(text) => {
                write_string(out, text);
                NpspecStatus::Ok
            }
            Err(e) => fail_with(e.into()),
        }
    })
}

/// Solves with the reference semantics. `*count` receives the number of
/// answers found. When `answers` is not null it receives the answers as
/// sorted fact lines, each answer preceded by a `% answer N` line.
#[no_mangle]
pub unsafe extern "C" fn npspec_program_solve(
    program: *const NpspecProgram,
    mode: u32,
    guess_limit: u64,
    count: *mut u64,
    answers: *mut *mut c_char,
) -> NpspecStatus {
    guarded(|| {
        if program.is_null() || count.is_null() {
            return fail(NpspecStatus::NullArgument, "null argument");
        }
        if !answers.is_null() {
            *answers = ptr::null_mut();
        }
        let mode = match mode {
            NPSPEC_MODE_FIRST => SolveMode::First,
            NPSPEC_MODE_ALL => SolveMode::All,
            NPSPEC_MODE_COUNT => SolveMode::Count,
            m => return fail(NpspecStatus::InvalidArgument, format!("unknown mode {m}")),
        };
        match solve(&(*program).analysis, mode, guess_limit) {
            Ok(s) => {
                *count = s.count;
                if !answers.is_null() {
                    let mut text = String::new();
                    for (i, a) in s.answers.iter().enumerate() {
                        text.push_str(&format!("% answer {}\n{a}", i + 1));
                    }
                    write_string(answers, text);
                }
                NpspecStatus::Ok
            }
            Err(e) => fail_with(e.into()),
        }
    })
}

/// Cross-checks every valid option combination. Returns `Ok`,
/// `CheckFailed` or `Ceiling`; the per-combination report goes to
/// `*report` when it is not null.
#[no_mangle]
pub unsafe extern "C" fn npspec_program_check(
    program: *const NpspecProgram,
    guess_limit: u64,
    atom_limit: usize,
    report: *mut *mut c_char,
) -> NpspecStatus {
    guarded(|| {
        if program.is_null() {
            return fail(NpspecStatus::NullArgument, "null argument");
        }
        if !report.is_null() {
            *report = ptr::null_mut();
        }
        let limits = CheckLimits { guesses: guess_limit, atoms: atom_limit, ..CheckLimits::default() };
        match cross_check(&(*program).analysis, &EmitOptions::combinations(), &limits) {
            Ok(r) => {
                if !report.is_null() {
                    write_string(report, r.to_string());
                }
                let status: NpspecStatus = r.exit_code().into();
                if status != NpspecStatus::Ok {
                    set_error(r.to_string());
                }
                status
            }
            Err(e) => fail_with(e.into()),
        }
    })
}

/// Releases a string returned by this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn npspec_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn npspec_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn npspec_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
