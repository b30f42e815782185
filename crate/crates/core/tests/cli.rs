//! Exit-code contract of the `npspec` binary, one fixture per error class.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn npspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_npspec")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn success_is_0() {
    let o = npspec(&["translate", "corpus:queens"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).starts_with("#const n=5."));
}

#[test]
fn syntax_errors_are_1_with_position() {
    let o = npspec(&["translate", &fixture("syntax_error.npspec")]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("5:5"), "{}", stderr(&o));
}

#[test]
fn unreadable_input_is_1() {
    assert_eq!(code(&npspec(&["solve", &fixture("missing.npspec")])), 1);
    assert_eq!(code(&npspec(&["translate", "--dialect", "prolog", "corpus:queens"])), 1);
}

#[test]
fn semantic_errors_are_2() {
    for f in ["undefined_predicate.npspec", "unstratified.npspec"] {
        let o = npspec(&["translate", &fixture(f)]);
        assert_eq!(code(&o), 2, "{f}: {}", stderr(&o));
        assert!(stderr(&o).starts_with("error[E02"), "{f}: {}", stderr(&o));
    }
}

#[test]
fn dlv_guards_are_2_and_gringo_accepts() {
    for (f, code_prefix) in [("negative_integers.npspec", "E0302"), ("abs.npspec", "E0303"), ("power.npspec", "E0303")] {
        let o = npspec(&["translate", "--dialect", "dlv", &fixture(f)]);
        assert_eq!(code(&o), 2, "{f}");
        assert!(stderr(&o).contains(code_prefix), "{f}: {}", stderr(&o));
        assert_eq!(code(&npspec(&["translate", "--dialect", "gringo", &fixture(f)])), 0, "{f}");
    }
}

#[test]
fn ceilings_are_4() {
    let o = npspec(&["solve", "--limit", "100", "corpus:queens"]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("120"), "{}", stderr(&o));
    let o = npspec(&["check", "corpus:hamiltonian"]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("INCONCLUSIVE"));
}

#[test]
fn check_passes_on_hamiltonian_with_raised_atom_ceiling() {
    let o = npspec(&["check", "--atoms-limit", "40", "corpus:hamiltonian"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 6);
}

#[test]
fn adversarial_safety_fixtures_agree_with_the_oracle() {
    for (f, answers) in [("head_only.npspec", "3"), ("negated_only.npspec", "1"), ("builtin_only.npspec", "6")] {
        let o = npspec(&["solve", "--mode", "count", &fixture(f)]);
        assert_eq!(stdout(&o).trim(), answers, "{f}");
        let o = npspec(&["check", &fixture(f)]);
        assert_eq!(code(&o), 0, "{f}:\n{}", stdout(&o));
        let o = npspec(&["translate", "--report", &fixture(f)]);
        assert!(!stderr(&o).contains("safety repairs: 0"), "{f}: {}", stderr(&o));
    }
}

#[test]
fn structured_diagnostics() {
    let o = npspec(&["--diagnostics", "structured", "translate", &fixture("syntax_error.npspec")]);
    let v: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!((v["line"].as_u64(), v["column"].as_u64()), (Some(5), Some(5)));
    assert!(v["code"].as_str().unwrap().starts_with("E01"));
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("npspec-cli-{}.lp", std::process::id()));
    let o = npspec(&["translate", "-o", path.to_str().unwrap(), "corpus:hamiltonian"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(written, stdout(&npspec(&["translate", "corpus:hamiltonian"])));
}

#[test]
fn corpus_listing_and_source() {
    let o = npspec(&["corpus"]);
    assert_eq!(stdout(&o).lines().count(), 24);
    let o = npspec(&["corpus", "schur"]);
    assert!(stdout(&o).contains("n = 10;"));
}
