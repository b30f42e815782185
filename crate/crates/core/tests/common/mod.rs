//! Helpers shared by the golden and acceptance targets.

use std::path::{Path, PathBuf};

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Statements of an ASP text with whitespace removed, sorted. A statement
/// ends at a `.` followed by whitespace or the end of the text.
pub fn statements(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let chars: Vec<char> = text.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        if c.is_whitespace() {
            continue;
        }
        cur.push(c);
        if c == '.' && chars.get(i + 1).is_none_or(|n| n.is_whitespace()) && chars.get(i.wrapping_sub(1)) != Some(&'.') {
            out.push(std::mem::take(&mut cur));
        }
    }
    assert!(cur.is_empty(), "trailing text {cur:?}");
    out.sort();
    out
}

/// Our Hamiltonian translation with the names the reference encoding uses:
/// domain `d`, fresh variable `Z`, disjunction `v`.
pub fn reference_names(asp: &str) -> String {
    asp.replace("npspec_dom_1", "d").replace("V1", "Z").replace(" | ", " v ")
}

pub const METAFACT_DB: &str = "DATABASE d = {(a,1),(b,2),(c,3)}; SPECIFICATION ";

/// Golden file stem, metafact, and option triple.
pub fn metafact_cases() -> Vec<(&'static str, &'static str, npspec::translator::EmitOptions)> {
    use npspec::translator::{Dialect::*, EmitOptions, GuessEncoding::*, PermCheck::*};
    vec![
        ("subset_disjunctive_dlv", "Subset(d, p).", EmitOptions::new(Dlv, Disjunctive, Constraints)),
        ("subset_choice_gringo", "Subset(d, p).", EmitOptions::new(Gringo, Choice, Constraints)),
        ("permutation_disjunctive_constraints_dlv", "Permutation(d, p).", EmitOptions::new(Dlv, Disjunctive, Constraints)),
        ("permutation_disjunctive_aggregate_dlv", "Permutation(d, p).", EmitOptions::new(Dlv, Disjunctive, Aggregate)),
        ("permutation_choice_constraints_gringo", "Permutation(d, p).", EmitOptions::new(Gringo, Choice, Constraints)),
        ("permutation_choice_aggregate_gringo", "Permutation(d, p).", EmitOptions::new(Gringo, Choice, Aggregate)),
        ("partition_disjunctive_dlv", "Partition(d, p, 3).", EmitOptions::new(Dlv, Disjunctive, Constraints)),
        ("partition_choice_gringo", "Partition(d, p, 3).", EmitOptions::new(Gringo, Choice, Constraints)),
        ("intfunc_disjunctive_dlv", "IntFunc(d, p, 2..4).", EmitOptions::new(Dlv, Disjunctive, Constraints)),
        ("intfunc_choice_gringo", "IntFunc(d, p, 2..4).", EmitOptions::new(Gringo, Choice, Constraints)),
    ]
}
