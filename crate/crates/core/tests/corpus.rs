//! Whole-corpus checks: every instance parses, analyzes, pretty-prints to a
//! fixpoint and translates deterministically. Small instances are counted
//! against brute-force searches written directly in Rust.

use npspec::corpus::{self, Tag};
use npspec::frontend::{parse, pretty_print};
use npspec::oracle::{solve, SolveMode, DEFAULT_GUESS_LIMIT};
use npspec::translator::{compile, EmitOptions};

fn count(name: &str) -> u64 {
    let a = corpus::find(name).unwrap().analysis().unwrap();
    solve(&a, SolveMode::Count, DEFAULT_GUESS_LIMIT).unwrap().count
}

#[test]
fn every_entry_round_trips() {
    for e in corpus::entries() {
        let printed = pretty_print(&parse(e.source).unwrap());
        let reparsed = parse(&printed).unwrap_or_else(|err| panic!("{}: {err}\n{printed}", e.name));
        assert_eq!(pretty_print(&reparsed), printed, "{}", e.name);
        e.analysis().unwrap_or_else(|err| panic!("{}: {err}", e.name));
    }
}

#[test]
fn translation_is_deterministic_for_every_combination() {
    for e in corpus::entries() {
        for opts in EmitOptions::combinations() {
            let a = compile(e.source, &opts).map_err(|err| err.to_string());
            let b = compile(e.source, &opts).map_err(|err| err.to_string());
            assert_eq!(a, b, "{} {opts}", e.name);
        }
    }
}

#[test]
fn manifest_sizes() {
    let rows = corpus::corpus_manifest().unwrap();
    assert_eq!(rows.len(), 24);
    let row = |n: &str| rows.iter().find(|r| r.name == n).unwrap().clone();
    // factor pairs over 2..5000 squared
    assert_eq!(row("factoring").guesses, (4999u64 * 4999).to_string());
    assert_eq!(row("factoring").tag, Tag::TranslateOnly);
    assert_eq!(row("schur").guesses, 3u64.pow(10).to_string());
    assert_eq!(row("queens").guesses, "120");
    assert_eq!(row("allInterval").guesses, (1..=20u64).product::<u64>().to_string());
    let cross: Vec<_> = rows.iter().filter(|r| r.tag == Tag::CrossCheckable).map(|r| r.name).collect();
    assert_eq!(cross, ["3sat", "coloring", "queens", "subsetSum", "bacp", "ramsey", "roundRobin", "schur"]);
}

#[test]
fn queens_matches_brute_force() {
    let n = 5i64;
    let mut expected = 0;
    let mut perm: Vec<i64> = (1..=n).collect();
    permutations(&mut perm, 0, &mut |p| {
        let ok = (0..p.len()).all(|i| (i + 1..p.len()).all(|j| (j - i) as i64 != (p[j] - p[i]).abs()));
        expected += ok as u64;
    });
    assert_eq!(count("queens"), expected);
}

fn permutations(p: &mut Vec<i64>, k: usize, f: &mut impl FnMut(&[i64])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

#[test]
fn schur_matches_brute_force() {
    let n = 10usize;
    let expected = (0..3u32.pow(n as u32))
        .filter(|&code| {
            let boxes: Vec<u32> = (0..n).map(|i| code / 3u32.pow(i as u32) % 3).collect();
            !(1..=n).any(|x| (x..=n).any(|y| x + y <= n && boxes[x - 1] == boxes[y - 1] && boxes[x - 1] == boxes[x + y - 1]))
        })
        .count() as u64;
    assert_eq!(count("schur"), expected);
}

#[test]
fn ramsey_matches_brute_force() {
    let edges: Vec<(usize, usize)> = (1..=5).flat_map(|a| (a + 1..=5).map(move |b| (a, b))).collect();
    let expected = (0..3u32.pow(10))
        .filter(|&code| {
            let col = |a: usize, b: usize| {
                let i = edges.iter().position(|&e| e == (a, b)).unwrap();
                code / 3u32.pow(i as u32) % 3
            };
            !(1..=5).any(|a| {
                (a + 1..=5).any(|b| (b + 1..=5).any(|c| col(a, b) == col(b, c) && col(a, b) == col(a, c)))
            })
        })
        .count() as u64;
    assert_eq!(count("ramsey"), expected);
}

#[test]
fn subset_sum_answers() {
    let a = corpus::find("subsetSum").unwrap().analysis().unwrap();
    let s = solve(&a, SolveMode::All, DEFAULT_GUESS_LIMIT).unwrap();
    let text: Vec<String> = s.answers.iter().map(|a| a.to_string()).collect();
    // {3,7} and {4,6} are the only subsets of {3,5,4,7,6} with sum 10
    assert_eq!(text.len(), 2);
    assert!(text.contains(&"chosen(a1,3).\nchosen(a4,7).\n".to_string()));
    assert!(text.contains(&"chosen(a3,4).\nchosen(a5,6).\n".to_string()));
}

#[test]
fn round_robin_of_four_is_unsatisfiable() {
    assert_eq!(count("roundRobin"), 0);
}
