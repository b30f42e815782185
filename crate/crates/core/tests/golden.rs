//! Translation goldens.
//!
//! `hamiltonian.lp` and `metafacts/` are written by hand from the reference
//! encodings and are never regenerated. `corpus/` pins the output for every
//! bundled instance; set `NPSPEC_BLESS=1` to rewrite those after an
//! intended change.

mod common;

use common::{golden_dir, metafact_cases, reference_names, statements, METAFACT_DB};
use npspec::corpus;
use npspec::translator::{compile, Dialect, EmitOptions, GuessEncoding, PermCheck};

#[test]
fn hamiltonian_matches_the_reference_encoding() {
    let expected = std::fs::read_to_string(golden_dir().join("hamiltonian.lp")).unwrap();
    let src = corpus::find("hamiltonian").unwrap().source;
    let t = std::time::Instant::now();
    let ours = compile(src, &EmitOptions::new(Dialect::Gringo, GuessEncoding::Disjunctive, PermCheck::Constraints)).unwrap();
    assert!(t.elapsed().as_secs_f64() < 1.0);
    let renamed = reference_names(&ours);
    let (a, b) = (statements(&renamed), statements(&expected));
    assert_eq!(a, b, "\n{ours}");
}

#[test]
fn statement_splitting_keeps_ranges() {
    assert_eq!(statements("d(1..n).  p.\nq :- r."), vec!["d(1..n).", "p.", "q:-r."]);
}

#[test]
fn metafact_schemas() {
    for (file, metafact, opts) in metafact_cases() {
        let expected = std::fs::read_to_string(golden_dir().join(format!("metafacts/{file}.lp"))).unwrap();
        let ours = compile(&format!("{METAFACT_DB}{metafact}"), &opts).unwrap();
        assert_eq!(ours, expected, "{file}");
    }
}

#[test]
fn corpus_translations() {
    let bless = std::env::var_os("NPSPEC_BLESS").is_some();
    let dir = golden_dir().join("corpus");
    for e in corpus::entries() {
        for (suffix, opts) in [
            ("gringo", EmitOptions::default()),
            ("dlv", EmitOptions::new(Dialect::Dlv, GuessEncoding::Disjunctive, PermCheck::Constraints)),
        ] {
            let path = dir.join(format!("{}.{suffix}.lp", e.name));
            let ours = match compile(e.source, &opts) {
                Ok(text) => text,
                Err(err) => format!("% {}\n", err.diagnostic()),
            };
            if bless {
                std::fs::create_dir_all(&dir).unwrap();
                std::fs::write(&path, &ours).unwrap();
                continue;
            }
            let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
            assert_eq!(ours, expected, "{}", path.display());
        }
    }
}
