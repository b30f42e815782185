//! Benchmark instances shipped with the crate.
//!
//! Each entry is tagged by what the reference semantics can do with it:
//! solve it by exhaustive guessing, and additionally cross-check it against
//! the translation, or only translate it.

use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::analyzer::{analyze, Analysis};
use crate::frontend::parse;
use crate::oracle::{naive_ground, GuessSpace, DEFAULT_ATOM_LIMIT, DEFAULT_GROUND_LIMIT, DEFAULT_GUESS_LIMIT};
use crate::translator::{translate, EmitOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Miscellanea,
    Csplib,
}

#[derive(Clone, Copy, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub category: Category,
    pub description: &'static str,
    pub source: &'static str,
}

macro_rules! entry {
    ($name:literal, $cat:ident, $desc:literal) => {
        CorpusEntry {
            name: $name,
            category: Category::$cat,
            description: $desc,
            source: include_str!(concat!("../corpus/", $name, ".npspec")),
        }
    };
}

static CORPUS: &[CorpusEntry] = &[
    entry!("3sat", Miscellanea, "satisfiability of 3 clauses over 4 variables"),
    entry!("coloring", Miscellanea, "3-coloring of a 6-node graph"),
    entry!("diophantine", Miscellanea, "5x^2 + 3y = 710 over the naturals"),
    entry!("factoring", Miscellanea, "nontrivial factors of 10000"),
    entry!("hamiltonian", Miscellanea, "Hamiltonian cycle in a 6-node graph"),
    entry!("jobShopScheduling", Miscellanea, "6 jobs of 6 tasks on 6 machines, deadline 55"),
    entry!("proteinFolding", Miscellanea, "2D HP folding of a 6-residue chain with at least one contact"),
    entry!("queens", Miscellanea, "5 non-attacking queens"),
    entry!("sorting", Miscellanea, "sorting 7 integers by permutation"),
    entry!("subsetSum", Miscellanea, "subset of 5 sizes summing to 10"),
    entry!("sudoku", Miscellanea, "9x9 sudoku with 4 open cells"),
    entry!("tournamentScheduling", Miscellanea, "single round robin of 6 teams with complementary home patterns"),
    entry!("allInterval", Csplib, "all-interval series of length 20"),
    entry!("bacp", Csplib, "balanced academic curriculum, 7 courses in 2 periods"),
    entry!("bibd", Csplib, "(7,7,3,3,1) balanced incomplete block design"),
    entry!("carSequencing", Csplib, "10 cars, 6 classes, 5 options"),
    entry!("golombRuler", Csplib, "8-mark Golomb ruler of length at most 10"),
    entry!("langford", Csplib, "Langford sequence L(3,9)"),
    entry!("lowAutocorrelation", Csplib, "binary sequence of length 5 with energy at most 2"),
    entry!("magicSquare", Csplib, "3x3 magic square"),
    entry!("ramsey", Csplib, "3-coloring of K5 edges without monochromatic triangles"),
    entry!("roundRobin", Csplib, "round robin of 4 teams over 3 weeks and 2 periods"),
    entry!("schur", Csplib, "sum-free partition of 1..10 into 3 boxes"),
    entry!("socialGolfer", Csplib, "8 golfers in groups of 2 for 4 weeks"),
];

pub fn entries() -> &'static [CorpusEntry] {
    CORPUS
}

pub fn find(name: &str) -> Option<&'static CorpusEntry> {
    CORPUS.iter().find(|e| e.name == name)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tag {
    /// Within the guess ceiling and the answer-set atom ceiling.
    CrossCheckable,
    /// Within the guess ceiling only.
    OracleFeasible,
    TranslateOnly,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::CrossCheckable => "cross-checkable",
            Tag::OracleFeasible => "oracle-feasible",
            Tag::TranslateOnly => "translate-only",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ManifestRow {
    pub name: &'static str,
    pub category: Category,
    pub description: &'static str,
    /// Exact size of the guess space, in decimal.
    pub guesses: String,
    /// Undecided ground atoms of the default translation, when grounded.
    pub undecided_atoms: Option<usize>,
    pub tag: Tag,
}

impl CorpusEntry {
    pub fn analysis(&self) -> crate::Result<Analysis> {
        Ok(analyze(&parse(self.source)?)?)
    }

    /// Classifies the entry against the default ceilings. Grounding is only
    /// attempted when the guess space is small enough for the oracle.
    pub fn manifest_row(&self) -> crate::Result<ManifestRow> {
        let analysis = self.analysis()?;
        let guesses = GuessSpace::new(&analysis).count();
        let mut row = ManifestRow {
            name: self.name,
            category: self.category,
            description: self.description,
            guesses: guesses.to_string(),
            undecided_atoms: None,
            tag: Tag::TranslateOnly,
        };
        if guesses > BigUint::from(DEFAULT_GUESS_LIMIT) {
            return Ok(row);
        }
        row.tag = Tag::OracleFeasible;
        let program = translate(&analysis, &EmitOptions::default())?;
        if let Ok(ground) = naive_ground(&program, DEFAULT_GROUND_LIMIT) {
            let undecided = ground.undecided().len();
            row.undecided_atoms = Some(undecided);
            if undecided <= DEFAULT_ATOM_LIMIT {
                row.tag = Tag::CrossCheckable;
            }
        }
        Ok(row)
    }
}

pub fn corpus_manifest() -> crate::Result<Vec<ManifestRow>> {
    CORPUS.iter().map(CorpusEntry::manifest_row).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_and_categories_balanced() {
        let mut names: Vec<_> = CORPUS.iter().map(|e| e.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), 24);
        assert_eq!(CORPUS.iter().filter(|e| e.category == Category::Csplib).count(), 12);
    }

    #[test]
    fn every_entry_analyzes() {
        for e in CORPUS {
            e.analysis().unwrap_or_else(|err| panic!("{}: {}", e.name, err.diagnostic()));
        }
    }

    #[test]
    fn hamiltonian_is_over_the_atom_ceiling() {
        let row = find("hamiltonian").unwrap().manifest_row().unwrap();
        assert_eq!(row.guesses, "720");
        assert_eq!(row.undecided_atoms, Some(36));
        assert_eq!(row.tag, Tag::OracleFeasible);
    }
}
