//! Exhaustive enumeration of metafact extensions.

use num_bigint::BigUint;
use num_traits::One;

use crate::analyzer::{Analysis, Relation};
use crate::frontend::MetafactKind;
use crate::value::{Tuple, Value};

use super::OracleError;

pub const DEFAULT_GUESS_LIMIT: u64 = 10_000_000;

/// Search space of one metafact.
#[derive(Clone, Debug, PartialEq)]
pub struct GuessSlot {
    pub pred: String,
    pub kind: MetafactKind,
    /// Arity of the guessed predicate.
    pub arity: usize,
    /// Domain tuples in canonical (source) order.
    pub domain: Vec<Tuple>,
    /// Values of the extra argument; empty for Subset.
    pub values: Vec<i64>,
}

impl GuessSlot {
    pub fn count(&self) -> BigUint {
        let n = self.domain.len();
        match self.kind {
            MetafactKind::Subset => BigUint::one() << n,
            MetafactKind::Permutation => (1..=n as u64).fold(BigUint::one(), |acc, i| acc * i),
            MetafactKind::Partition | MetafactKind::IntFunc => BigUint::from(self.values.len()).pow(n as u32),
        }
    }
}

/// The product of all metafact search spaces, in metafact order.
#[derive(Clone, Debug, PartialEq)]
pub struct GuessSpace {
    pub slots: Vec<GuessSlot>,
}

impl GuessSpace {
    pub fn new(analysis: &Analysis) -> Self {
        let slots = analysis
            .guessed_in_order()
            .map(|g| GuessSlot {
                pred: g.name.clone(),
                kind: g.kind,
                arity: g.arity,
                domain: g.domain.iter().cloned().collect(),
                values: g.values.clone(),
            })
            .collect();
        GuessSpace { slots }
    }

    /// Exact number of candidate guesses.
    pub fn count(&self) -> BigUint {
        self.slots.iter().fold(BigUint::one(), |acc, s| acc * s.count())
    }
}

/// One candidate: an extension for every guessed predicate.
#[derive(Clone, Debug, PartialEq)]
pub struct Guess {
    pub relations: Vec<Relation>,
}

#[derive(Clone, Debug)]
enum State {
    Subset(Vec<bool>),
    /// `perm[i]` is the 0-based position given to domain tuple `i`.
    Permutation(Vec<usize>),
    /// `digits[i]` indexes the value given to domain tuple `i`.
    Function(Vec<usize>),
}

impl State {
    fn initial(slot: &GuessSlot) -> Self {
        let n = slot.domain.len();
        match slot.kind {
            MetafactKind::Subset => State::Subset(vec![false; n]),
            MetafactKind::Permutation => State::Permutation((0..n).collect()),
            MetafactKind::Partition | MetafactKind::IntFunc => State::Function(vec![0; n]),
        }
    }

    /// Moves to the lexicographic successor. Returns false, after resetting
    /// to the initial state, when the state wraps around.
    fn advance(&mut self, radix: usize) -> bool {
        match self {
            State::Subset(bits) => {
                for b in bits.iter_mut().rev() {
                    *b = !*b;
                    if *b {
                        return true;
                    }
                }
                false
            }
            State::Function(digits) => {
                for d in digits.iter_mut().rev() {
                    *d += 1;
                    if *d < radix {
                        return true;
                    }
                    *d = 0;
                }
                false
            }
            State::Permutation(p) => {
                let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
                    p.sort_unstable();
                    return false;
                };
                let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
                p.swap(i - 1, j);
                p[i..].reverse();
                true
            }
        }
    }

    fn relation(&self, slot: &GuessSlot) -> Relation {
        let extend = |t: &Tuple, v: i64| {
            let mut t = t.clone();
            t.push(Value::Int(v));
            t
        };
        let tuples: Vec<Tuple> = match self {
            State::Subset(bits) => {
                slot.domain.iter().zip(bits).filter(|(_, &b)| b).map(|(t, _)| t.clone()).collect()
            }
            State::Permutation(p) => slot.domain.iter().zip(p).map(|(t, &i)| extend(t, i as i64 + 1)).collect(),
            State::Function(d) => slot.domain.iter().zip(d).map(|(t, &i)| extend(t, slot.values[i])).collect(),
        };
        Relation::from_tuples(slot.pred.clone(), slot.arity, tuples)
    }
}

/// Iterator over all guesses; the first metafact varies slowest.
#[derive(Debug)]
pub struct Guesses<'a> {
    space: &'a GuessSpace,
    states: Vec<State>,
    done: bool,
}

impl Iterator for Guesses<'_> {
    type Item = Guess;

    fn next(&mut self) -> Option<Guess> {
        if self.done {
            return None;
        }
        let guess = Guess {
            relations: self.states.iter().zip(&self.space.slots).map(|(s, slot)| s.relation(slot)).collect(),
        };
        self.done = true;
        for (state, slot) in self.states.iter_mut().zip(&self.space.slots).rev() {
            if state.advance(slot.values.len()) {
                self.done = false;
                break;
            }
        }
        Some(guess)
    }
}

/// Enumerates every guess, or refuses when the space exceeds `limit`.
pub fn enumerate_guesses(space: &GuessSpace, limit: u64) -> Result<Guesses<'_>, OracleError> {
    let count = space.count();
    if count > BigUint::from(limit) {
        return Err(OracleError::GuessLimit { count, limit });
    }
    Ok(Guesses { space, states: space.slots.iter().map(State::initial).collect(), done: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyzer::analyze;
    use crate::frontend::parse;

    const EDGES: &str = "edge = {(1,2),(3,1),(2,3),(6,2),(5,6),(4,5),(3,5),(1,4),(4,1)};";

    fn space(src: &str) -> GuessSpace {
        GuessSpace::new(&analyze(&parse(src).unwrap()).unwrap())
    }

    fn factorial(n: u64) -> u64 {
        (1..=n).product()
    }

    #[test]
    fn subset_of_three() {
        let s = space("DATABASE d = {1..3}; SPECIFICATION Subset(d, p).");
        assert_eq!(s.count(), BigUint::from(8u32));
        let all: Vec<_> = enumerate_guesses(&s, 100).unwrap().collect();
        assert_eq!(all.len(), 8);
        assert!(all[0].relations[0].is_empty());
        assert_eq!(all[1].relations[0].iter().collect::<Vec<_>>(), [&vec![Value::Int(3)]]);
    }

    #[test]
    fn permutation_count_and_example_extension() {
        let s = space(&format!("DATABASE {EDGES} SPECIFICATION Permutation(edge, edgeorder)."));
        assert_eq!(s.count(), BigUint::from(factorial(9)));
        let mut all = enumerate_guesses(&s, DEFAULT_GUESS_LIMIT).unwrap();
        let first = all.next().unwrap();
        let pos: Vec<i64> = first.relations[0].iter().map(|t| t[2].as_int().unwrap()).collect();
        assert_eq!(pos, (1..=9).collect::<Vec<_>>());
        assert_eq!(all.count() as u64 + 1, factorial(9));
    }

    #[test]
    fn permutations_are_bijections() {
        let s = space("DATABASE d = {a, b, c, e}; SPECIFICATION Permutation(d, p).");
        let mut seen = std::collections::BTreeSet::new();
        for g in enumerate_guesses(&s, 100).unwrap() {
            let mut vals: Vec<i64> = g.relations[0].iter().map(|t| t[1].as_int().unwrap()).collect();
            seen.insert(vals.clone());
            vals.sort_unstable();
            assert_eq!(vals, [1, 2, 3, 4]);
        }
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn partition_of_example_edges() {
        let s = space(&format!("DATABASE {EDGES} SPECIFICATION Partition(edge, partition, 2)."));
        assert_eq!(s.count(), BigUint::from(512u32));
        let target: Vec<i64> = vec![0, 0, 0, 0, 1, 1, 1, 1, 1];
        let found = enumerate_guesses(&s, 1000)
            .unwrap()
            .filter(|g| g.relations[0].iter().map(|t| t[2].as_int().unwrap()).collect::<Vec<_>>() == target)
            .count();
        assert_eq!(found, 1);
    }

    #[test]
    fn refusal_names_the_exact_count() {
        let s = space(&format!("DATABASE {EDGES} SPECIFICATION Permutation(edge, edgeorder)."));
        let err = enumerate_guesses(&s, 1000).unwrap_err();
        assert_eq!(err, OracleError::GuessLimit { count: BigUint::from(362_880u32), limit: 1000 });
        assert!(err.to_string().contains("362880"));
    }

    #[test]
    fn product_of_slots_varies_last_fastest() {
        let s = space("DATABASE d = {1..2}; SPECIFICATION Subset(d, p). IntFunc(d, f, 0..2).");
        assert_eq!(s.count(), BigUint::from(36u32));
        let gs: Vec<_> = enumerate_guesses(&s, 100).unwrap().collect();
        assert_eq!(gs.len(), 36);
        assert!(gs[..9].iter().all(|g| g.relations[0].is_empty()));
    }

    #[test]
    fn empty_domain_has_one_candidate() {
        let s = space("DATABASE d = {1..3}; e = {1..2}; SPECIFICATION Permutation(e - d, p).");
        assert_eq!(s.count(), BigUint::one());
        assert_eq!(enumerate_guesses(&s, 1).unwrap().count(), 1);
    }
}
