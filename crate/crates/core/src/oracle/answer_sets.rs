//! Brute-force answer-set enumeration for small ground programs.
//!
//! Undecided atoms are assigned depth-first. A partial assignment is cut as
//! soon as a fully assigned rule is violated, a true atom has lost every
//! possible support, or an atom and its classical complement are both
//! true. Every surviving total assignment is then checked for minimality
//! against its reduct.

use std::collections::{BTreeSet, HashMap};

use crate::frontend::AggFunc;
use crate::value::Value;

use super::ground::{GroundAggregate, GroundHead, GroundProgram, GroundRule};
use super::{GroundAtom, OracleError};

pub const DEFAULT_ATOM_LIMIT: usize = 30;

/// Truth of an atom in a total interpretation given as a lookup.
trait Truth {
    fn holds(&self, atom: usize) -> bool;
}

impl<F: Fn(usize) -> bool> Truth for F {
    fn holds(&self, atom: usize) -> bool {
        self(atom)
    }
}

fn aggregate_holds(g: &GroundAggregate, m: &impl Truth) -> bool {
    let set: BTreeSet<&Vec<Value>> = g.elements.iter().filter(|(_, a)| m.holds(*a)).map(|(t, _)| t).collect();
    let value = match g.func {
        AggFunc::Count => set.len() as i64,
        func => {
            let mut nums = Vec::with_capacity(set.len());
            for t in &set {
                match t.first() {
                    Some(Value::Int(i)) => nums.push(*i),
                    _ => return false,
                }
            }
            let v = match func {
                AggFunc::Sum => nums.iter().try_fold(0i64, |acc, &x| acc.checked_add(x)),
                AggFunc::Min => nums.iter().min().copied(),
                AggFunc::Max => nums.iter().max().copied(),
                AggFunc::Count => unreachable!(),
            };
            match v {
                Some(v) => v,
                None => return false,
            }
        }
    };
    let value = Value::Int(value);
    g.guards.iter().all(|(op, t)| op.holds(&value, t))
}

fn body_holds(r: &GroundRule, m: &impl Truth) -> bool {
    r.pos.iter().all(|&a| m.holds(a))
        && r.neg.iter().all(|&a| !m.holds(a))
        && r.aggregates.iter().all(|g| aggregate_holds(g, m))
}

fn rule_satisfied(r: &GroundRule, m: &impl Truth) -> bool {
    if !body_holds(r, m) {
        return true;
    }
    match &r.head {
        GroundHead::Empty => false,
        GroundHead::Disjunction(h) => h.iter().any(|&a| m.holds(a)),
        GroundHead::Choice { atoms, lower, upper } => {
            let n = atoms.iter().filter(|&&a| m.holds(a)).count() as i64;
            lower.is_none_or(|l| n >= l) && upper.is_none_or(|u| n <= u)
        }
    }
}

fn supports(r: &GroundRule, atom: usize, m: &impl Truth) -> bool {
    let in_head = match &r.head {
        GroundHead::Disjunction(h) => h.contains(&atom) && h.iter().all(|&b| b == atom || !m.holds(b)),
        GroundHead::Choice { atoms, .. } => atoms.contains(&atom),
        GroundHead::Empty => false,
    };
    in_head && body_holds(r, m)
}

fn rule_atoms(r: &GroundRule) -> impl Iterator<Item = usize> + '_ {
    r.head
        .atoms()
        .iter()
        .chain(&r.pos)
        .chain(&r.neg)
        .copied()
        .chain(r.aggregates.iter().flat_map(|g| g.elements.iter().map(|(_, a)| *a)))
}

struct Search<'a> {
    g: &'a GroundProgram,
    undecided: Vec<usize>,
    /// Position of an atom in `undecided`.
    index: HashMap<usize, usize>,
    /// Rules to check once position `i` is assigned; `None` key = at start.
    rules_at: Vec<Vec<usize>>,
    support_at: Vec<Vec<usize>>,
    /// Pairs `(p, -p)` to check once position `i` is assigned.
    pairs_at: Vec<Vec<(usize, usize)>>,
    /// Rules listing each atom in their head.
    head_rules: HashMap<usize, Vec<usize>>,
    value: Vec<Option<bool>>,
    found: Vec<BTreeSet<GroundAtom>>,
}

impl Search<'_> {
    fn truth(&self, atom: usize) -> bool {
        if self.g.certain[atom] {
            return true;
        }
        match self.index.get(&atom) {
            Some(&i) => self.value[i].expect("checked atoms are assigned"),
            None => false,
        }
    }

    fn consistent_at(&self, i: usize) -> bool {
        let m = |a: usize| self.truth(a);
        self.rules_at[i].iter().all(|&r| rule_satisfied(&self.g.rules[r], &m))
            && self.pairs_at[i].iter().all(|&(p, q)| !(m(p) && m(q)))
            && self.support_at[i].iter().all(|&a| {
                !m(a) || self.head_rules.get(&a).is_some_and(|rs| rs.iter().any(|&r| supports(&self.g.rules[r], a, &m)))
            })
    }

    fn dfs(&mut self, i: usize) {
        if i == self.undecided.len() {
            if self.minimal() {
                let m: BTreeSet<GroundAtom> =
                    (0..self.g.atoms.len()).filter(|&a| self.truth(a)).map(|a| self.g.atoms[a].clone()).collect();
                self.found.push(m);
            }
            return;
        }
        for v in [false, true] {
            self.value[i] = Some(v);
            if self.consistent_at(i + 1) {
                self.dfs(i + 1);
            }
        }
        self.value[i] = None;
    }

    /// No proper subset of the current model satisfies the reduct.
    fn minimal(&self) -> bool {
        let m = |a: usize| self.truth(a);
        // reduct rules restricted to atoms of M: (head atoms in M, positive body)
        let mut reduct: Vec<(Vec<usize>, &[usize])> = Vec::new();
        for r in &self.g.rules {
            if r.neg.iter().any(|&a| m(a)) || !r.aggregates.iter().all(|g| aggregate_holds(g, &m)) {
                continue;
            }
            match &r.head {
                GroundHead::Empty => {}
                GroundHead::Disjunction(h) => reduct.push((h.iter().copied().filter(|&a| m(a)).collect(), &r.pos)),
                GroundHead::Choice { atoms, .. } => {
                    for &a in atoms.iter().filter(|&&a| m(a)) {
                        reduct.push((vec![a], &r.pos));
                    }
                }
            }
        }
        let chosen: Vec<usize> = self.undecided.iter().copied().filter(|&a| m(a)).collect();
        if reduct.iter().all(|(h, _)| h.len() <= 1) {
            // definite: the least model must be M itself
            let mut lm: BTreeSet<usize> = BTreeSet::new();
            loop {
                let mut changed = false;
                for (h, body) in &reduct {
                    if let Some(&a) = h.first() {
                        if !lm.contains(&a) && body.iter().all(|b| self.g.certain[*b] || lm.contains(b)) {
                            lm.insert(a);
                            changed = true;
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
            return chosen.iter().all(|a| lm.contains(a));
        }
        // disjunctive: look for a model N ⊊ M of the reduct
        let n = chosen.len();
        let pos: HashMap<usize, usize> = chosen.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let mut keep = vec![true; n];
        !smaller_model(&reduct, &chosen, &pos, &self.g.certain, &mut keep, 0, false)
    }
}

/// Depth-first search for a proper subset of `chosen` (plus certain atoms)
/// that satisfies every reduct rule.
fn smaller_model(
    reduct: &[(Vec<usize>, &[usize])],
    chosen: &[usize],
    pos: &HashMap<usize, usize>,
    certain: &[bool],
    keep: &mut Vec<bool>,
    i: usize,
    dropped: bool,
) -> bool {
    if i == chosen.len() {
        if !dropped {
            return false;
        }
        let t = |a: usize| certain[a] || pos.get(&a).is_some_and(|&j| keep[j]);
        return reduct.iter().all(|(h, body)| !body.iter().all(|&b| t(b)) || h.iter().any(|&a| t(a)));
    }
    for v in [false, true] {
        keep[i] = v;
        if smaller_model(reduct, chosen, pos, certain, keep, i + 1, dropped || !v) {
            keep[i] = true;
            return true;
        }
    }
    keep[i] = true;
    false
}

/// Returns every answer set of `g`, sorted, or refuses when more than
/// `limit` atoms are undecided.
pub fn enumerate_answer_sets(g: &GroundProgram, limit: usize) -> Result<Vec<BTreeSet<GroundAtom>>, OracleError> {
    let undecided = g.undecided();
    if undecided.len() > limit {
        return Err(OracleError::AtomLimit { atoms: undecided.len(), limit });
    }
    let n = undecided.len();
    let index: HashMap<usize, usize> = undecided.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    // `ready(a)` is the search depth after which atom a is assigned
    let ready = |a: usize| index.get(&a).map_or(0, |&i| i + 1);

    let mut rules_at = vec![Vec::new(); n + 1];
    let mut head_rules: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut rule_ready = Vec::with_capacity(g.rules.len());
    for (ri, r) in g.rules.iter().enumerate() {
        let at = rule_atoms(r).map(ready).max().unwrap_or(0);
        rules_at[at].push(ri);
        rule_ready.push(at);
        for &a in r.head.atoms() {
            head_rules.entry(a).or_default().push(ri);
        }
    }
    let mut support_at = vec![Vec::new(); n + 1];
    for &a in &undecided {
        let at = head_rules[&a].iter().map(|&r| rule_ready[r]).max().unwrap_or(0).max(ready(a));
        support_at[at].push(a);
    }
    let mut pairs_at = vec![Vec::new(); n + 1];
    for (i, a) in g.atoms.iter().enumerate() {
        if a.strong_neg {
            let pos = GroundAtom { strong_neg: false, ..a.clone() };
            if let Some(p) = g.atoms.get_index_of(&pos) {
                pairs_at[ready(i).max(ready(p))].push((p, i));
            }
        }
    }

    let mut s = Search {
        g,
        undecided,
        index,
        rules_at,
        support_at,
        pairs_at,
        head_rules,
        value: vec![None; n],
        found: Vec::new(),
    };
    if s.consistent_at(0) {
        s.dfs(0);
    }
    s.found.sort();
    Ok(s.found)
}
