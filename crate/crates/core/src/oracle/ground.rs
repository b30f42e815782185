//! Naive grounding of translated programs.
//!
//! Possible atoms are computed as a fixpoint that ignores negation and
//! aggregates; each rule is then instantiated by joining its positive body
//! atoms against the possible atoms. Atoms derivable from facts by definite
//! rules are marked certain and simplified away.

use std::collections::HashMap;

use indexmap::IndexSet;

use crate::frontend::{AggFunc, CmpOp};
use crate::translator::{AspAtom, AspHead, AspLiteral, AspProgram, AspRule, AspTerm};
use crate::value::{Tuple, Value};

use super::{GroundAtom, OracleError};

pub const DEFAULT_GROUND_LIMIT: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundAggregate {
    pub func: AggFunc,
    /// Element tuples with the atom that contributes each; a tuple counts
    /// once if any of its atoms is true.
    pub elements: Vec<(Tuple, usize)>,
    pub guards: Vec<(CmpOp, Value)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroundHead {
    Disjunction(Vec<usize>),
    Choice { atoms: Vec<usize>, lower: Option<i64>, upper: Option<i64> },
    Empty,
}

impl GroundHead {
    pub fn atoms(&self) -> &[usize] {
        match self {
            GroundHead::Disjunction(a) | GroundHead::Choice { atoms: a, .. } => a,
            GroundHead::Empty => &[],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundRule {
    pub head: GroundHead,
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
    pub aggregates: Vec<GroundAggregate>,
}

/// A variable-free program over the atoms in `atoms`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroundProgram {
    pub atoms: IndexSet<GroundAtom>,
    /// True for atoms that hold in every answer set.
    pub certain: Vec<bool>,
    /// Remaining rules after simplification against certain atoms.
    pub rules: Vec<GroundRule>,
}

impl GroundProgram {
    /// Atoms that are neither certain nor impossible: the search space.
    pub fn undecided(&self) -> Vec<usize> {
        let mut in_head = vec![false; self.atoms.len()];
        for r in &self.rules {
            r.head.atoms().iter().for_each(|&a| in_head[a] = true);
        }
        (0..self.atoms.len()).filter(|&a| in_head[a] && !self.certain[a]).collect()
    }
}

enum Ev {
    Val(Value),
    Unbound,
    Undefined,
}

type Binding = HashMap<String, Value>;

fn eval(t: &AspTerm, b: &Binding) -> Ev {
    match t {
        AspTerm::Var(v) => b.get(v).map_or(Ev::Unbound, |x| Ev::Val(x.clone())),
        AspTerm::Int(i) | AspTerm::Const { value: i, .. } => Ev::Val(Value::Int(*i)),
        AspTerm::Sym(s) => Ev::Val(Value::sym(s)),
        AspTerm::Anon | AspTerm::Range(..) => Ev::Undefined,
        AspTerm::Arith(op, l, r) => match (eval(l, b), eval(r, b)) {
            (Ev::Val(Value::Int(x)), Ev::Val(Value::Int(y))) => op.apply(x, y).map_or(Ev::Undefined, |v| Ev::Val(Value::Int(v))),
            (Ev::Unbound, _) | (_, Ev::Unbound) => Ev::Unbound,
            _ => Ev::Undefined,
        },
        AspTerm::Abs(t) => match eval(t, b) {
            Ev::Val(Value::Int(x)) => x.checked_abs().map_or(Ev::Undefined, |v| Ev::Val(Value::Int(v))),
            Ev::Unbound => Ev::Unbound,
            _ => Ev::Undefined,
        },
    }
}

fn key(a: &AspAtom) -> (String, bool) {
    (a.pred.clone(), a.strong_neg)
}

#[derive(Default)]
struct Atoms {
    set: IndexSet<GroundAtom>,
    by_pred: HashMap<(String, bool), Vec<usize>>,
}

impl Atoms {
    fn insert(&mut self, a: GroundAtom) -> (usize, bool) {
        let k = (a.pred.clone(), a.strong_neg);
        let (i, new) = self.set.insert_full(a);
        if new {
            self.by_pred.entry(k).or_default().push(i);
        }
        (i, new)
    }

    fn of(&self, k: &(String, bool)) -> &[usize] {
        self.by_pred.get(k).map_or(&[], Vec::as_slice)
    }
}

/// Unifies an atom pattern with a ground atom, extending `b`. Returns the
/// variables that were bound, or `None` on mismatch.
fn unify(pattern: &AspAtom, atom: &GroundAtom, b: &mut Binding) -> Option<Vec<String>> {
    let mut set = Vec::new();
    for (t, v) in pattern.args.iter().zip(&atom.args) {
        let ok = match t {
            AspTerm::Anon => true,
            AspTerm::Var(x) if !b.contains_key(x) => {
                b.insert(x.clone(), v.clone());
                set.push(x.clone());
                true
            }
            t => matches!(eval(t, b), Ev::Val(ref x) if x == v),
        };
        if !ok {
            set.iter().for_each(|x| {
                b.remove(x);
            });
            return None;
        }
    }
    Some(set)
}

struct Grounder {
    rules: Vec<AspRule>,
    atoms: Atoms,
    facts: Vec<bool>,
    limit: usize,
}

impl Grounder {
    fn add(&mut self, a: GroundAtom) -> Result<(usize, bool), OracleError> {
        let r = self.atoms.insert(a);
        if self.atoms.set.len() > self.limit {
            return Err(OracleError::GroundLimit { limit: self.limit });
        }
        Ok(r)
    }

    /// Every binding of the rule body's positive atoms and builtins.
    fn bindings(&self, rule: &AspRule) -> Result<Vec<Binding>, OracleError> {
        let pos: Vec<&AspAtom> = rule
            .body
            .iter()
            .filter_map(|l| match l {
                AspLiteral::Pos(a) => Some(a),
                _ => None,
            })
            .collect();
        let mut out = Vec::new();
        let mut b = Binding::new();
        self.join(rule, &pos, 0, &mut b, &mut out)?;
        Ok(out)
    }

    fn join(
        &self,
        rule: &AspRule,
        pos: &[&AspAtom],
        i: usize,
        b: &mut Binding,
        out: &mut Vec<Binding>,
    ) -> Result<(), OracleError> {
        let Some(pattern) = pos.get(i) else {
            if let Some(b) = builtins(rule, b.clone())? {
                out.push(b);
            }
            return Ok(());
        };
        for &id in self.atoms.of(&key(pattern)) {
            if let Some(set) = unify(pattern, &self.atoms.set[id], b) {
                self.join(rule, pos, i + 1, b, out)?;
                set.iter().for_each(|x| {
                    b.remove(x);
                });
            }
            if out.len() > self.limit {
                return Err(OracleError::GroundLimit { limit: self.limit });
            }
        }
        Ok(())
    }

    fn instantiate(&self, a: &AspAtom, b: &Binding) -> Result<Vec<GroundAtom>, OracleError> {
        let mut choices: Vec<Vec<Value>> = Vec::new();
        for t in &a.args {
            choices.push(match t {
                AspTerm::Range(lo, hi) => match (eval(lo, b), eval(hi, b)) {
                    (Ev::Val(Value::Int(lo)), Ev::Val(Value::Int(hi))) => (lo..=hi).map(Value::Int).collect(),
                    _ => return Err(OracleError::Ground(format!("invalid range in `{}`", a.pred))),
                },
                t => match eval(t, b) {
                    Ev::Val(v) => vec![v],
                    Ev::Undefined => return Ok(Vec::new()),
                    Ev::Unbound => return Err(OracleError::Ground(format!("unbound variable in `{}`", a.pred))),
                },
            });
        }
        let mut tuples: Vec<Tuple> = vec![Vec::new()];
        for c in choices {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    c.iter().map(move |v| {
                        let mut t = t.clone();
                        t.push(v.clone());
                        t
                    })
                })
                .collect();
        }
        Ok(tuples
            .into_iter()
            .map(|args| GroundAtom { pred: a.pred.clone(), strong_neg: a.strong_neg, args })
            .collect())
    }

    fn head_atoms(&self, head: &AspHead, b: &Binding) -> Result<Vec<GroundAtom>, OracleError> {
        let mut out = Vec::new();
        match head {
            AspHead::Empty => {}
            AspHead::Disjunction(atoms) => {
                for a in atoms {
                    out.extend(self.instantiate(a, b)?);
                }
            }
            AspHead::Choice { atom, condition: None, .. } => out.extend(self.instantiate(atom, b)?),
            AspHead::Choice { atom, condition: Some(cond), .. } => {
                let mut b = b.clone();
                for &id in self.atoms.of(&key(cond)) {
                    if !self.facts[id] {
                        return Err(OracleError::Ground(format!("choice condition `{}` is not a domain predicate", cond.pred)));
                    }
                    if let Some(set) = unify(cond, &self.atoms.set[id], &mut b) {
                        out.extend(self.instantiate(atom, &b)?);
                        set.iter().for_each(|x| {
                            b.remove(x);
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    fn ground_rule(&self, rule: &AspRule, b: &Binding) -> Result<Option<GroundRule>, OracleError> {
        let id = |a: GroundAtom| self.atoms.set.get_index_of(&a);
        let head_atoms: Vec<usize> = self.head_atoms(&rule.head, b)?.into_iter().filter_map(id).collect();
        let head = match &rule.head {
            AspHead::Empty => GroundHead::Empty,
            AspHead::Disjunction(_) => GroundHead::Disjunction(head_atoms),
            AspHead::Choice { lower, upper, .. } => GroundHead::Choice { atoms: head_atoms, lower: *lower, upper: *upper },
        };
        let mut g = GroundRule { head, pos: Vec::new(), neg: Vec::new(), aggregates: Vec::new() };
        for l in &rule.body {
            match l {
                AspLiteral::Pos(a) => {
                    for ga in self.instantiate(a, b)? {
                        g.pos.push(id(ga).expect("joined atoms are possible"));
                    }
                }
                AspLiteral::Neg(a) => {
                    if a.args.contains(&AspTerm::Anon) {
                        let mut b = b.clone();
                        for &i in self.atoms.of(&key(a)) {
                            if let Some(set) = unify(a, &self.atoms.set[i], &mut b) {
                                g.neg.push(i);
                                set.iter().for_each(|x| {
                                    b.remove(x);
                                });
                            }
                        }
                    } else {
                        g.neg.extend(self.instantiate(a, b)?.into_iter().filter_map(id));
                    }
                }
                AspLiteral::Cmp(..) | AspLiteral::Assign(..) => {}
                AspLiteral::Agg(agg) => {
                    let mut elements = Vec::new();
                    let mut lb = b.clone();
                    for &i in self.atoms.of(&key(&agg.atom)) {
                        if let Some(set) = unify(&agg.atom, &self.atoms.set[i], &mut lb) {
                            let t: Tuple = agg.elements.iter().map(|v| lb[v].clone()).collect();
                            elements.push((t, i));
                            set.iter().for_each(|x| {
                                lb.remove(x);
                            });
                        }
                    }
                    let mut guards = Vec::new();
                    for (op, t) in &agg.guards {
                        match eval(t, b) {
                            Ev::Val(v) => guards.push((*op, v)),
                            Ev::Undefined => return Ok(None),
                            Ev::Unbound => return Err(OracleError::Ground("unbound aggregate guard".into())),
                        }
                    }
                    g.aggregates.push(GroundAggregate { func: agg.func, elements, guards });
                }
            }
        }
        Ok(Some(g))
    }
}

/// Resolves assignments and comparisons of a rule after the positive
/// join. Returns `None` when a comparison is false or undefined.
fn builtins(rule: &AspRule, mut b: Binding) -> Result<Option<Binding>, OracleError> {
    let mut todo: Vec<&AspLiteral> =
        rule.body.iter().filter(|l| matches!(l, AspLiteral::Cmp(..) | AspLiteral::Assign(..))).collect();
    while !todo.is_empty() {
        let before = todo.len();
        let mut rest = Vec::new();
        for l in todo {
            let (op, x, y) = match l {
                AspLiteral::Assign(v, e) => (CmpOp::Eq, AspTerm::Var(v.clone()), e.clone()),
                AspLiteral::Cmp(op, x, y) => (*op, x.clone(), y.clone()),
                _ => unreachable!(),
            };
            match (eval(&x, &b), eval(&y, &b)) {
                (Ev::Undefined, _) | (_, Ev::Undefined) => return Ok(None),
                (Ev::Val(l), Ev::Val(r)) => {
                    if !op.holds(&l, &r) {
                        return Ok(None);
                    }
                }
                (Ev::Unbound, Ev::Val(v)) if op == CmpOp::Eq && matches!(x, AspTerm::Var(_)) => {
                    let AspTerm::Var(name) = x else { unreachable!() };
                    b.insert(name, v);
                }
                (Ev::Val(v), Ev::Unbound) if op == CmpOp::Eq && matches!(y, AspTerm::Var(_)) => {
                    let AspTerm::Var(name) = y else { unreachable!() };
                    b.insert(name, v);
                }
                _ => rest.push(l),
            }
        }
        if rest.len() == before {
            return Err(OracleError::Ground("unsafe builtin: variables are never bound".into()));
        }
        todo = rest;
    }
    Ok(Some(b))
}

/// Gives every `_` in a positive body atom its own variable so that the
/// join enumerates it.
fn name_anonymous(rule: &AspRule) -> AspRule {
    let mut rule = rule.clone();
    let mut k = 0;
    for l in &mut rule.body {
        if let AspLiteral::Pos(a) = l {
            for t in &mut a.args {
                if *t == AspTerm::Anon {
                    k += 1;
                    *t = AspTerm::Var(format!("_{k}"));
                }
            }
        }
    }
    rule
}

/// Grounds `program`, refusing when more than `limit` atoms or rule
/// instances arise.
pub fn naive_ground(program: &AspProgram, limit: usize) -> Result<GroundProgram, OracleError> {
    let rules = program.rules.iter().map(name_anonymous).collect();
    let mut g = Grounder { rules, atoms: Atoms::default(), facts: Vec::new(), limit };
    let empty = Binding::new();
    for f in &program.facts {
        for a in g.instantiate(&f.atom, &empty)? {
            g.add(a)?;
        }
    }
    g.facts = vec![true; g.atoms.set.len()];

    loop {
        let mut changed = false;
        for i in 0..g.rules.len() {
            let rule = &g.rules[i];
            let mut new = Vec::new();
            for b in g.bindings(rule)? {
                new.extend(g.head_atoms(&rule.head, &b)?);
            }
            for a in new {
                changed |= g.add(a)?.1;
            }
        }
        if !changed {
            break;
        }
    }
    g.facts.resize(g.atoms.set.len(), false);

    let mut rules = Vec::new();
    for rule in &g.rules {
        for b in g.bindings(rule)? {
            if let Some(r) = g.ground_rule(rule, &b)? {
                rules.push(r);
            }
            if rules.len() > limit {
                return Err(OracleError::GroundLimit { limit });
            }
        }
    }
    let mut program = GroundProgram { atoms: g.atoms.set, certain: g.facts, rules };
    simplify(&mut program);
    Ok(program)
}

/// Settles atoms and literals until nothing changes: atoms derivable by
/// definite rules become certain, atoms that head no rule are false, and
/// rules or literals with a settled truth value are removed.
fn simplify(p: &mut GroundProgram) {
    loop {
        let mut changed = false;
        let mut in_head = vec![false; p.atoms.len()];
        for r in &p.rules {
            r.head.atoms().iter().for_each(|&a| in_head[a] = true);
        }
        let certain = &mut p.certain;
        let possible = |a: usize, certain: &[bool]| certain[a] || in_head[a];
        p.rules.retain_mut(|r| {
            if r.neg.iter().any(|&a| certain[a]) || r.pos.iter().any(|&a| !possible(a, certain)) {
                changed = true;
                return false;
            }
            let before = r.pos.len() + r.neg.len();
            r.pos.retain(|&a| !certain[a]);
            r.neg.retain(|&a| possible(a, certain));
            changed |= r.pos.len() + r.neg.len() != before;
            if let GroundHead::Disjunction(h) = &r.head {
                if h.iter().any(|&a| certain[a]) {
                    changed = true;
                    return false;
                }
                if h.len() == 1 && r.pos.is_empty() && r.neg.is_empty() && r.aggregates.is_empty() {
                    certain[h[0]] = true;
                    changed = true;
                    return false;
                }
            }
            true
        });
        if !changed {
            return;
        }
    }
}
