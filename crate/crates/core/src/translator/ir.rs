//! Target-language IR shared by both dialects.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::diagnostics::Diagnostic;
use crate::frontend::{AggFunc, ArithOp, CmpOp};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AspTerm {
    Var(String),
    Int(i64),
    Sym(String),
    /// A named database constant. The gringo renderer keeps the name, the
    /// dlv renderer inlines the value.
    Const { name: String, value: i64 },
    Anon,
    Arith(ArithOp, Box<AspTerm>, Box<AspTerm>),
    Abs(Box<AspTerm>),
    /// `lo..hi` inside a fact or choice element.
    Range(Box<AspTerm>, Box<AspTerm>),
}

impl AspTerm {
    pub fn var(name: impl Into<String>) -> Self {
        AspTerm::Var(name.into())
    }

    pub fn arith(op: ArithOp, l: AspTerm, r: AspTerm) -> Self {
        AspTerm::Arith(op, Box::new(l), Box::new(r))
    }

    pub fn range(lo: AspTerm, hi: AspTerm) -> Self {
        AspTerm::Range(Box::new(lo), Box::new(hi))
    }

    pub fn vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            AspTerm::Var(v) => {
                out.insert(v);
            }
            AspTerm::Arith(_, l, r) | AspTerm::Range(l, r) => {
                l.vars(out);
                r.vars(out);
            }
            AspTerm::Abs(t) => t.vars(out),
            AspTerm::Int(_) | AspTerm::Sym(_) | AspTerm::Const { .. } | AspTerm::Anon => {}
        }
    }

    /// A variable or a ground non-arithmetic term.
    pub fn is_simple(&self) -> bool {
        matches!(self, AspTerm::Var(_) | AspTerm::Int(_) | AspTerm::Sym(_) | AspTerm::Const { .. })
    }

    pub fn is_arith(&self) -> bool {
        matches!(self, AspTerm::Arith(..) | AspTerm::Abs(_))
    }

    /// Visits every integer literal and constant value.
    pub fn ints(&self, f: &mut impl FnMut(i64)) {
        match self {
            AspTerm::Int(i) | AspTerm::Const { value: i, .. } => f(*i),
            AspTerm::Arith(_, l, r) | AspTerm::Range(l, r) => {
                l.ints(f);
                r.ints(f);
            }
            AspTerm::Abs(t) => t.ints(f),
            AspTerm::Var(_) | AspTerm::Sym(_) | AspTerm::Anon => {}
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AspAtom {
    pub pred: String,
    /// Classical (strong) negation `-p(..)`.
    pub strong_neg: bool,
    pub args: Vec<AspTerm>,
}

impl AspAtom {
    pub fn new(pred: impl Into<String>, args: Vec<AspTerm>) -> Self {
        AspAtom { pred: pred.into(), strong_neg: false, args }
    }

    pub fn negated(mut self) -> Self {
        self.strong_neg = true;
        self
    }

    pub fn vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        self.args.iter().for_each(|t| t.vars(out));
    }
}

/// Aggregate literal `value op term` for each guard, where value is the
/// aggregate over the set of distinct `elements` tuples of `atom` instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AspAggregate {
    pub func: AggFunc,
    /// Local variables whose distinct bindings form the aggregated set; the
    /// first one carries the weight for SUM/MIN/MAX.
    pub elements: Vec<String>,
    pub atom: AspAtom,
    pub guards: Vec<(CmpOp, AspTerm)>,
}

impl AspAggregate {
    /// Variables of the template atom that are not aggregate-local, i.e.
    /// must be bound by the rest of the body.
    pub fn global_vars<'a>(&'a self, local: &BTreeSet<&str>) -> BTreeSet<&'a str> {
        let mut vs = BTreeSet::new();
        self.atom.vars(&mut vs);
        vs.retain(|v| !local.contains(v));
        vs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AspLiteral {
    Pos(AspAtom),
    Neg(AspAtom),
    Cmp(CmpOp, AspTerm, AspTerm),
    /// Translator-introduced definition `V = expr` of a fresh variable.
    Assign(String, AspTerm),
    Agg(AspAggregate),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AspHead {
    Disjunction(Vec<AspAtom>),
    Choice { atom: AspAtom, condition: Option<AspAtom>, lower: Option<i64>, upper: Option<i64> },
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleOrigin {
    /// Guess rule of the metafact with this index.
    Guess(usize),
    /// Uniqueness constraint of the Permutation metafact with this index.
    Uniqueness(usize),
    /// Translation of the Datalog rule with this index.
    Rule(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AspRule {
    pub head: AspHead,
    pub body: Vec<AspLiteral>,
    pub origin: RuleOrigin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FactKind {
    Database,
    Domain,
    AggregateDomain,
    Universe,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AspFact {
    pub atom: AspAtom,
    pub kind: FactKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Directive {
    Const { name: String, value: i64 },
    MaxInt(i64),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AspProgram {
    pub directives: Vec<Directive>,
    pub facts: Vec<AspFact>,
    pub rules: Vec<AspRule>,
    /// Number of safety-repair atoms injected into rule bodies.
    pub repairs: usize,
    pub warnings: Vec<Diagnostic>,
}

/// A variable of an emitted rule that nothing binds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnsafeVariable {
    pub rule: usize,
    pub variable: String,
}

/// Strict safety check of an emitted program: every variable must occur as
/// an argument of a positive body atom, or be defined by an `Assign` whose
/// expression is bound. Aggregate-local variables are bound by their
/// aggregate's atom; choice-element variables may be bound by the element
/// condition.
pub fn unsafe_variables(program: &AspProgram) -> Vec<UnsafeVariable> {
    let mut out = Vec::new();
    for (i, r) in program.rules.iter().enumerate() {
        for v in rule_unsafe_vars(r) {
            out.push(UnsafeVariable { rule: i, variable: v });
        }
    }
    out
}

fn direct_vars<'a>(a: &'a AspAtom, out: &mut BTreeSet<&'a str>) {
    for t in &a.args {
        if let AspTerm::Var(v) = t {
            out.insert(v);
        }
    }
}

pub(crate) fn rule_unsafe_vars(r: &AspRule) -> Vec<String> {
    let mut bound = BTreeSet::new();
    for l in &r.body {
        if let AspLiteral::Pos(a) = l {
            direct_vars(a, &mut bound);
        }
    }
    loop {
        let before = bound.len();
        for l in &r.body {
            if let AspLiteral::Assign(v, e) = l {
                let mut vs = BTreeSet::new();
                e.vars(&mut vs);
                if vs.iter().all(|x| bound.contains(x)) {
                    bound.insert(v.as_str());
                }
            }
        }
        if bound.len() == before {
            break;
        }
    }

    let mut needed = BTreeSet::new();
    match &r.head {
        AspHead::Disjunction(atoms) => atoms.iter().for_each(|a| a.vars(&mut needed)),
        AspHead::Choice { atom, condition, .. } => {
            let mut local = BTreeSet::new();
            if let Some(c) = condition {
                direct_vars(c, &mut local);
                let mut cv = BTreeSet::new();
                c.vars(&mut cv);
                needed.extend(cv.into_iter().filter(|v| !local.contains(v)));
            }
            let mut av = BTreeSet::new();
            atom.vars(&mut av);
            needed.extend(av.into_iter().filter(|v| !local.contains(v)));
        }
        AspHead::Empty => {}
    }
    for l in &r.body {
        match l {
            AspLiteral::Pos(a) | AspLiteral::Neg(a) => a.vars(&mut needed),
            AspLiteral::Cmp(_, x, y) => {
                x.vars(&mut needed);
                y.vars(&mut needed);
            }
            AspLiteral::Assign(v, e) => {
                needed.insert(v);
                e.vars(&mut needed);
            }
            AspLiteral::Agg(g) => {
                let local: BTreeSet<&str> = g.elements.iter().map(String::as_str).collect();
                let mut atom_vars = BTreeSet::new();
                g.atom.vars(&mut atom_vars);
                // variables of the template that occur nowhere else are local too
                let elsewhere = other_vars(r, g);
                needed.extend(atom_vars.into_iter().filter(|v| !local.contains(v) && elsewhere.contains(v)));
                for (_, t) in &g.guards {
                    t.vars(&mut needed);
                }
            }
        }
    }
    needed.into_iter().filter(|v| !bound.contains(v)).map(str::to_string).collect()
}

/// Variables of `r` outside the aggregate `g`.
pub(crate) fn other_vars<'a>(r: &'a AspRule, g: &AspAggregate) -> BTreeSet<&'a str> {
    let mut vs = BTreeSet::new();
    match &r.head {
        AspHead::Disjunction(atoms) => atoms.iter().for_each(|a| a.vars(&mut vs)),
        AspHead::Choice { atom, condition, .. } => {
            atom.vars(&mut vs);
            if let Some(c) = condition {
                c.vars(&mut vs);
            }
        }
        AspHead::Empty => {}
    }
    for l in &r.body {
        match l {
            AspLiteral::Pos(a) | AspLiteral::Neg(a) => a.vars(&mut vs),
            AspLiteral::Cmp(_, x, y) => {
                x.vars(&mut vs);
                y.vars(&mut vs);
            }
            AspLiteral::Assign(v, e) => {
                vs.insert(v);
                e.vars(&mut vs);
            }
            AspLiteral::Agg(h) if std::ptr::eq(h, g) => {
                for (_, t) in &h.guards {
                    t.vars(&mut vs);
                }
            }
            AspLiteral::Agg(h) => {
                h.atom.vars(&mut vs);
                for (_, t) in &h.guards {
                    t.vars(&mut vs);
                }
            }
        }
    }
    vs
}
