//! Semantic analysis: constant resolution, symbol table construction,
//! domain evaluation, stratification and safety obligations.

mod constants;
mod domain;
mod safety;
mod strata;

use std::collections::BTreeSet;
use std::fmt;

use indexmap::{IndexMap, IndexSet};

use crate::diagnostics::{Diagnostic, Pos, Severity};
use crate::frontend::*;
use crate::value::{Tuple, Value};

pub use constants::{eval_int_expr, resolve_constants};
pub use domain::eval_domain_expr;
pub use safety::{check_safety, rule_obligations, SafetyObligation, SafetyReason};
pub use strata::{check_stratified, EdgeKind, StratificationReport};

/// A named finite set of ground tuples. Tuples keep insertion order, which
/// for database relations is source order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub arity: usize,
    pub tuples: IndexSet<Tuple>,
}

impl Relation {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        Relation { name: name.into(), arity, tuples: IndexSet::new() }
    }

    pub fn from_tuples(name: impl Into<String>, arity: usize, tuples: impl IntoIterator<Item = Tuple>) -> Self {
        let mut r = Relation::new(name, arity);
        for t in tuples {
            r.insert(t);
        }
        r
    }

    pub fn insert(&mut self, t: Tuple) -> bool {
        debug_assert_eq!(t.len(), self.arity, "tuple arity in {}", self.name);
        self.tuples.insert(t)
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, t: &[Value]) -> bool {
        self.tuples.contains(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Tuple> {
        self.tuples.iter()
    }
}

/// A predicate introduced by a metafact.
#[derive(Clone, Debug, PartialEq)]
pub struct Guessed {
    pub name: String,
    pub kind: MetafactKind,
    pub arity: usize,
    /// Index of the defining metafact in the spec.
    pub metafact: usize,
    /// Evaluated domain of the metafact.
    pub domain: Relation,
    /// Values of the extra argument: `1..c` for Permutation, `0..k-1` for
    /// Partition, `i..j` for IntFunc; empty for Subset.
    pub values: Vec<i64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SymbolTable {
    pub constants: IndexMap<String, i64>,
    pub relations: IndexMap<String, Relation>,
    pub guessed: IndexMap<String, Guessed>,
    /// Rule-head predicates with their arity.
    pub derived: IndexMap<String, usize>,
}

impl SymbolTable {
    pub fn arity(&self, pred: &str) -> Option<usize> {
        self.relations
            .get(pred)
            .map(|r| r.arity)
            .or_else(|| self.guessed.get(pred).map(|g| g.arity))
            .or_else(|| self.derived.get(pred).copied())
    }
}

/// Result of analyzing a spec.
#[derive(Clone, Debug)]
pub struct Analysis {
    /// The spec as written.
    pub source: Spec,
    /// The spec with every constant reference replaced by its value.
    pub resolved: Spec,
    pub table: SymbolTable,
    pub strata: StratificationReport,
    pub obligations: Vec<SafetyObligation>,
    /// Active domain: every value occurring in relations, constants,
    /// domains, guessed value ranges and rule literals.
    pub universe: BTreeSet<Value>,
}

impl Analysis {
    pub fn guessed_in_order(&self) -> impl Iterator<Item = &Guessed> {
        self.table.guessed.values()
    }

    pub fn obligations_of(&self, rule: usize) -> impl Iterator<Item = &SafetyObligation> {
        self.obligations.iter().filter(move |o| o.rule == rule)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnalysisErrorKind {
    UndefinedConstant(String),
    ConstantAsPredicate(String),
    UndefinedPredicate(String),
    GuessedInDomain(String),
    DerivedInDomain(String),
    ArityMismatch { pred: String, expected: usize, found: usize },
    DomainArity { op: DomainOp, left: usize, right: usize },
    HeadIsRelation(String),
    HeadIsGuessed(String),
    AnonymousInHead,
    AnonymousInExpression,
    TargetCollision(String),
    FailInBody,
    NotStratified { cycle: Vec<String> },
    InvalidRange { name: String, lo: i64, hi: i64 },
    PartitionCount(i64),
    IntFuncRange { lo: i64, hi: i64 },
    Arithmetic(String),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct AnalysisError {
    pub kind: AnalysisErrorKind,
    pub pos: Pos,
}

impl AnalysisError {
    pub fn new(kind: AnalysisErrorKind, pos: Pos) -> Self {
        AnalysisError { kind, pos }
    }

    pub fn code(&self) -> &'static str {
        use AnalysisErrorKind::*;
        match self.kind {
            UndefinedConstant(_) => "E0201",
            ConstantAsPredicate(_) => "E0202",
            UndefinedPredicate(_) => "E0203",
            GuessedInDomain(_) => "E0204",
            DerivedInDomain(_) => "E0205",
            ArityMismatch { .. } => "E0206",
            DomainArity { .. } => "E0207",
            HeadIsRelation(_) => "E0208",
            HeadIsGuessed(_) => "E0209",
            AnonymousInHead => "E0210",
            AnonymousInExpression => "E0211",
            TargetCollision(_) => "E0212",
            FailInBody => "E0213",
            NotStratified { .. } => "E0214",
            InvalidRange { .. } => "E0215",
            PartitionCount(_) => "E0216",
            IntFuncRange { .. } => "E0217",
            Arithmetic(_) => "E0218",
        }
    }

    pub fn diagnostic(&self) -> Diagnostic {
        Diagnostic::new(Severity::Error, self.code(), self.kind.to_string(), self.pos)
    }
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.kind)
    }
}

impl fmt::Display for AnalysisErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use AnalysisErrorKind::*;
        match self {
            UndefinedConstant(c) => write!(f, "undefined constant `{c}`"),
            ConstantAsPredicate(c) => write!(f, "constant `{c}` used as a predicate"),
            UndefinedPredicate(p) => write!(f, "undefined predicate `{p}`"),
            GuessedInDomain(p) => write!(f, "guessed predicate `{p}` cannot appear in a domain definition"),
            DerivedInDomain(p) => write!(f, "derived predicate `{p}` cannot appear in a domain definition"),
            ArityMismatch { pred, expected, found } => {
                write!(f, "`{pred}` has arity {expected} but is used with {found} arguments")
            }
            DomainArity { op, left, right } => write!(
                f,
                "operands of `{}` have different arities ({left} and {right})",
                op.symbol()
            ),
            HeadIsRelation(p) => write!(f, "database relation `{p}` cannot be defined by a rule"),
            HeadIsGuessed(p) => write!(f, "guessed predicate `{p}` cannot be defined by a rule"),
            AnonymousInHead => write!(f, "anonymous variable in rule head"),
            AnonymousInExpression => write!(f, "anonymous variable in a comparison or arithmetic expression"),
            TargetCollision(p) => write!(f, "metafact target `{p}` is already defined"),
            FailInBody => write!(f, "`fail` can only appear as a rule head"),
            NotStratified { cycle } => write!(
                f,
                "program is not stratified: negation or aggregation through the cycle {{{}}}",
                cycle.join(", ")
            ),
            InvalidRange { name, lo, hi } => write!(f, "range {lo}..{hi} of `{name}` is empty"),
            PartitionCount(k) => write!(f, "Partition needs at least one class, got {k}"),
            IntFuncRange { lo, hi } => write!(f, "IntFunc range {lo}..{hi} is empty"),
            Arithmetic(e) => write!(f, "cannot evaluate {e}"),
        }
    }
}

fn err<T>(kind: AnalysisErrorKind, pos: Pos) -> Result<T, AnalysisError> {
    Err(AnalysisError::new(kind, pos))
}

fn int_range(lo: i64, hi: i64) -> Vec<i64> {
    if lo > hi {
        Vec::new()
    } else {
        (lo..=hi).collect()
    }
}

/// Runs every analysis pass over `spec`.
pub fn analyze(spec: &Spec) -> Result<Analysis, AnalysisError> {
    check_targets(spec)?;
    let resolved = resolve_constants(spec)?;
    let mut table = SymbolTable {
        constants: spec.constants.iter().map(|c| (c.name.clone(), c.value)).collect(),
        ..SymbolTable::default()
    };

    for r in &resolved.relations {
        let rel = match &r.body {
            RelBody::Tuples(ts) => Relation::from_tuples(
                r.name.clone(),
                r.arity,
                ts.iter().map(|t| t.iter().map(ground_value).collect()),
            ),
            RelBody::Range(lo, hi) => {
                let lo = eval_int_expr(lo, &table.constants).map_err(|k| AnalysisError::new(k, r.pos))?;
                let hi = eval_int_expr(hi, &table.constants).map_err(|k| AnalysisError::new(k, r.pos))?;
                if lo > hi {
                    return err(AnalysisErrorKind::InvalidRange { name: r.name.clone(), lo, hi }, r.pos);
                }
                Relation::from_tuples(r.name.clone(), 1, (lo..=hi).map(|i| vec![Value::Int(i)]))
            }
        };
        table.relations.insert(r.name.clone(), rel);
    }

    let heads: IndexSet<&str> = resolved
        .rules
        .iter()
        .filter_map(|r| match &r.head {
            Head::Atom(a) => Some(a.pred.as_str()),
            Head::Fail => None,
        })
        .collect();

    for (i, m) in resolved.metafacts.iter().enumerate() {
        check_domain_leaves(&m.domain, &table, &resolved, &heads, m.pos)?;
        let mut dom = eval_domain_expr(&m.domain, &table).map_err(|e| AnalysisError::new(e.kind, m.pos))?;
        dom.name = fmt_domain(&spec.metafacts[i].domain);
        let eval = |e: &IntExpr| eval_int_expr(e, &table.constants).map_err(|k| AnalysisError::new(k, m.pos));
        let values = match (&m.kind, &m.param) {
            (MetafactKind::Subset, _) => Vec::new(),
            (MetafactKind::Permutation, _) => int_range(1, dom.len() as i64),
            (MetafactKind::Partition, MetafactParam::Count(k)) => {
                let k = eval(k)?;
                if k <= 0 {
                    return err(AnalysisErrorKind::PartitionCount(k), m.pos);
                }
                int_range(0, k - 1)
            }
            (MetafactKind::IntFunc, MetafactParam::Range(lo, hi)) => {
                let (lo, hi) = (eval(lo)?, eval(hi)?);
                if lo > hi {
                    return err(AnalysisErrorKind::IntFuncRange { lo, hi }, m.pos);
                }
                int_range(lo, hi)
            }
            _ => unreachable!("parser pairs metafact kinds with their parameters"),
        };
        let arity = dom.arity + m.kind.extra_arity();
        table.guessed.insert(
            m.target.clone(),
            Guessed { name: m.target.clone(), kind: m.kind, arity, metafact: i, domain: dom, values },
        );
    }

    for r in &resolved.rules {
        check_rule(r, &mut table)?;
    }
    for r in &resolved.rules {
        check_rule_body(r, &table)?;
    }

    let strata = check_stratified(&resolved)?;
    let obligations = check_safety(&resolved);
    let universe = active_domain(&resolved, &table);
    Ok(Analysis { source: spec.clone(), resolved, table, strata, obligations, universe })
}

/// Converts a ground term of a resolved spec into a value.
pub fn ground_value(t: &Term) -> Value {
    match t {
        Term::Int(i) => Value::Int(*i),
        Term::Sym(s) => Value::sym(s),
        other => unreachable!("database tuples hold only ground terms, found {other:?}"),
    }
}

fn check_targets(spec: &Spec) -> Result<(), AnalysisError> {
    let mut seen = BTreeSet::new();
    for m in &spec.metafacts {
        if spec.constant(&m.target).is_some() {
            return err(AnalysisErrorKind::ConstantAsPredicate(m.target.clone()), m.pos);
        }
        if spec.relation(&m.target).is_some() || !seen.insert(m.target.as_str()) {
            return err(AnalysisErrorKind::TargetCollision(m.target.clone()), m.pos);
        }
    }
    Ok(())
}

fn check_domain_leaves(
    d: &DomainExpr,
    table: &SymbolTable,
    spec: &Spec,
    heads: &IndexSet<&str>,
    pos: Pos,
) -> Result<(), AnalysisError> {
    match d {
        DomainExpr::Pred(p) => {
            if table.relations.contains_key(p) {
                Ok(())
            } else if spec.metafacts.iter().any(|m| m.target == *p) {
                err(AnalysisErrorKind::GuessedInDomain(p.clone()), pos)
            } else if heads.contains(p.as_str()) {
                err(AnalysisErrorKind::DerivedInDomain(p.clone()), pos)
            } else if table.constants.contains_key(p) {
                err(AnalysisErrorKind::ConstantAsPredicate(p.clone()), pos)
            } else {
                err(AnalysisErrorKind::UndefinedPredicate(p.clone()), pos)
            }
        }
        DomainExpr::Range(..) => Ok(()),
        DomainExpr::Binary(_, l, r) => {
            check_domain_leaves(l, table, spec, heads, pos)?;
            check_domain_leaves(r, table, spec, heads, pos)
        }
    }
}

fn has_anon(t: &Term) -> bool {
    match t {
        Term::Anon => true,
        Term::Binary(_, l, r) => has_anon(l) || has_anon(r),
        Term::Abs(t) => has_anon(t),
        _ => false,
    }
}

/// Registers the head predicate of `r` and checks head well-formedness.
fn check_rule(r: &Rule, table: &mut SymbolTable) -> Result<(), AnalysisError> {
    let Head::Atom(a) = &r.head else { return Ok(()) };
    if table.constants.contains_key(&a.pred) {
        return err(AnalysisErrorKind::ConstantAsPredicate(a.pred.clone()), a.pos);
    }
    if table.relations.contains_key(&a.pred) {
        return err(AnalysisErrorKind::HeadIsRelation(a.pred.clone()), a.pos);
    }
    if table.guessed.contains_key(&a.pred) {
        return err(AnalysisErrorKind::HeadIsGuessed(a.pred.clone()), a.pos);
    }
    if a.args.iter().any(has_anon) {
        return err(AnalysisErrorKind::AnonymousInHead, a.pos);
    }
    match table.derived.get(&a.pred) {
        Some(&n) if n != a.args.len() => err(
            AnalysisErrorKind::ArityMismatch { pred: a.pred.clone(), expected: n, found: a.args.len() },
            a.pos,
        ),
        Some(_) => Ok(()),
        None => {
            table.derived.insert(a.pred.clone(), a.args.len());
            Ok(())
        }
    }
}

fn check_atom_use(pred: &str, found: usize, table: &SymbolTable, pos: Pos) -> Result<(), AnalysisError> {
    if pred == "fail" {
        return err(AnalysisErrorKind::FailInBody, pos);
    }
    if table.constants.contains_key(pred) {
        return err(AnalysisErrorKind::ConstantAsPredicate(pred.to_string()), pos);
    }
    match table.arity(pred) {
        None => err(AnalysisErrorKind::UndefinedPredicate(pred.to_string()), pos),
        Some(n) if n != found => err(
            AnalysisErrorKind::ArityMismatch { pred: pred.to_string(), expected: n, found },
            pos,
        ),
        Some(_) => Ok(()),
    }
}

fn check_rule_body(r: &Rule, table: &SymbolTable) -> Result<(), AnalysisError> {
    for e in &r.body {
        match e {
            BodyElem::Pos(a) | BodyElem::Neg(a) => {
                check_atom_use(&a.pred, a.args.len(), table, a.pos)?;
                if a.args.iter().any(|t| t.is_arith() && has_anon(t)) {
                    return err(AnalysisErrorKind::AnonymousInExpression, a.pos);
                }
            }
            BodyElem::Builtin(_, l, rt) => {
                if has_anon(l) || has_anon(rt) {
                    return err(AnalysisErrorKind::AnonymousInExpression, r.pos);
                }
            }
            BodyElem::Aggregate(g) => check_atom_use(&g.pred, g.args.len(), table, g.pos)?,
        }
    }
    Ok(())
}

fn term_values(t: &Term, out: &mut BTreeSet<Value>) {
    match t {
        Term::Int(i) => {
            out.insert(Value::Int(*i));
        }
        Term::Sym(s) => {
            out.insert(Value::sym(s));
        }
        Term::Binary(_, l, r) => {
            term_values(l, out);
            term_values(r, out);
        }
        Term::Abs(t) => term_values(t, out),
        Term::Var(_) | Term::Anon => {}
    }
}

fn active_domain(spec: &Spec, table: &SymbolTable) -> BTreeSet<Value> {
    let mut u = BTreeSet::new();
    for r in table.relations.values() {
        u.extend(r.iter().flatten().cloned());
    }
    u.extend(table.constants.values().map(|&i| Value::Int(i)));
    for g in table.guessed.values() {
        u.extend(g.domain.iter().flatten().cloned());
        u.extend(g.values.iter().map(|&i| Value::Int(i)));
    }
    for r in &spec.rules {
        if let Head::Atom(a) = &r.head {
            a.args.iter().for_each(|t| term_values(t, &mut u));
        }
        for e in &r.body {
            match e {
                BodyElem::Pos(a) | BodyElem::Neg(a) => a.args.iter().for_each(|t| term_values(t, &mut u)),
                BodyElem::Builtin(_, l, r) => {
                    term_values(l, &mut u);
                    term_values(r, &mut u);
                }
                BodyElem::Aggregate(g) => {
                    for a in &g.args {
                        match a {
                            AggArg::Int(i) => {
                                u.insert(Value::Int(*i));
                            }
                            AggArg::Sym(s) => {
                                u.insert(Value::sym(s));
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse;

    fn analyze_src(src: &str) -> Result<Analysis, AnalysisError> {
        analyze(&parse(src).unwrap())
    }

    const HAM: &str = "DATABASE n = 6;
        edge = {(1,2),(3,1),(2,3),(6,2),(5,6),(4,5),(3,5),(1,4),(4,1)};
        SPECIFICATION Permutation({1..n},path).
        fail <-- path(X,P), path(Y,P+1), NOT edge(X,Y).
        fail <-- path(X,n), path(Y,1), NOT edge(X,Y).";

    #[test]
    fn hamiltonian_symbols() {
        let a = analyze_src(HAM).unwrap();
        assert_eq!(a.table.constants["n"], 6);
        assert_eq!(a.table.relations["edge"].len(), 9);
        let path = &a.table.guessed["path"];
        assert_eq!(path.arity, 2);
        assert_eq!(path.domain.len(), 6);
        assert_eq!(path.values, vec![1, 2, 3, 4, 5, 6]);
        assert!(a.table.derived.is_empty());
        assert!(a.obligations.is_empty());
    }

    #[test]
    fn guessed_arity_rule() {
        let a = analyze_src(
            "DATABASE e = {(1,2),(2,3)}; SPECIFICATION Subset(e,s). Permutation(e,p). Partition(e,q,2). IntFunc(e,f,0..1).",
        )
        .unwrap();
        assert_eq!(a.table.guessed["s"].arity, 2);
        for p in ["p", "q", "f"] {
            assert_eq!(a.table.guessed[p].arity, 3);
        }
    }

    #[test]
    fn metafact_parameter_errors() {
        let e = analyze_src("DATABASE e = {1}; SPECIFICATION Partition(e,q,0).").unwrap_err();
        assert_eq!(e.kind, AnalysisErrorKind::PartitionCount(0));
        let e = analyze_src("DATABASE e = {1}; SPECIFICATION IntFunc(e,q,3..1).").unwrap_err();
        assert_eq!(e.kind, AnalysisErrorKind::IntFuncRange { lo: 3, hi: 1 });
    }

    #[test]
    fn name_errors() {
        let cases = [
            ("DATABASE e = {1}; SPECIFICATION Subset(e,e).", AnalysisErrorKind::TargetCollision("e".into())),
            ("DATABASE e = {1}; SPECIFICATION Subset(e,s). Subset(e,s).", AnalysisErrorKind::TargetCollision("s".into())),
            ("DATABASE e = {1}; SPECIFICATION Subset(e,s). Subset(s,t).", AnalysisErrorKind::GuessedInDomain("s".into())),
            ("DATABASE e = {1}; SPECIFICATION Subset(d,s).", AnalysisErrorKind::UndefinedPredicate("d".into())),
            ("DATABASE e = {1}; SPECIFICATION Subset({1..m},s).", AnalysisErrorKind::UndefinedConstant("m".into())),
            ("DATABASE n = 2; e = {1}; SPECIFICATION fail <-- n(X).", AnalysisErrorKind::ConstantAsPredicate("n".into())),
            ("DATABASE e = {1}; SPECIFICATION e(X) <-- e(X).", AnalysisErrorKind::HeadIsRelation("e".into())),
            ("DATABASE e = {1}; SPECIFICATION fail <-- e(X,Y).", AnalysisErrorKind::ArityMismatch { pred: "e".into(), expected: 1, found: 2 }),
            ("DATABASE e = {1}; SPECIFICATION q(_) <-- e(X).", AnalysisErrorKind::AnonymousInHead),
            ("DATABASE e = {1}; SPECIFICATION fail <-- e(X), X > _.", AnalysisErrorKind::AnonymousInExpression),
            ("DATABASE e = {1}; SPECIFICATION fail <-- e(X), fail.", AnalysisErrorKind::FailInBody),
            ("DATABASE e = 3..1; SPECIFICATION", AnalysisErrorKind::InvalidRange { name: "e".into(), lo: 3, hi: 1 }),
        ];
        for (src, kind) in cases {
            assert_eq!(analyze_src(src).unwrap_err().kind, kind, "{src}");
        }
    }

    #[test]
    fn constants_substituted_in_tuples() {
        let a = analyze_src("DATABASE n = 4; e = {n, 2}; SPECIFICATION").unwrap();
        assert!(a.table.relations["e"].contains(&[Value::Int(4)]));
    }

    #[test]
    fn universe_collects_all_sources() {
        let a = analyze_src("DATABASE e = {(a,1)}; SPECIFICATION Partition(e,p,3). fail <-- p(X,Y,Z), Z > 7.").unwrap();
        let u: Vec<String> = a.universe.iter().map(|v| v.to_string()).collect();
        assert_eq!(u, ["0", "1", "2", "7", "a"]);
    }
}
