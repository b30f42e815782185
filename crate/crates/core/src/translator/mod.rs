//! Translation of analyzed NP-SPEC programs into ASP, in a dlv-style or a
//! gringo-style dialect.

mod emit;
mod ir;
mod metafacts;
mod rules;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::analyzer::{analyze, Analysis};
use crate::diagnostics::{Diagnostic, Pos, Severity};
use crate::frontend::*;
use crate::value::Value;

pub use emit::{emit_dialect, render_literal, render_rule, render_term};
pub use ir::*;
pub use metafacts::{translate_intfunc, translate_partition, translate_permutation, translate_subset, DomainRef};
pub use rules::{flatten_arithmetic, rewrite_aggregate, translate_rule, VarGen};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dialect {
    Dlv,
    Gringo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GuessEncoding {
    Disjunctive,
    Choice,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PermCheck {
    /// One pairwise integrity constraint per domain argument position.
    Constraints,
    /// A single count-aggregate constraint.
    Aggregate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EmitOptions {
    pub dialect: Dialect,
    pub guess: GuessEncoding,
    pub perm_check: PermCheck,
    /// Factor applied to the largest integer when computing the dlv
    /// `#maxint` directive.
    pub maxint_multiplier: i64,
}

impl Default for EmitOptions {
    fn default() -> Self {
        EmitOptions {
            dialect: Dialect::Gringo,
            guess: GuessEncoding::Disjunctive,
            perm_check: PermCheck::Constraints,
            maxint_multiplier: 1,
        }
    }
}

impl EmitOptions {
    pub fn new(dialect: Dialect, guess: GuessEncoding, perm_check: PermCheck) -> Self {
        EmitOptions { dialect, guess, perm_check, maxint_multiplier: 1 }
    }

    /// Choice rules only exist in the gringo-style dialect.
    pub fn is_valid(&self) -> bool {
        !(self.dialect == Dialect::Dlv && self.guess == GuessEncoding::Choice)
    }

    /// Every combination of dialect, guess encoding and permutation check,
    /// valid or not.
    pub fn combinations() -> Vec<EmitOptions> {
        let mut out = Vec::new();
        for dialect in [Dialect::Dlv, Dialect::Gringo] {
            for guess in [GuessEncoding::Disjunctive, GuessEncoding::Choice] {
                for perm_check in [PermCheck::Constraints, PermCheck::Aggregate] {
                    out.push(EmitOptions::new(dialect, guess, perm_check));
                }
            }
        }
        out
    }
}

impl fmt::Display for EmitOptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = match self.dialect {
            Dialect::Dlv => "dlv",
            Dialect::Gringo => "gringo",
        };
        let g = match self.guess {
            GuessEncoding::Disjunctive => "disjunctive",
            GuessEncoding::Choice => "choice",
        };
        let p = match self.perm_check {
            PermCheck::Constraints => "constraints",
            PermCheck::Aggregate => "aggregate",
        };
        write!(f, "{d}/{g}/{p}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TranslateErrorKind {
    ChoiceUnsupported,
    NegativeInteger(i64),
    UnsupportedOperator(&'static str),
    UnsafeVariable(String),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct TranslateError {
    pub kind: TranslateErrorKind,
    pub pos: Pos,
}

impl TranslateError {
    pub fn new(kind: TranslateErrorKind, pos: Pos) -> Self {
        TranslateError { kind, pos }
    }

    pub fn code(&self) -> &'static str {
        match self.kind {
            TranslateErrorKind::ChoiceUnsupported => "E0301",
            TranslateErrorKind::NegativeInteger(_) => "E0302",
            TranslateErrorKind::UnsupportedOperator(_) => "E0303",
            TranslateErrorKind::UnsafeVariable(_) => "E0304",
        }
    }

    pub fn diagnostic(&self) -> Diagnostic {
        Diagnostic::new(Severity::Error, self.code(), self.kind.to_string(), self.pos)
    }
}

impl fmt::Display for TranslateErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TranslateErrorKind::ChoiceUnsupported => write!(f, "the dlv dialect has no choice rules"),
            TranslateErrorKind::NegativeInteger(i) => {
                write!(f, "the dlv dialect does not support negative integers (found {i})")
            }
            TranslateErrorKind::UnsupportedOperator(op) => {
                write!(f, "the dlv dialect does not support the `{op}` operator")
            }
            TranslateErrorKind::UnsafeVariable(v) => write!(f, "no domain can bind variable {v}"),
        }
    }
}

impl fmt::Display for TranslateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pos.line > 0 {
            write!(f, "{}: {}", self.pos, self.kind)
        } else {
            write!(f, "{}", self.kind)
        }
    }
}

/// Allocates fresh predicate names that avoid every user predicate.
#[derive(Debug)]
pub struct PredNames {
    used: BTreeSet<String>,
    dom: usize,
    agg: usize,
}

impl PredNames {
    pub fn new(analysis: &Analysis) -> Self {
        let t = &analysis.table;
        let used = t
            .relations
            .keys()
            .chain(t.guessed.keys())
            .chain(t.derived.keys())
            .chain(t.constants.keys())
            .cloned()
            .collect();
        PredNames { used, dom: 0, agg: 0 }
    }

    fn fresh(&mut self, prefix: &str, counter: fn(&mut Self) -> &mut usize) -> String {
        loop {
            let c = counter(self);
            *c += 1;
            let name = format!("{prefix}_{}", *c);
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }

    pub fn domain(&mut self) -> String {
        self.fresh("npspec_dom", |s| &mut s.dom)
    }

    pub fn aggregate(&mut self) -> String {
        self.fresh("agg_dom", |s| &mut s.agg)
    }

    pub fn universe(&mut self) -> String {
        let mut name = "npspec_univ".to_string();
        let mut k = 0;
        while self.used.contains(&name) {
            k += 1;
            name = format!("npspec_univ_{k}");
        }
        self.used.insert(name.clone());
        name
    }
}

pub(crate) fn value_term(v: &Value) -> AspTerm {
    match v {
        Value::Int(i) => AspTerm::Int(*i),
        Value::Sym(s) => AspTerm::Sym(s.to_string()),
    }
}

/// Converts a constant expression, keeping constant names.
pub(crate) fn int_expr_term(e: &IntExpr, constants: &indexmap::IndexMap<String, i64>) -> AspTerm {
    match e {
        IntExpr::Lit(i) => AspTerm::Int(*i),
        IntExpr::Const(c) => AspTerm::Const { name: c.clone(), value: constants[c] },
        IntExpr::Binary(op, l, r) => AspTerm::arith(*op, int_expr_term(l, constants), int_expr_term(r, constants)),
    }
}

/// Fails on the first negative integer of a dlv program part.
pub(crate) fn check_dlv_ints<'a>(
    terms: impl IntoIterator<Item = &'a AspTerm>,
    pos: Pos,
) -> Result<(), TranslateError> {
    let mut neg = None;
    for t in terms {
        t.ints(&mut |i| {
            if i < 0 && neg.is_none() {
                neg = Some(i);
            }
        });
    }
    match neg {
        Some(i) => Err(TranslateError::new(TranslateErrorKind::NegativeInteger(i), pos)),
        None => Ok(()),
    }
}

pub(crate) fn rule_terms(r: &AspRule) -> Vec<&AspTerm> {
    let mut out: Vec<&AspTerm> = Vec::new();
    match &r.head {
        AspHead::Disjunction(atoms) => atoms.iter().for_each(|a| out.extend(&a.args)),
        AspHead::Choice { atom, condition, .. } => {
            out.extend(&atom.args);
            if let Some(c) = condition {
                out.extend(&c.args);
            }
        }
        AspHead::Empty => {}
    }
    for l in &r.body {
        match l {
            AspLiteral::Pos(a) | AspLiteral::Neg(a) => out.extend(&a.args),
            AspLiteral::Cmp(_, x, y) => {
                out.push(x);
                out.push(y);
            }
            AspLiteral::Assign(_, e) => out.push(e),
            AspLiteral::Agg(g) => {
                out.extend(&g.atom.args);
                out.extend(g.guards.iter().map(|(_, t)| t));
            }
        }
    }
    out
}

/// Compiles an analyzed spec into an ASP program.
pub fn translate(analysis: &Analysis, opts: &EmitOptions) -> Result<AspProgram, TranslateError> {
    if !opts.is_valid() {
        return Err(TranslateError::new(TranslateErrorKind::ChoiceUnsupported, Pos::default()));
    }
    let dlv = opts.dialect == Dialect::Dlv;
    let mut names = PredNames::new(analysis);
    let mut program = AspProgram::default();
    let table = &analysis.table;

    if !dlv {
        for c in &analysis.source.constants {
            program.directives.push(Directive::Const { name: c.name.clone(), value: c.value });
        }
    }

    for def in &analysis.source.relations {
        let rel = &table.relations[&def.name];
        for t in rel.iter() {
            let atom = AspAtom::new(rel.name.clone(), t.iter().map(value_term).collect());
            if dlv {
                check_dlv_ints(&atom.args, def.pos)?;
            }
            program.facts.push(AspFact { atom, kind: FactKind::Database });
        }
    }

    let mut guess_rules = Vec::new();
    for (i, m) in analysis.source.metafacts.iter().enumerate() {
        let g = &table.guessed[&m.target];
        let resolved = &analysis.resolved.metafacts[i];
        let (dom, facts) =
            metafacts::domain_predicate(&m.domain, &resolved.domain, table, opts, &mut names);
        for f in &facts {
            if dlv {
                check_dlv_ints(&f.atom.args, m.pos)?;
            }
        }
        program.facts.extend(facts);
        let rules = match g.kind {
            MetafactKind::Subset => translate_subset(&g.name, &dom, opts, i),
            MetafactKind::Permutation => {
                if g.domain.is_empty() {
                    program.warnings.push(Diagnostic::warning(
                        "W0301",
                        format!("Permutation domain of `{}` is empty; no guess is emitted", g.name),
                        m.pos,
                    ));
                }
                translate_permutation(&g.name, &dom, g.domain.len(), opts, i)
            }
            MetafactKind::Partition => translate_partition(&g.name, &dom, g.values.len() as i64, opts, i),
            MetafactKind::IntFunc => {
                let (lo, hi) = (g.values[0], *g.values.last().expect("IntFunc range is non-empty"));
                translate_intfunc(&g.name, &dom, lo, hi, opts, i)
            }
        };
        for r in &rules {
            if dlv {
                check_dlv_ints(rule_terms(r), m.pos)?;
            }
        }
        guess_rules.extend(rules);
    }

    let universe = names.universe();
    let mut rules = Vec::new();
    for (i, rule) in analysis.source.rules.iter().enumerate() {
        let obligations: Vec<_> = analysis.obligations_of(i).cloned().collect();
        let (r, facts, repairs) =
            translate_rule(rule, i, &obligations, &table.constants, opts, &mut names, &universe)?;
        if dlv {
            check_dlv_ints(rule_terms(&r), rule.pos)?;
            for f in &facts {
                check_dlv_ints(&f.atom.args, rule.pos)?;
            }
        }
        program.facts.extend(facts);
        program.repairs += repairs;
        rules.push(r);
    }

    if program.repairs > 0 {
        for v in &analysis.universe {
            let atom = AspAtom::new(universe.clone(), vec![value_term(v)]);
            if dlv {
                check_dlv_ints(&atom.args, Pos::default())?;
            }
            program.facts.push(AspFact { atom, kind: FactKind::Universe });
        }
    }

    program.facts.sort_by_key(|f| f.kind);
    program.rules = guess_rules;
    program.rules.extend(rules);

    if dlv {
        let mut max = 0i64;
        let mut see = |i: i64| max = max.max(i);
        for f in &program.facts {
            f.atom.args.iter().for_each(|t| t.ints(&mut see));
        }
        for r in &program.rules {
            rule_terms(r).into_iter().for_each(|t| t.ints(&mut see));
            if let AspHead::Choice { lower, upper, .. } = &r.head {
                lower.iter().chain(upper).for_each(|&i| see(i));
            }
        }
        table.constants.values().for_each(|&i| see(i));
        program.directives.push(Directive::MaxInt(max.saturating_mul(opts.maxint_multiplier.max(1))));
    }
    Ok(program)
}

/// Parses, analyzes, translates and renders in one step.
pub fn compile(source: &str, opts: &EmitOptions) -> crate::Result<String> {
    let spec = parse(source)?;
    let analysis = analyze(&spec)?;
    let program = translate(&analysis, opts)?;
    Ok(emit_dialect(&program, opts)?)
}

/// Summary of a translation, rendered as `key: value` lines.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranslationReport {
    pub options: EmitOptions,
    pub database_facts: usize,
    pub domain_facts: usize,
    pub aggregate_domain_facts: usize,
    pub universe_facts: usize,
    pub guess_rules: usize,
    pub uniqueness_constraints: usize,
    pub translated_rules: usize,
    pub safety_repairs: usize,
    pub warnings: usize,
}

impl TranslationReport {
    pub fn new(program: &AspProgram, options: &EmitOptions) -> Self {
        let facts = |k| program.facts.iter().filter(|f| f.kind == k).count();
        let rules = |pred: fn(&RuleOrigin) -> bool| program.rules.iter().filter(|r| pred(&r.origin)).count();
        TranslationReport {
            options: *options,
            database_facts: facts(FactKind::Database),
            domain_facts: facts(FactKind::Domain),
            aggregate_domain_facts: facts(FactKind::AggregateDomain),
            universe_facts: facts(FactKind::Universe),
            guess_rules: rules(|o| matches!(o, RuleOrigin::Guess(_))),
            uniqueness_constraints: rules(|o| matches!(o, RuleOrigin::Uniqueness(_))),
            translated_rules: rules(|o| matches!(o, RuleOrigin::Rule(_))),
            safety_repairs: program.repairs,
            warnings: program.warnings.len(),
        }
    }
}

impl fmt::Display for TranslationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "options: {}", self.options)?;
        writeln!(f, "database facts: {}", self.database_facts)?;
        writeln!(f, "domain facts: {}", self.domain_facts)?;
        writeln!(f, "aggregate domain facts: {}", self.aggregate_domain_facts)?;
        writeln!(f, "universe facts: {}", self.universe_facts)?;
        writeln!(f, "guess rules: {}", self.guess_rules)?;
        writeln!(f, "uniqueness constraints: {}", self.uniqueness_constraints)?;
        writeln!(f, "translated rules: {}", self.translated_rules)?;
        writeln!(f, "safety repairs: {}", self.safety_repairs)?;
        write!(f, "warnings: {}", self.warnings)
    }
}
