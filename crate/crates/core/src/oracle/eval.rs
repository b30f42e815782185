//! Direct evaluation of the stratified Datalog part of a spec for a fixed
//! guess.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::analyzer::{eval_int_expr, Analysis};
use crate::diagnostics::Pos;
use crate::frontend::*;
use crate::value::{Tuple, Value};

use super::guess::Guess;
use super::OracleError;

/// Receives each complete binding; returns false to stop the search.
type Emit<'e> = dyn FnMut(&[Option<Value>]) -> Result<bool, OracleError> + 'e;

/// Extensions of all predicates plus the `fail` flag.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Interpretation {
    pub relations: BTreeMap<String, BTreeSet<Tuple>>,
    pub fail: bool,
}

impl Interpretation {
    pub fn get(&self, pred: &str) -> Option<&BTreeSet<Tuple>> {
        self.relations.get(pred)
    }
}

/// Computes the unique stratified model for `guess`.
pub fn eval_stratified(analysis: &Analysis, guess: &Guess) -> Result<Interpretation, OracleError> {
    Evaluator::new(analysis).eval(guess, false)
}

#[derive(Clone, Debug)]
enum Expr {
    Slot(usize),
    Val(Value),
    Bin(ArithOp, Box<Expr>, Box<Expr>),
    Abs(Box<Expr>),
}

#[derive(Clone, Debug)]
enum Pat {
    /// Binds the slot, or compares when it is already bound.
    Bind(usize),
    Val(Value),
    Any,
    /// Compares against an expression over already bound slots.
    Expr(Expr),
}

#[derive(Clone, Debug)]
enum AggPat {
    Star,
    Any,
    Local(usize),
    Eq(Expr),
}

#[derive(Clone, Debug)]
struct AggPlan {
    func: AggFunc,
    pred: String,
    pats: Vec<AggPat>,
    locals: usize,
    result: usize,
    lo: i64,
    hi: i64,
}

#[derive(Clone, Debug)]
enum Step {
    Match(String, Vec<Pat>),
    Enum(usize),
    Check(CmpOp, Expr, Expr),
    Absent(String, Vec<Option<Expr>>),
    Agg(AggPlan),
}

#[derive(Clone, Debug)]
struct RulePlan {
    head: Option<(String, Vec<Expr>)>,
    steps: Vec<Step>,
    slots: usize,
    pos: Pos,
}

/// A body item waiting for its variables to be bound.
struct Pending {
    needs: BTreeSet<usize>,
    binds: Option<usize>,
    step: Step,
}

struct Planner {
    slots: HashMap<String, usize>,
    count: usize,
    bound: BTreeSet<usize>,
    steps: Vec<Step>,
    pending: Vec<Pending>,
}

impl Planner {
    fn fresh(&mut self) -> usize {
        self.count += 1;
        self.count - 1
    }

    fn slot(&mut self, v: &str) -> usize {
        if let Some(&s) = self.slots.get(v) {
            return s;
        }
        let s = self.fresh();
        self.slots.insert(v.to_string(), s);
        s
    }

    fn expr(&mut self, t: &Term) -> Expr {
        match t {
            Term::Var(v) => Expr::Slot(self.slot(v)),
            Term::Int(i) => Expr::Val(Value::Int(*i)),
            Term::Sym(s) => Expr::Val(Value::sym(s)),
            Term::Anon => unreachable!("analysis rejects `_` inside expressions"),
            Term::Binary(op, l, r) => Expr::Bin(*op, Box::new(self.expr(l)), Box::new(self.expr(r))),
            Term::Abs(t) => Expr::Abs(Box::new(self.expr(t))),
        }
    }

    fn expr_slots(e: &Expr, out: &mut BTreeSet<usize>) {
        match e {
            Expr::Slot(s) => {
                out.insert(*s);
            }
            Expr::Val(_) => {}
            Expr::Bin(_, l, r) => {
                Self::expr_slots(l, out);
                Self::expr_slots(r, out);
            }
            Expr::Abs(t) => Self::expr_slots(t, out),
        }
    }

    fn defer(&mut self, step: Step, binds: Option<usize>, exprs: &[Expr]) {
        let mut needs = BTreeSet::new();
        exprs.iter().for_each(|e| Self::expr_slots(e, &mut needs));
        if let Some(b) = binds {
            needs.remove(&b);
        }
        self.pending.push(Pending { needs, binds, step });
    }

    /// Schedules every pending item whose variables are bound.
    fn flush(&mut self) {
        loop {
            let Some(i) = self.pending.iter().position(|p| p.needs.is_subset(&self.bound)) else {
                return;
            };
            let p = self.pending.remove(i);
            if let Some(b) = p.binds {
                self.bound.insert(b);
            }
            self.steps.push(p.step);
        }
    }

    fn enumerate(&mut self, slot: usize) {
        if self.bound.insert(slot) {
            self.steps.push(Step::Enum(slot));
            self.flush();
        }
    }
}

fn plan_rule(rule: &Rule, constants: &indexmap::IndexMap<String, i64>) -> RulePlan {
    let mut p = Planner { slots: HashMap::new(), count: 0, bound: BTreeSet::new(), steps: Vec::new(), pending: Vec::new() };
    // Negations, builtins and aggregates first register as pending.
    for (i, e) in rule.body.iter().enumerate() {
        match e {
            BodyElem::Pos(_) => {}
            BodyElem::Neg(a) => {
                let args: Vec<Option<Expr>> =
                    a.args.iter().map(|t| (*t != Term::Anon).then(|| p.expr(t))).collect();
                let exprs: Vec<Expr> = args.iter().flatten().cloned().collect();
                p.defer(Step::Absent(a.pred.clone(), args), None, &exprs);
            }
            BodyElem::Builtin(op, l, r) => {
                let (l, r) = (p.expr(l), p.expr(r));
                let exprs = [l.clone(), r.clone()];
                p.defer(Step::Check(*op, l, r), None, &exprs);
            }
            BodyElem::Aggregate(g) => {
                let shared = rule.aggregate_shared(i);
                let mut locals: HashMap<&str, usize> = HashMap::new();
                let mut exprs = Vec::new();
                let pats = g
                    .args
                    .iter()
                    .map(|a| match a {
                        AggArg::Star => AggPat::Star,
                        AggArg::Anon => AggPat::Any,
                        AggArg::Int(i) => AggPat::Eq(Expr::Val(Value::Int(*i))),
                        AggArg::Sym(s) => AggPat::Eq(Expr::Val(Value::sym(s))),
                        AggArg::Var(v) if shared.contains(v) => {
                            let e = Expr::Slot(p.slot(v));
                            exprs.push(e.clone());
                            AggPat::Eq(e)
                        }
                        AggArg::Var(v) => {
                            let n = locals.len();
                            AggPat::Local(*locals.entry(v).or_insert(n))
                        }
                    })
                    .collect();
                let result = p.slot(&g.result);
                let bound = |e: &IntExpr| eval_int_expr(e, constants).expect("aggregate bounds resolved during analysis");
                let plan = AggPlan {
                    func: g.func,
                    pred: g.pred.clone(),
                    pats,
                    locals: locals.len(),
                    result,
                    lo: bound(&g.lo),
                    hi: bound(&g.hi),
                };
                p.defer(Step::Agg(plan), Some(result), &exprs);
            }
        }
    }
    p.flush();
    for e in &rule.body {
        let BodyElem::Pos(a) = e else { continue };
        let mut pats = Vec::new();
        let mut newly = BTreeSet::new();
        let mut hidden = Vec::new();
        for t in &a.args {
            pats.push(match t {
                Term::Var(v) => {
                    let s = p.slot(v);
                    newly.insert(s);
                    Pat::Bind(s)
                }
                Term::Anon => Pat::Any,
                Term::Int(i) => Pat::Val(Value::Int(*i)),
                Term::Sym(s) => Pat::Val(Value::sym(s)),
                t => {
                    let e = p.expr(t);
                    let mut needs = BTreeSet::new();
                    Planner::expr_slots(&e, &mut needs);
                    if needs.iter().all(|s| p.bound.contains(s) || newly.contains(s)) {
                        Pat::Expr(e)
                    } else {
                        // compared once the expression's variables are bound
                        let h = p.fresh();
                        newly.insert(h);
                        hidden.push((h, e));
                        Pat::Bind(h)
                    }
                }
            });
        }
        for (h, e) in hidden {
            let exprs = [Expr::Slot(h), e.clone()];
            p.defer(Step::Check(CmpOp::Eq, Expr::Slot(h), e), None, &exprs);
        }
        p.steps.push(Step::Match(a.pred.clone(), pats));
        p.bound.extend(newly);
        p.flush();
    }
    let results: BTreeSet<&str> = rule
        .body
        .iter()
        .filter_map(|e| match e {
            BodyElem::Aggregate(g) => Some(g.result.as_str()),
            _ => None,
        })
        .collect();
    for v in rule.variables() {
        if !results.contains(v.as_str()) {
            let s = p.slot(&v);
            p.enumerate(s);
        }
    }
    while let Some(first) = p.pending.first() {
        let missing = first.needs.difference(&p.bound).next().copied();
        match missing {
            Some(s) => p.enumerate(s),
            None => p.flush(),
        }
    }
    let head = match &rule.head {
        Head::Fail => None,
        Head::Atom(a) => Some((a.pred.clone(), a.args.iter().map(|t| p.expr(t)).collect())),
    };
    RulePlan { head, steps: p.steps, slots: p.count, pos: rule.pos }
}

#[derive(Default)]
struct Store {
    tuples: Vec<Tuple>,
    set: HashSet<Tuple>,
}

impl Store {
    fn insert(&mut self, t: Tuple) -> bool {
        if self.set.contains(&t) {
            return false;
        }
        self.set.insert(t.clone());
        self.tuples.push(t);
        true
    }
}

fn arith_error(message: String, pos: Pos) -> OracleError {
    OracleError::Arithmetic { message, pos }
}

fn eval_expr(e: &Expr, b: &[Option<Value>], pos: Pos) -> Result<Value, OracleError> {
    Ok(match e {
        Expr::Slot(s) => b[*s].clone().expect("planner binds slots before use"),
        Expr::Val(v) => v.clone(),
        Expr::Bin(op, l, r) => {
            let (l, r) = (eval_expr(l, b, pos)?, eval_expr(r, b, pos)?);
            let (Value::Int(x), Value::Int(y)) = (&l, &r) else {
                let sym = if l.as_int().is_none() { l } else { r };
                return Err(arith_error(format!("arithmetic on symbolic constant `{sym}`"), pos));
            };
            match op.apply(*x, *y) {
                Some(v) => Value::Int(v),
                None if *op == ArithOp::Div && *y == 0 => return Err(arith_error("division by zero".into(), pos)),
                None => return Err(arith_error(format!("arithmetic overflow in {x}{}{y}", op.symbol()), pos)),
            }
        }
        Expr::Abs(t) => match eval_expr(t, b, pos)? {
            Value::Int(i) => Value::Int(i.checked_abs().ok_or_else(|| arith_error("arithmetic overflow in abs".into(), pos))?),
            s => return Err(arith_error(format!("arithmetic on symbolic constant `{s}`"), pos)),
        },
    })
}

struct Run<'a> {
    plan: &'a RulePlan,
    stores: &'a HashMap<String, Store>,
    universe: &'a [Value],
    empty: Store,
}

impl Run<'_> {
    fn store(&self, pred: &str) -> &Store {
        self.stores.get(pred).unwrap_or(&self.empty)
    }

    /// Backtracking over the plan; `emit` is called for every complete
    /// binding and returns false to stop the search.
    fn go(
        &self,
        i: usize,
        b: &mut Vec<Option<Value>>,
        emit: &mut Emit<'_>,
    ) -> Result<bool, OracleError> {
        let pos = self.plan.pos;
        let Some(step) = self.plan.steps.get(i) else {
            return emit(b);
        };
        match step {
            Step::Match(pred, pats) => {
                for t in &self.store(pred).tuples {
                    let mut set = Vec::new();
                    let mut ok = true;
                    for (p, v) in pats.iter().zip(t) {
                        ok = match p {
                            Pat::Any => true,
                            Pat::Val(x) => x == v,
                            Pat::Expr(e) => eval_expr(e, b, pos)? == *v,
                            Pat::Bind(s) => match &b[*s] {
                                Some(x) => x == v,
                                None => {
                                    b[*s] = Some(v.clone());
                                    set.push(*s);
                                    true
                                }
                            },
                        };
                        if !ok {
                            break;
                        }
                    }
                    let cont = !ok || self.go(i + 1, b, emit)?;
                    for s in set {
                        b[s] = None;
                    }
                    if !cont {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Step::Enum(s) => {
                for v in self.universe {
                    b[*s] = Some(v.clone());
                    let cont = self.go(i + 1, b, emit)?;
                    b[*s] = None;
                    if !cont {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Step::Check(op, l, r) => {
                if op.holds(&eval_expr(l, b, pos)?, &eval_expr(r, b, pos)?) {
                    self.go(i + 1, b, emit)
                } else {
                    Ok(true)
                }
            }
            Step::Absent(pred, args) => {
                let vals: Vec<Option<Value>> =
                    args.iter().map(|a| a.as_ref().map(|e| eval_expr(e, b, pos)).transpose()).collect::<Result<_, _>>()?;
                let store = self.store(pred);
                let present = if vals.iter().all(Option::is_some) {
                    let t: Tuple = vals.into_iter().flatten().collect();
                    store.set.contains(&t)
                } else {
                    store.tuples.iter().any(|t| vals.iter().zip(t).all(|(a, v)| a.as_ref().is_none_or(|a| a == v)))
                };
                if present {
                    Ok(true)
                } else {
                    self.go(i + 1, b, emit)
                }
            }
            Step::Agg(g) => {
                let Some(value) = self.aggregate(g, b)? else {
                    return Ok(true);
                };
                if value < g.lo || value > g.hi {
                    return Ok(true);
                }
                let value = Value::Int(value);
                match &b[g.result] {
                    Some(v) if *v != value => Ok(true),
                    Some(_) => self.go(i + 1, b, emit),
                    None => {
                        b[g.result] = Some(value);
                        let cont = self.go(i + 1, b, emit)?;
                        b[g.result] = None;
                        Ok(cont)
                    }
                }
            }
        }
    }

    /// Aggregate value over the distinct starred tuples of the group; `None`
    /// for MIN/MAX over an empty group.
    fn aggregate(&self, g: &AggPlan, b: &[Option<Value>]) -> Result<Option<i64>, OracleError> {
        let pos = self.plan.pos;
        let mut set: BTreeSet<Vec<Value>> = BTreeSet::new();
        let mut locals: Vec<Option<&Value>> = vec![None; g.locals];
        'tuples: for t in &self.store(&g.pred).tuples {
            locals.iter_mut().for_each(|l| *l = None);
            let mut stars = Vec::new();
            for (p, v) in g.pats.iter().zip(t) {
                match p {
                    AggPat::Star => stars.push(v.clone()),
                    AggPat::Any => {}
                    AggPat::Eq(e) => {
                        if eval_expr(e, b, pos)? != *v {
                            continue 'tuples;
                        }
                    }
                    AggPat::Local(k) => match locals[*k] {
                        Some(x) if x != v => continue 'tuples,
                        Some(_) => {}
                        None => locals[*k] = Some(v),
                    },
                }
            }
            set.insert(stars);
        }
        if g.func == AggFunc::Count {
            return Ok(Some(set.len() as i64));
        }
        let mut nums = Vec::with_capacity(set.len());
        for s in &set {
            match s.first() {
                Some(Value::Int(i)) => nums.push(*i),
                Some(v) => return Err(arith_error(format!("{} over symbolic constant `{v}`", g.func.keyword()), pos)),
                None => {}
            }
        }
        Ok(match g.func {
            AggFunc::Sum => Some(
                nums.iter()
                    .try_fold(0i64, |acc, &x| acc.checked_add(x))
                    .ok_or_else(|| arith_error("arithmetic overflow in SUM".into(), pos))?,
            ),
            AggFunc::Min => nums.iter().min().copied(),
            AggFunc::Max => nums.iter().max().copied(),
            AggFunc::Count => unreachable!(),
        })
    }
}

/// Precompiled evaluator for one analyzed spec.
pub(crate) struct Evaluator<'a> {
    analysis: &'a Analysis,
    /// Rule plans grouped by stratum; constraints come last.
    strata: Vec<Vec<RulePlan>>,
    constraints: Vec<RulePlan>,
    universe: Vec<Value>,
}

impl<'a> Evaluator<'a> {
    pub(crate) fn new(analysis: &'a Analysis) -> Self {
        let constants = &analysis.table.constants;
        let mut strata: Vec<Vec<RulePlan>> = vec![Vec::new(); analysis.strata.strata.len()];
        let mut constraints = Vec::new();
        for r in &analysis.resolved.rules {
            let plan = plan_rule(r, constants);
            match &r.head {
                Head::Fail => constraints.push(plan),
                Head::Atom(a) => {
                    let s = analysis.strata.stratum_of(&a.pred).expect("head predicate is stratified");
                    strata[s].push(plan);
                }
            }
        }
        Evaluator { analysis, strata, constraints, universe: analysis.universe.iter().cloned().collect() }
    }

    fn derive(&self, plan: &RulePlan, stores: &HashMap<String, Store>) -> Result<Vec<Tuple>, OracleError> {
        let run = Run { plan, stores, universe: &self.universe, empty: Store::default() };
        let mut out = Vec::new();
        let mut b = vec![None; plan.slots];
        let (_, args) = plan.head.as_ref().expect("derivation rule has a head");
        run.go(0, &mut b, &mut |b| {
            out.push(args.iter().map(|e| eval_expr(e, b, plan.pos)).collect::<Result<Tuple, _>>()?);
            Ok(true)
        })?;
        Ok(out)
    }

    fn violated(&self, plan: &RulePlan, stores: &HashMap<String, Store>) -> Result<bool, OracleError> {
        let run = Run { plan, stores, universe: &self.universe, empty: Store::default() };
        let mut b = vec![None; plan.slots];
        let mut hit = false;
        run.go(0, &mut b, &mut |_| {
            hit = true;
            Ok(false)
        })?;
        Ok(hit)
    }

    /// Evaluates the program on `guess`. With `stop_on_fail` the returned
    /// interpretation is incomplete as soon as `fail` is derived.
    pub(crate) fn eval(&self, guess: &Guess, stop_on_fail: bool) -> Result<Interpretation, OracleError> {
        let mut stores: HashMap<String, Store> = HashMap::new();
        for rel in self.analysis.table.relations.values() {
            let s = stores.entry(rel.name.clone()).or_default();
            rel.iter().for_each(|t| {
                s.insert(t.clone());
            });
        }
        for rel in &guess.relations {
            let s = stores.entry(rel.name.clone()).or_default();
            rel.iter().for_each(|t| {
                s.insert(t.clone());
            });
        }
        for plans in &self.strata {
            loop {
                let mut changed = false;
                for plan in plans {
                    let new = self.derive(plan, &stores)?;
                    let pred = &plan.head.as_ref().expect("derivation rule").0;
                    let s = stores.entry(pred.clone()).or_default();
                    for t in new {
                        changed |= s.insert(t);
                    }
                }
                if !changed {
                    break;
                }
            }
        }
        let mut fail = false;
        for plan in &self.constraints {
            if self.violated(plan, &stores)? {
                fail = true;
                if stop_on_fail {
                    break;
                }
            }
        }
        let mut relations: BTreeMap<String, BTreeSet<Tuple>> = BTreeMap::new();
        for name in self.analysis.table.derived.keys() {
            relations.insert(name.clone(), BTreeSet::new());
        }
        for (name, s) in stores {
            relations.insert(name, s.tuples.into_iter().collect());
        }
        Ok(Interpretation { relations, fail })
    }
}
