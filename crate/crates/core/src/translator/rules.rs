//! Translation of Datalog rules: head/body mapping, arithmetic flattening,
//! aggregate rewriting and safety repair.

use std::collections::BTreeSet;

use indexmap::IndexMap;

use crate::analyzer::{eval_int_expr, SafetyObligation, SafetyReason};
use crate::frontend::*;

use super::*;

/// Fresh variable names `V1`, `V2`, ... avoiding the rule's own variables.
#[derive(Clone, Debug)]
pub struct VarGen {
    used: BTreeSet<String>,
    next: usize,
}

impl VarGen {
    pub fn new(used: impl IntoIterator<Item = String>) -> Self {
        VarGen { used: used.into_iter().collect(), next: 0 }
    }

    pub fn fresh(&mut self) -> String {
        loop {
            self.next += 1;
            let v = format!("V{}", self.next);
            if self.used.insert(v.clone()) {
                return v;
            }
        }
    }
}

/// Decomposes `t` into single-operator definitions, innermost first and
/// left to right. Returns the definitions and the term holding the value
/// of `t` (a fresh variable, or `t` itself when it is not arithmetic).
pub fn flatten_arithmetic(t: &AspTerm, vars: &mut VarGen) -> (Vec<(String, AspTerm)>, AspTerm) {
    let mut steps = Vec::new();
    let result = flatten_full(t, vars, &mut steps);
    (steps, result)
}

fn flatten_full(t: &AspTerm, vars: &mut VarGen, steps: &mut Vec<(String, AspTerm)>) -> AspTerm {
    if !t.is_arith() {
        return t.clone();
    }
    let top = flatten_top(t, vars, steps);
    let v = vars.fresh();
    steps.push((v.clone(), top));
    AspTerm::Var(v)
}

/// Flattens the operands of `t` so that `t` itself is a single operation.
fn flatten_top(t: &AspTerm, vars: &mut VarGen, steps: &mut Vec<(String, AspTerm)>) -> AspTerm {
    match t {
        AspTerm::Arith(op, l, r) => {
            let l = flatten_full(l, vars, steps);
            let r = flatten_full(r, vars, steps);
            AspTerm::arith(*op, l, r)
        }
        AspTerm::Abs(inner) => AspTerm::Abs(Box::new(flatten_full(inner, vars, steps))),
        other => other.clone(),
    }
}

struct RuleCx<'a> {
    constants: &'a IndexMap<String, i64>,
    dlv: bool,
    vars: VarGen,
    pos: Pos,
    /// Literals for arithmetic moved out of atoms; appended to the body.
    tail: Vec<AspLiteral>,
}

impl RuleCx<'_> {
    fn term(&self, t: &Term) -> Result<AspTerm, TranslateError> {
        Ok(match t {
            Term::Var(v) => AspTerm::Var(v.clone()),
            Term::Anon => AspTerm::Anon,
            Term::Int(i) => AspTerm::Int(*i),
            Term::Sym(s) => match self.constants.get(s) {
                Some(&value) => AspTerm::Const { name: s.clone(), value },
                None => AspTerm::Sym(s.clone()),
            },
            Term::Binary(op, l, r) => {
                if self.dlv && *op == ArithOp::Pow {
                    return Err(TranslateError::new(TranslateErrorKind::UnsupportedOperator("^"), self.pos));
                }
                AspTerm::arith(*op, self.term(l)?, self.term(r)?)
            }
            Term::Abs(inner) => {
                if self.dlv {
                    return Err(TranslateError::new(TranslateErrorKind::UnsupportedOperator("abs"), self.pos));
                }
                AspTerm::Abs(Box::new(self.term(inner)?))
            }
        })
    }

    fn steps_into(steps: Vec<(String, AspTerm)>, out: &mut Vec<AspLiteral>) {
        out.extend(steps.into_iter().map(|(v, e)| AspLiteral::Assign(v, e)));
    }

    /// Argument of an atom. Arithmetic is replaced by a fresh variable
    /// that is tied to the expression at the end of the body: by a
    /// comparison when the atom itself binds the variable, by a definition
    /// otherwise.
    fn atom_arg(&mut self, t: &Term, binds: bool) -> Result<AspTerm, TranslateError> {
        let t = self.term(t)?;
        if !t.is_arith() {
            return Ok(t);
        }
        let v = self.vars.fresh();
        let expr = if self.dlv {
            let mut steps = Vec::new();
            let top = flatten_top(&t, &mut self.vars, &mut steps);
            Self::steps_into(steps, &mut self.tail);
            top
        } else {
            t
        };
        self.tail.push(if binds {
            AspLiteral::Cmp(CmpOp::Eq, AspTerm::Var(v.clone()), expr)
        } else {
            AspLiteral::Assign(v.clone(), expr)
        });
        Ok(AspTerm::Var(v))
    }

    fn atom(&mut self, a: &Atom, binds: bool) -> Result<AspAtom, TranslateError> {
        let args = a.args.iter().map(|t| self.atom_arg(t, binds)).collect::<Result<_, _>>()?;
        Ok(AspAtom::new(a.pred.clone(), args))
    }

    fn builtin(&mut self, op: CmpOp, l: &Term, r: &Term, out: &mut Vec<AspLiteral>) -> Result<(), TranslateError> {
        let (l, r) = (self.term(l)?, self.term(r)?);
        if !self.dlv {
            out.push(AspLiteral::Cmp(op, l, r));
            return Ok(());
        }
        let mut steps = Vec::new();
        let lit = match (&l, &r) {
            (AspTerm::Var(_), e) if op == CmpOp::Eq && e.is_arith() => {
                AspLiteral::Cmp(op, l.clone(), flatten_top(e, &mut self.vars, &mut steps))
            }
            (e, AspTerm::Var(_)) if op == CmpOp::Eq && e.is_arith() => {
                AspLiteral::Cmp(op, r.clone(), flatten_top(e, &mut self.vars, &mut steps))
            }
            _ => {
                let l = flatten_full(&l, &mut self.vars, &mut steps);
                let r = flatten_full(&r, &mut self.vars, &mut steps);
                AspLiteral::Cmp(op, l, r)
            }
        };
        Self::steps_into(steps, out);
        out.push(lit);
        Ok(())
    }
}

/// Rewrites an aggregate into an ASP aggregate literal with a fresh
/// variable per `*`, followed by the guard-domain atom `agg_dom_k(Z)`
/// whose facts enumerate the aggregate's range.
pub fn rewrite_aggregate(
    g: &Aggregate,
    vars: &mut VarGen,
    constants: &IndexMap<String, i64>,
    opts: &EmitOptions,
    names: &mut PredNames,
) -> (Vec<AspLiteral>, Vec<AspFact>) {
    let mut elements = Vec::new();
    let args = g
        .args
        .iter()
        .map(|a| match a {
            AggArg::Star => {
                let v = vars.fresh();
                elements.push(v.clone());
                AspTerm::Var(v)
            }
            AggArg::Anon => AspTerm::Anon,
            AggArg::Var(v) => AspTerm::Var(v.clone()),
            AggArg::Int(i) => AspTerm::Int(*i),
            AggArg::Sym(s) => match constants.get(s) {
                Some(&value) => AspTerm::Const { name: s.clone(), value },
                None => AspTerm::Sym(s.clone()),
            },
        })
        .collect();
    let z = AspTerm::Var(g.result.clone());
    let dom = names.aggregate();
    let facts = match opts.dialect {
        Dialect::Gringo => vec![AspFact {
            atom: AspAtom::new(
                dom.clone(),
                vec![AspTerm::range(int_expr_term(&g.lo, constants), int_expr_term(&g.hi, constants))],
            ),
            kind: FactKind::AggregateDomain,
        }],
        Dialect::Dlv => {
            let lo = eval_int_expr(&g.lo, constants).expect("aggregate bounds were resolved during analysis");
            let hi = eval_int_expr(&g.hi, constants).expect("aggregate bounds were resolved during analysis");
            (lo..=hi)
                .map(|i| AspFact { atom: AspAtom::new(dom.clone(), vec![AspTerm::Int(i)]), kind: FactKind::AggregateDomain })
                .collect()
        }
    };
    let lits = vec![
        AspLiteral::Agg(AspAggregate {
            func: g.func,
            elements,
            atom: AspAtom::new(g.pred.clone(), args),
            guards: vec![(CmpOp::Eq, z.clone())],
        }),
        AspLiteral::Pos(AspAtom::new(dom, vec![z])),
    ];
    (lits, facts)
}

/// Translates one Datalog rule. Returns the rule, the auxiliary facts it
/// needs and the number of safety-repair atoms added.
pub fn translate_rule(
    rule: &Rule,
    index: usize,
    obligations: &[SafetyObligation],
    constants: &IndexMap<String, i64>,
    opts: &EmitOptions,
    names: &mut PredNames,
    universe: &str,
) -> Result<(AspRule, Vec<AspFact>, usize), TranslateError> {
    let used = rule.occurrences().into_iter().map(|(v, _)| v.to_string());
    let mut cx = RuleCx {
        constants,
        dlv: opts.dialect == Dialect::Dlv,
        vars: VarGen::new(used),
        pos: rule.pos,
        tail: Vec::new(),
    };
    let head = match &rule.head {
        Head::Fail => AspHead::Empty,
        Head::Atom(a) => AspHead::Disjunction(vec![cx.atom(a, false)?]),
    };
    let mut body = Vec::new();
    let mut facts = Vec::new();
    for e in &rule.body {
        match e {
            BodyElem::Pos(a) => {
                let atom = cx.atom(a, true)?;
                body.push(AspLiteral::Pos(atom));
            }
            BodyElem::Neg(a) => {
                let atom = cx.atom(a, false)?;
                body.push(AspLiteral::Neg(atom));
            }
            BodyElem::Builtin(op, l, r) => cx.builtin(*op, l, r, &mut body)?,
            BodyElem::Aggregate(g) => {
                let (lits, fs) = rewrite_aggregate(g, &mut cx.vars, constants, opts, names);
                body.extend(lits);
                facts.extend(fs);
            }
        }
    }
    body.append(&mut cx.tail);
    let mut repairs = 0;
    for o in obligations.iter().filter(|o| o.reason != SafetyReason::AggregateResult) {
        body.push(AspLiteral::Pos(AspAtom::new(universe, vec![AspTerm::Var(o.variable.clone())])));
        repairs += 1;
    }
    let out = AspRule { head, body, origin: RuleOrigin::Rule(index) };
    if let Some(v) = super::ir::rule_unsafe_vars(&out).into_iter().next() {
        return Err(TranslateError::new(TranslateErrorKind::UnsafeVariable(v), rule.pos));
    }
    Ok((out, facts, repairs))
}
