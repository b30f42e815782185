use indexmap::IndexMap;

use crate::frontend::*;

use super::{AnalysisError, AnalysisErrorKind};

/// Evaluates a constant expression.
pub fn eval_int_expr(e: &IntExpr, constants: &IndexMap<String, i64>) -> Result<i64, AnalysisErrorKind> {
    match e {
        IntExpr::Lit(i) => Ok(*i),
        IntExpr::Const(c) => constants
            .get(c)
            .copied()
            .ok_or_else(|| AnalysisErrorKind::UndefinedConstant(c.clone())),
        IntExpr::Binary(op, l, r) => {
            let (l, r) = (eval_int_expr(l, constants)?, eval_int_expr(r, constants)?);
            op.apply(l, r)
                .ok_or_else(|| AnalysisErrorKind::Arithmetic(format!("{l}{}{r}", op.symbol())))
        }
    }
}

/// Replaces every reference to a database constant by its value: range
/// bounds, metafact parameters, aggregate ranges, and symbolic terms that
/// name a constant.
pub fn resolve_constants(spec: &Spec) -> Result<Spec, AnalysisError> {
    let constants: IndexMap<String, i64> = spec.constants.iter().map(|c| (c.name.clone(), c.value)).collect();
    let r = Resolver { constants: &constants };
    let mut out = spec.clone();
    for rel in &mut out.relations {
        match &mut rel.body {
            RelBody::Tuples(ts) => {
                for t in ts.iter_mut().flatten() {
                    r.term(t);
                }
            }
            RelBody::Range(lo, hi) => {
                r.int(lo, rel.pos)?;
                r.int(hi, rel.pos)?;
            }
        }
    }
    for m in &mut out.metafacts {
        r.domain(&mut m.domain, m.pos)?;
        match &mut m.param {
            MetafactParam::None => {}
            MetafactParam::Count(k) => r.int(k, m.pos)?,
            MetafactParam::Range(lo, hi) => {
                r.int(lo, m.pos)?;
                r.int(hi, m.pos)?;
            }
        }
    }
    for rule in &mut out.rules {
        if let Head::Atom(a) = &mut rule.head {
            r.atom(a)?;
        }
        for e in &mut rule.body {
            match e {
                BodyElem::Pos(a) | BodyElem::Neg(a) => r.atom(a)?,
                BodyElem::Builtin(_, lt, rt) => {
                    r.term(lt);
                    r.term(rt);
                }
                BodyElem::Aggregate(g) => {
                    if constants.contains_key(&g.pred) {
                        return Err(AnalysisError::new(AnalysisErrorKind::ConstantAsPredicate(g.pred.clone()), g.pos));
                    }
                    for a in &mut g.args {
                        if let AggArg::Sym(s) = a {
                            if let Some(&v) = constants.get(s.as_str()) {
                                *a = AggArg::Int(v);
                            }
                        }
                    }
                    r.int(&mut g.lo, g.pos)?;
                    r.int(&mut g.hi, g.pos)?;
                }
            }
        }
    }
    Ok(out)
}

struct Resolver<'a> {
    constants: &'a IndexMap<String, i64>,
}

impl Resolver<'_> {
    fn int(&self, e: &mut IntExpr, pos: crate::diagnostics::Pos) -> Result<(), AnalysisError> {
        let v = eval_int_expr(e, self.constants).map_err(|k| AnalysisError::new(k, pos))?;
        *e = IntExpr::Lit(v);
        Ok(())
    }

    fn term(&self, t: &mut Term) {
        match t {
            Term::Sym(s) => {
                if let Some(&v) = self.constants.get(s.as_str()) {
                    *t = Term::Int(v);
                }
            }
            Term::Binary(_, l, r) => {
                self.term(l);
                self.term(r);
            }
            Term::Abs(inner) => self.term(inner),
            Term::Var(_) | Term::Anon | Term::Int(_) => {}
        }
    }

    fn atom(&self, a: &mut Atom) -> Result<(), AnalysisError> {
        if self.constants.contains_key(&a.pred) {
            return Err(AnalysisError::new(AnalysisErrorKind::ConstantAsPredicate(a.pred.clone()), a.pos));
        }
        a.args.iter_mut().for_each(|t| self.term(t));
        Ok(())
    }

    fn domain(&self, d: &mut DomainExpr, pos: crate::diagnostics::Pos) -> Result<(), AnalysisError> {
        match d {
            DomainExpr::Pred(p) if self.constants.contains_key(p) => {
                Err(AnalysisError::new(AnalysisErrorKind::ConstantAsPredicate(p.clone()), pos))
            }
            DomainExpr::Pred(_) => Ok(()),
            DomainExpr::Range(lo, hi) => {
                self.int(lo, pos)?;
                self.int(hi, pos)
            }
            DomainExpr::Binary(_, l, r) => {
                self.domain(l, pos)?;
                self.domain(r, pos)
            }
        }
    }
}
