use crate::diagnostics::Pos;
use crate::frontend::*;
use crate::value::Value;

use super::{eval_int_expr, AnalysisError, AnalysisErrorKind, Relation, SymbolTable};

/// Materializes a domain expression. Leaves must name database relations
/// or integer ranges; a range with `lo > hi` is the empty unary relation.
/// Errors carry no position; callers attach the metafact's.
pub fn eval_domain_expr(expr: &DomainExpr, table: &SymbolTable) -> Result<Relation, AnalysisError> {
    let fail = |k| AnalysisError::new(k, Pos::default());
    match expr {
        DomainExpr::Pred(p) => table
            .relations
            .get(p)
            .cloned()
            .ok_or_else(|| fail(AnalysisErrorKind::UndefinedPredicate(p.clone()))),
        DomainExpr::Range(lo, hi) => {
            let lo = eval_int_expr(lo, &table.constants).map_err(fail)?;
            let hi = eval_int_expr(hi, &table.constants).map_err(fail)?;
            let name = format!("{{{lo}..{hi}}}");
            let tuples = if lo <= hi { (lo..=hi).map(|i| vec![Value::Int(i)]).collect() } else { Vec::new() };
            Ok(Relation::from_tuples(name, 1, tuples))
        }
        DomainExpr::Binary(op, l, r) => {
            let l = eval_domain_expr(l, table)?;
            let r = eval_domain_expr(r, table)?;
            let name = fmt_domain(expr);
            if *op == DomainOp::Product {
                let mut out = Relation::new(name, l.arity + r.arity);
                for a in l.iter() {
                    for b in r.iter() {
                        out.insert(a.iter().chain(b).cloned().collect());
                    }
                }
                return Ok(out);
            }
            if l.arity != r.arity {
                return Err(fail(AnalysisErrorKind::DomainArity { op: *op, left: l.arity, right: r.arity }));
            }
            let tuples: Vec<_> = match op {
                DomainOp::Union => l.iter().chain(r.iter()).cloned().collect(),
                DomainOp::Intersect => l.iter().filter(|t| r.contains(t)).cloned().collect(),
                DomainOp::Diff => l.iter().filter(|t| !r.contains(t)).cloned().collect(),
                DomainOp::Product => unreachable!(),
            };
            Ok(Relation::from_tuples(name, l.arity, tuples))
        }
    }
}
