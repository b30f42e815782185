//! Domain predicates and guess encodings for metafacts.

use crate::analyzer::{eval_domain_expr, SymbolTable};
use crate::frontend::{CmpOp, DomainExpr};

use super::*;

/// The predicate that enumerates a metafact's domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomainRef {
    pub pred: String,
    pub arity: usize,
}

/// Returns the domain predicate for a metafact, creating fresh predicates
/// and their facts where the domain is not a database relation. Every
/// non-leaf node of the expression gets its own predicate, children first.
pub(crate) fn domain_predicate(
    source: &DomainExpr,
    resolved: &DomainExpr,
    table: &SymbolTable,
    opts: &EmitOptions,
    names: &mut PredNames,
) -> (DomainRef, Vec<AspFact>) {
    let mut facts = Vec::new();
    let dom = match (source, resolved) {
        (DomainExpr::Pred(p), _) => DomainRef { pred: p.clone(), arity: table.relations[p].arity },
        (DomainExpr::Range(lo, hi), _) if opts.dialect == Dialect::Gringo => {
            let pred = names.domain();
            let range = AspTerm::range(int_expr_term(lo, &table.constants), int_expr_term(hi, &table.constants));
            facts.push(AspFact { atom: AspAtom::new(pred.clone(), vec![range]), kind: FactKind::Domain });
            DomainRef { pred, arity: 1 }
        }
        _ => expand(resolved, table, names, &mut facts).expect("top-level domain node gets a predicate"),
    };
    (dom, facts)
}

fn expand(e: &DomainExpr, table: &SymbolTable, names: &mut PredNames, facts: &mut Vec<AspFact>) -> Option<DomainRef> {
    if let DomainExpr::Binary(_, l, r) = e {
        expand_inner(l, table, names, facts);
        expand_inner(r, table, names, facts);
    }
    let rel = eval_domain_expr(e, table).expect("domain was evaluated during analysis");
    let pred = names.domain();
    for t in rel.iter() {
        facts.push(AspFact {
            atom: AspAtom::new(pred.clone(), t.iter().map(value_term).collect()),
            kind: FactKind::Domain,
        });
    }
    Some(DomainRef { pred, arity: rel.arity })
}

fn expand_inner(e: &DomainExpr, table: &SymbolTable, names: &mut PredNames, facts: &mut Vec<AspFact>) {
    if !e.is_leaf() {
        expand(e, table, names, facts);
    }
}

fn vars(prefix: &str, n: usize) -> Vec<AspTerm> {
    if n == 1 {
        vec![AspTerm::var(prefix)]
    } else {
        (1..=n).map(|i| AspTerm::var(format!("{prefix}{i}"))).collect()
    }
}

fn with(mut args: Vec<AspTerm>, extra: AspTerm) -> Vec<AspTerm> {
    args.push(extra);
    args
}

/// `p(X..) v -p(X..) :- d(X..).` or `{p(X..) : d(X..)}.`
pub fn translate_subset(target: &str, dom: &DomainRef, opts: &EmitOptions, index: usize) -> Vec<AspRule> {
    let xs = vars("X", dom.arity);
    let atom = AspAtom::new(target, xs.clone());
    let cond = AspAtom::new(dom.pred.clone(), xs);
    let rule = match opts.guess {
        GuessEncoding::Disjunctive => AspRule {
            head: AspHead::Disjunction(vec![atom.clone(), atom.negated()]),
            body: vec![AspLiteral::Pos(cond)],
            origin: RuleOrigin::Guess(index),
        },
        GuessEncoding::Choice => AspRule {
            head: AspHead::Choice { atom, condition: Some(cond), lower: None, upper: None },
            body: vec![],
            origin: RuleOrigin::Guess(index),
        },
    };
    vec![rule]
}

/// One value out of `lo..hi` for every domain tuple.
fn function_guess(target: &str, dom: &DomainRef, lo: i64, hi: i64, opts: &EmitOptions, index: usize) -> AspRule {
    let xs = vars("X", dom.arity);
    let body = vec![AspLiteral::Pos(AspAtom::new(dom.pred.clone(), xs.clone()))];
    let head = match opts.guess {
        GuessEncoding::Disjunctive => {
            AspHead::Disjunction((lo..=hi).map(|v| AspAtom::new(target, with(xs.clone(), AspTerm::Int(v)))).collect())
        }
        GuessEncoding::Choice => AspHead::Choice {
            atom: AspAtom::new(target, with(xs, AspTerm::range(AspTerm::Int(lo), AspTerm::Int(hi)))),
            condition: None,
            lower: Some(1),
            upper: Some(1),
        },
    };
    AspRule { head, body, origin: RuleOrigin::Guess(index) }
}

/// Guess of a bijection onto `1..c` plus the uniqueness check.
pub fn translate_permutation(
    target: &str,
    dom: &DomainRef,
    c: usize,
    opts: &EmitOptions,
    index: usize,
) -> Vec<AspRule> {
    if c == 0 {
        return Vec::new();
    }
    let mut out = vec![function_guess(target, dom, 1, c as i64, opts, index)];
    let xs = vars("X", dom.arity);
    let a = AspTerm::var("A");
    match opts.perm_check {
        PermCheck::Constraints => {
            let ys = vars("Y", dom.arity);
            for (x, y) in xs.iter().zip(&ys) {
                out.push(AspRule {
                    head: AspHead::Empty,
                    body: vec![
                        AspLiteral::Pos(AspAtom::new(target, with(xs.clone(), a.clone()))),
                        AspLiteral::Pos(AspAtom::new(target, with(ys.clone(), a.clone()))),
                        AspLiteral::Cmp(CmpOp::Ne, x.clone(), y.clone()),
                    ],
                    origin: RuleOrigin::Uniqueness(index),
                });
            }
        }
        PermCheck::Aggregate => {
            let elements = xs
                .iter()
                .map(|t| match t {
                    AspTerm::Var(v) => v.clone(),
                    _ => unreachable!(),
                })
                .collect();
            out.push(AspRule {
                head: AspHead::Empty,
                body: vec![
                    AspLiteral::Agg(AspAggregate {
                        func: crate::frontend::AggFunc::Count,
                        elements,
                        atom: AspAtom::new(target, with(xs, a.clone())),
                        guards: vec![(CmpOp::Gt, AspTerm::Int(1))],
                    }),
                    AspLiteral::Pos(AspAtom::new(target, with(vec![AspTerm::Anon; dom.arity], a))),
                ],
                origin: RuleOrigin::Uniqueness(index),
            });
        }
    }
    out
}

/// A total function into `0..k-1`.
pub fn translate_partition(target: &str, dom: &DomainRef, k: i64, opts: &EmitOptions, index: usize) -> Vec<AspRule> {
    vec![function_guess(target, dom, 0, k - 1, opts, index)]
}

/// A total function into `lo..hi`.
pub fn translate_intfunc(
    target: &str,
    dom: &DomainRef,
    lo: i64,
    hi: i64,
    opts: &EmitOptions,
    index: usize,
) -> Vec<AspRule> {
    vec![function_guess(target, dom, lo, hi, opts, index)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge() -> DomainRef {
        DomainRef { pred: "edge".into(), arity: 2 }
    }

    fn render(rules: &[AspRule], opts: &EmitOptions) -> Vec<String> {
        rules.iter().map(|r| render_rule(r, opts)).collect()
    }

    const DLV: EmitOptions = EmitOptions {
        dialect: Dialect::Dlv,
        guess: GuessEncoding::Disjunctive,
        perm_check: PermCheck::Constraints,
        maxint_multiplier: 1,
    };

    const GRINGO_CHOICE: EmitOptions = EmitOptions {
        dialect: Dialect::Gringo,
        guess: GuessEncoding::Choice,
        perm_check: PermCheck::Aggregate,
        maxint_multiplier: 1,
    };

    #[test]
    fn subset_disjunctive() {
        assert_eq!(
            render(&translate_subset("subgraph", &edge(), &DLV, 0), &DLV),
            ["subgraph(X1,X2) v -subgraph(X1,X2) :- edge(X1,X2)."]
        );
    }

    #[test]
    fn subset_choice() {
        assert_eq!(
            render(&translate_subset("subgraph", &edge(), &GRINGO_CHOICE, 0), &GRINGO_CHOICE),
            ["{subgraph(X1,X2) : edge(X1,X2)}."]
        );
    }

    #[test]
    fn permutation_edge_order_has_nine_disjuncts() {
        let rules = translate_permutation("edgeorder", &edge(), 9, &DLV, 0);
        let AspHead::Disjunction(atoms) = &rules[0].head else { panic!() };
        assert_eq!(atoms.len(), 9);
        assert!(atoms.iter().all(|a| a.args.len() == 3));
        assert_eq!(rules.len(), 3);
    }

    #[test]
    fn permutation_count_aggregate() {
        let rules = translate_permutation("p", &edge(), 3, &GRINGO_CHOICE, 0);
        assert_eq!(
            render(&rules, &GRINGO_CHOICE),
            ["1 {p(X1,X2,1..3)} 1 :- edge(X1,X2).", ":- 2 #count{p(X1,X2,A)}, p(_,_,A)."]
        );
        let dlv = EmitOptions { perm_check: PermCheck::Aggregate, ..DLV };
        let rules = translate_permutation("p", &edge(), 3, &dlv, 0);
        assert_eq!(render(&rules[1..], &dlv), [":- #count{X1,X2 : p(X1,X2,A)} > 1, p(_,_,A)."]);
    }

    #[test]
    fn partition_and_intfunc_agree() {
        let part = translate_partition("partition", &edge(), 2, &DLV, 0);
        let func = translate_intfunc("partition", &edge(), 0, 1, &DLV, 0);
        assert_eq!(render(&part, &DLV), render(&func, &DLV));
        assert_eq!(render(&part, &DLV), ["partition(X1,X2,0) v partition(X1,X2,1) :- edge(X1,X2)."]);
        assert_eq!(
            render(&translate_partition("partition", &edge(), 2, &GRINGO_CHOICE, 0), &GRINGO_CHOICE),
            ["1 {partition(X1,X2,0..1)} 1 :- edge(X1,X2)."]
        );
    }

    #[test]
    fn single_partition_forces_zero() {
        assert_eq!(
            render(&translate_partition("p", &edge(), 1, &DLV, 0), &DLV),
            ["p(X1,X2,0) :- edge(X1,X2)."]
        );
    }

    #[test]
    fn empty_permutation_emits_nothing() {
        assert!(translate_permutation("p", &edge(), 0, &DLV, 0).is_empty());
    }
}
