//! Canonical NP-SPEC rendering of the AST.

use std::fmt::Write;

use super::ast::*;

/// Renders `spec` as canonical NP-SPEC source. Constants come before
/// relations and metafacts before rules; parsing the result yields a spec
/// structurally equal to the input.
pub fn pretty_print(spec: &Spec) -> String {
    let mut out = String::from("DATABASE\n");
    for c in &spec.constants {
        let _ = writeln!(out, "    {} = {};", c.name, c.value);
    }
    for r in &spec.relations {
        let _ = writeln!(out, "    {} = {};", r.name, fmt_rel_body(&r.body));
    }
    out.push_str("SPECIFICATION\n");
    for m in &spec.metafacts {
        let _ = writeln!(out, "    {}.", fmt_metafact(m));
    }
    for r in &spec.rules {
        let _ = writeln!(out, "    {}.", fmt_rule(r));
    }
    out
}

fn fmt_rel_body(body: &RelBody) -> String {
    match body {
        RelBody::Range(lo, hi) => format!("{{{}..{}}}", fmt_int_expr(lo), fmt_int_expr(hi)),
        RelBody::Tuples(ts) => {
            let items: Vec<String> = ts
                .iter()
                .map(|t| match t.as_slice() {
                    [one] => fmt_term(one),
                    many => format!("({})", many.iter().map(fmt_term).collect::<Vec<_>>().join(",")),
                })
                .collect();
            format!("{{{}}}", items.join(","))
        }
    }
}

pub fn fmt_metafact(m: &Metafact) -> String {
    let mut s = format!("{}({}, {}", m.kind.keyword(), fmt_domain(&m.domain), m.target);
    match &m.param {
        MetafactParam::None => {}
        MetafactParam::Count(k) => {
            let _ = write!(s, ", {}", fmt_int_expr(k));
        }
        MetafactParam::Range(lo, hi) => {
            let _ = write!(s, ", {}..{}", fmt_int_expr(lo), fmt_int_expr(hi));
        }
    }
    s.push(')');
    s
}

pub fn fmt_rule(r: &Rule) -> String {
    let head = match &r.head {
        Head::Fail => "fail".to_string(),
        Head::Atom(a) => fmt_atom(a),
    };
    let body: Vec<String> = r.body.iter().map(fmt_body_elem).collect();
    format!("{head} <-- {}", body.join(", "))
}

pub fn fmt_atom(a: &Atom) -> String {
    if a.args.is_empty() {
        return a.pred.clone();
    }
    let args: Vec<String> = a.args.iter().map(fmt_term).collect();
    format!("{}({})", a.pred, args.join(","))
}

fn fmt_body_elem(e: &BodyElem) -> String {
    match e {
        BodyElem::Pos(a) => fmt_atom(a),
        BodyElem::Neg(a) => format!("NOT {}", fmt_atom(a)),
        BodyElem::Builtin(op, l, r) => format!("{} {} {}", fmt_term(l), op.symbol(), fmt_term(r)),
        BodyElem::Aggregate(g) => fmt_aggregate(g),
    }
}

pub fn fmt_aggregate(g: &Aggregate) -> String {
    let args: Vec<String> = g
        .args
        .iter()
        .map(|a| match a {
            AggArg::Star => "*".to_string(),
            AggArg::Anon => "_".to_string(),
            AggArg::Var(v) | AggArg::Sym(v) => v.clone(),
            AggArg::Int(i) => i.to_string(),
        })
        .collect();
    format!(
        "{}({}({}), {}: {}..{})",
        g.func.keyword(),
        g.pred,
        args.join(","),
        g.result,
        fmt_int_expr(&g.lo),
        fmt_int_expr(&g.hi)
    )
}

/// Whether an operand at the given side of `op` needs parentheses.
fn needs_parens(op: ArithOp, child: Option<ArithOp>, right: bool) -> bool {
    let Some(c) = child else { return false };
    match c.precedence().cmp(&op.precedence()) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        // `^` is right-associative, everything else left-associative
        std::cmp::Ordering::Equal => (op == ArithOp::Pow) != right,
    }
}

pub fn fmt_int_expr(e: &IntExpr) -> String {
    fn op_of(e: &IntExpr) -> Option<ArithOp> {
        match e {
            IntExpr::Binary(op, ..) => Some(*op),
            _ => None,
        }
    }
    match e {
        IntExpr::Lit(i) => i.to_string(),
        IntExpr::Const(c) => c.clone(),
        IntExpr::Binary(op, l, r) => {
            let mut ls = fmt_int_expr(l);
            let mut rs = fmt_int_expr(r);
            if needs_parens(*op, op_of(l), false) {
                ls = format!("({ls})");
            }
            if needs_parens(*op, op_of(r), true) {
                rs = format!("({rs})");
            }
            format!("{ls}{}{rs}", op.symbol())
        }
    }
}

pub fn fmt_term(t: &Term) -> String {
    fn op_of(t: &Term) -> Option<ArithOp> {
        match t {
            Term::Binary(op, ..) => Some(*op),
            _ => None,
        }
    }
    match t {
        Term::Var(v) | Term::Sym(v) => v.clone(),
        Term::Anon => "_".to_string(),
        Term::Int(i) => i.to_string(),
        Term::Abs(inner) => format!("abs({})", fmt_term(inner)),
        Term::Binary(op, l, r) => {
            let mut ls = fmt_term(l);
            let mut rs = fmt_term(r);
            if needs_parens(*op, op_of(l), false) {
                ls = format!("({ls})");
            }
            if needs_parens(*op, op_of(r), true) {
                rs = format!("({rs})");
            }
            format!("{ls}{}{rs}", op.symbol())
        }
    }
}

pub fn fmt_domain(d: &DomainExpr) -> String {
    match d {
        DomainExpr::Pred(p) => p.clone(),
        DomainExpr::Range(lo, hi) => format!("{{{}..{}}}", fmt_int_expr(lo), fmt_int_expr(hi)),
        DomainExpr::Binary(op, l, r) => {
            let wrap = |e: &DomainExpr, right: bool| match e {
                DomainExpr::Binary(o, ..) if *o != *op || right => format!("({})", fmt_domain(e)),
                _ => fmt_domain(e),
            };
            format!("{} {} {}", wrap(l, false), op.symbol(), wrap(r, true))
        }
    }
}
