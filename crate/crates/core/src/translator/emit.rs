//! Text rendering of the IR in the two target dialects.

use crate::frontend::{AggFunc, ArithOp, CmpOp};

use super::*;

fn cmp_symbol(op: CmpOp) -> &'static str {
    match op {
        CmpOp::Eq => "=",
        other => other.symbol(),
    }
}

fn precedence(t: &AspTerm) -> u8 {
    match t {
        AspTerm::Arith(op, ..) if *op != ArithOp::Pow => op.precedence(),
        _ => u8::MAX,
    }
}

fn operand(t: &AspTerm, parent: ArithOp, right: bool, opts: &EmitOptions) -> String {
    let s = render_term(t, opts);
    let p = precedence(t);
    let wrap = p < parent.precedence()
        || (right && p == parent.precedence())
        || (right && matches!(t, AspTerm::Int(i) if *i < 0))
        || (right && matches!(t, AspTerm::Const { value, .. } if *value < 0 && opts.dialect == Dialect::Dlv));
    if wrap {
        format!("({s})")
    } else {
        s
    }
}

pub fn render_term(t: &AspTerm, opts: &EmitOptions) -> String {
    match t {
        AspTerm::Var(v) => v.clone(),
        AspTerm::Int(i) => i.to_string(),
        AspTerm::Sym(s) => s.clone(),
        AspTerm::Const { name, value } => match opts.dialect {
            Dialect::Gringo => name.clone(),
            Dialect::Dlv => value.to_string(),
        },
        AspTerm::Anon => "_".into(),
        AspTerm::Arith(ArithOp::Pow, l, r) if opts.dialect == Dialect::Gringo => {
            format!("#pow({},{})", render_term(l, opts), render_term(r, opts))
        }
        AspTerm::Arith(op, l, r) => {
            let pl = precedence(l);
            let ls = if pl < op.precedence() { format!("({})", render_term(l, opts)) } else { render_term(l, opts) };
            format!("{ls}{}{}", op.symbol(), operand(r, *op, true, opts))
        }
        AspTerm::Abs(inner) => match opts.dialect {
            Dialect::Gringo => format!("#abs({})", render_term(inner, opts)),
            Dialect::Dlv => format!("abs({})", render_term(inner, opts)),
        },
        AspTerm::Range(lo, hi) => format!("{}..{}", render_term(lo, opts), render_term(hi, opts)),
    }
}

fn render_atom(a: &AspAtom, opts: &EmitOptions) -> String {
    let neg = if a.strong_neg { "-" } else { "" };
    if a.args.is_empty() {
        format!("{neg}{}", a.pred)
    } else {
        let args: Vec<_> = a.args.iter().map(|t| render_term(t, opts)).collect();
        format!("{neg}{}({})", a.pred, args.join(","))
    }
}

fn func_name(f: AggFunc) -> &'static str {
    match f {
        AggFunc::Count => "#count",
        AggFunc::Sum => "#sum",
        AggFunc::Min => "#min",
        AggFunc::Max => "#max",
    }
}

/// Lower and upper bound equivalent to a guard, for the gringo
/// `L #agg[...] U` form.
fn guard_bounds(op: CmpOp, t: &AspTerm) -> (Option<AspTerm>, Option<AspTerm>) {
    let shift = |d: i64| match t {
        AspTerm::Int(i) => AspTerm::Int(i + d),
        other => AspTerm::arith(if d > 0 { ArithOp::Add } else { ArithOp::Sub }, other.clone(), AspTerm::Int(1)),
    };
    match op {
        CmpOp::Eq => (Some(t.clone()), Some(t.clone())),
        CmpOp::Ge => (Some(t.clone()), None),
        CmpOp::Gt => (Some(shift(1)), None),
        CmpOp::Le => (None, Some(t.clone())),
        CmpOp::Lt => (None, Some(shift(-1))),
        CmpOp::Ne => unreachable!("the translator never emits != aggregate guards"),
    }
}

fn render_aggregate(g: &AspAggregate, opts: &EmitOptions) -> String {
    let atom = render_atom(&g.atom, opts);
    match opts.dialect {
        Dialect::Dlv => {
            let set = format!("{}{{{} : {atom}}}", func_name(g.func), g.elements.join(","));
            g.guards
                .iter()
                .map(|(op, t)| format!("{set} {} {}", cmp_symbol(*op), render_term(t, opts)))
                .collect::<Vec<_>>()
                .join(", ")
        }
        Dialect::Gringo => {
            let set = match g.func {
                AggFunc::Count => format!("#count{{{atom}}}"),
                f => format!("{}[{atom} = {}]", func_name(f), g.elements[0]),
            };
            let mut parts = Vec::new();
            for (op, t) in &g.guards {
                let (lo, hi) = guard_bounds(*op, t);
                let mut s = String::new();
                if let Some(lo) = lo {
                    s.push_str(&render_term(&lo, opts));
                    s.push(' ');
                }
                s.push_str(&set);
                if let Some(hi) = hi {
                    s.push(' ');
                    s.push_str(&render_term(&hi, opts));
                }
                parts.push(s);
            }
            parts.join(", ")
        }
    }
}

pub fn render_literal(l: &AspLiteral, opts: &EmitOptions) -> String {
    match l {
        AspLiteral::Pos(a) => render_atom(a, opts),
        AspLiteral::Neg(a) => format!("not {}", render_atom(a, opts)),
        AspLiteral::Cmp(op, x, y) => {
            format!("{} {} {}", render_term(x, opts), cmp_symbol(*op), render_term(y, opts))
        }
        AspLiteral::Assign(v, e) => format!("{v} = {}", render_term(e, opts)),
        AspLiteral::Agg(g) => render_aggregate(g, opts),
    }
}

fn render_head(h: &AspHead, opts: &EmitOptions) -> String {
    match h {
        AspHead::Empty => String::new(),
        AspHead::Disjunction(atoms) => {
            let sep = match opts.dialect {
                Dialect::Dlv => " v ",
                Dialect::Gringo => " | ",
            };
            atoms.iter().map(|a| render_atom(a, opts)).collect::<Vec<_>>().join(sep)
        }
        AspHead::Choice { atom, condition, lower, upper } => {
            let mut s = String::new();
            if let Some(lo) = lower {
                s.push_str(&format!("{lo} "));
            }
            s.push('{');
            s.push_str(&render_atom(atom, opts));
            if let Some(c) = condition {
                s.push_str(" : ");
                s.push_str(&render_atom(c, opts));
            }
            s.push('}');
            if let Some(hi) = upper {
                s.push_str(&format!(" {hi}"));
            }
            s
        }
    }
}

pub fn render_rule(r: &AspRule, opts: &EmitOptions) -> String {
    let head = render_head(&r.head, opts);
    let body: Vec<_> = r.body.iter().map(|l| render_literal(l, opts)).collect();
    match (head.is_empty(), body.is_empty()) {
        (_, true) => format!("{head}."),
        (true, false) => format!(":- {}.", body.join(", ")),
        (false, false) => format!("{head} :- {}.", body.join(", ")),
    }
}

fn dlv_unsupported(t: &AspTerm) -> Option<&'static str> {
    match t {
        AspTerm::Abs(_) => Some("abs"),
        AspTerm::Arith(ArithOp::Pow, ..) => Some("^"),
        AspTerm::Arith(_, l, r) | AspTerm::Range(l, r) => dlv_unsupported(l).or_else(|| dlv_unsupported(r)),
        _ => None,
    }
}

fn check_dlv(program: &AspProgram) -> Result<(), TranslateError> {
    let pos = Pos::default();
    for f in &program.facts {
        check_dlv_ints(&f.atom.args, pos)?;
    }
    for r in &program.rules {
        if matches!(r.head, AspHead::Choice { .. }) {
            return Err(TranslateError::new(TranslateErrorKind::ChoiceUnsupported, pos));
        }
        let terms = rule_terms(r);
        if let Some(op) = terms.iter().find_map(|t| dlv_unsupported(t)) {
            return Err(TranslateError::new(TranslateErrorKind::UnsupportedOperator(op), pos));
        }
        check_dlv_ints(terms, pos)?;
    }
    Ok(())
}

/// Renders a program, one statement per line, sections separated by a
/// blank line.
pub fn emit_dialect(program: &AspProgram, opts: &EmitOptions) -> Result<String, TranslateError> {
    if opts.dialect == Dialect::Dlv {
        check_dlv(program)?;
    }
    let mut sections: Vec<Vec<String>> = Vec::new();
    let directives: Vec<_> = program
        .directives
        .iter()
        .filter_map(|d| match (d, opts.dialect) {
            (Directive::Const { name, value }, Dialect::Gringo) => Some(format!("#const {name}={value}.")),
            (Directive::MaxInt(k), Dialect::Dlv) => Some(format!("#maxint={k}.")),
            _ => None,
        })
        .collect();
    sections.push(directives);
    let mut kind = None;
    for f in &program.facts {
        if kind != Some(f.kind) {
            sections.push(Vec::new());
            kind = Some(f.kind);
        }
        sections.last_mut().unwrap().push(format!("{}.", render_atom(&f.atom, opts)));
    }
    sections.push(program.rules.iter().map(|r| render_rule(r, opts)).collect());
    let mut out = String::new();
    for s in sections.into_iter().filter(|s| !s.is_empty()) {
        if !out.is_empty() {
            out.push('\n');
        }
        for line in s {
            out.push_str(&line);
            out.push('\n');
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> EmitOptions {
        EmitOptions::default()
    }

    #[test]
    fn arithmetic_parentheses() {
        let x = AspTerm::var("X");
        let t = AspTerm::arith(ArithOp::Sub, x.clone(), AspTerm::arith(ArithOp::Sub, x.clone(), AspTerm::Int(1)));
        assert_eq!(render_term(&t, &g()), "X-(X-1)");
        let t = AspTerm::arith(ArithOp::Mul, AspTerm::arith(ArithOp::Add, x.clone(), AspTerm::Int(1)), AspTerm::Int(2));
        assert_eq!(render_term(&t, &g()), "(X+1)*2");
        let t = AspTerm::arith(ArithOp::Add, x.clone(), AspTerm::Int(-3));
        assert_eq!(render_term(&t, &g()), "X+(-3)");
    }

    #[test]
    fn constants_per_dialect() {
        let c = AspTerm::Const { name: "n".into(), value: 6 };
        assert_eq!(render_term(&c, &g()), "n");
        assert_eq!(render_term(&c, &EmitOptions { dialect: Dialect::Dlv, ..g() }), "6");
    }

    #[test]
    fn guard_bounds_for_strict_comparisons() {
        let agg = |op| AspAggregate {
            func: AggFunc::Count,
            elements: vec!["X".into()],
            atom: AspAtom::new("p", vec![AspTerm::var("X")]),
            guards: vec![(op, AspTerm::Int(3))],
        };
        assert_eq!(render_aggregate(&agg(CmpOp::Gt), &g()), "4 #count{p(X)}");
        assert_eq!(render_aggregate(&agg(CmpOp::Lt), &g()), "#count{p(X)} 2");
        assert_eq!(render_aggregate(&agg(CmpOp::Le), &g()), "#count{p(X)} 3");
    }

    #[test]
    fn dlv_rejects_choice_rules() {
        let program = AspProgram {
            rules: vec![AspRule {
                head: AspHead::Choice { atom: AspAtom::new("p", vec![]), condition: None, lower: None, upper: None },
                body: vec![],
                origin: RuleOrigin::Guess(0),
            }],
            ..AspProgram::default()
        };
        let dlv = EmitOptions { dialect: Dialect::Dlv, ..g() };
        assert_eq!(emit_dialect(&program, &dlv).unwrap_err().kind, TranslateErrorKind::ChoiceUnsupported);
        assert_eq!(emit_dialect(&program, &g()).unwrap(), "{p}.\n");
    }

    #[test]
    fn sections_are_separated() {
        let src = "DATABASE n = 3; e = {(1,2)}; SPECIFICATION Subset(e, s). fail <-- s(X,Y), X > n.";
        let out = compile(src, &g()).unwrap();
        assert_eq!(out, "#const n=3.\n\ne(1,2).\n\n{s(X1,X2) : e(X1,X2)}.\n:- s(X,Y), X > n.\n".replace("{s(X1,X2) : e(X1,X2)}.", "s(X1,X2) | -s(X1,X2) :- e(X1,X2)."));
    }
}
