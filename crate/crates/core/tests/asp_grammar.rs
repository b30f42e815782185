//! Emitted programs are checked against a small recognizer for the dlv and
//! gringo input languages, written independently of the emitter.

use std::collections::BTreeSet;

use npspec::corpus;
use npspec::translator::{emit_dialect, translate, Dialect, EmitOptions};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Var(String),
    Int(i64),
    Hash(String),
    Sym(&'static str),
}

fn lex(src: &str) -> Result<Vec<Tok>, String> {
    const SYMS: [&str; 22] =
        [":-", "..", "!=", "<=", ">=", "(", ")", "{", "}", "[", "]", ",", ".", ":", ";", "|", "=", "<", ">", "+", "-", "*"];
    let b = src.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    'outer: while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let s = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Int(src[s..i].parse().map_err(|e| format!("{e}"))?));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' || c == '#' {
            let s = i;
            i += 1;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            let w = &src[s..i];
            out.push(if let Some(h) = w.strip_prefix('#') {
                Tok::Hash(h.to_string())
            } else if w.starts_with(|c: char| c.is_ascii_uppercase() || c == '_') {
                Tok::Var(w.to_string())
            } else {
                Tok::Ident(w.to_string())
            });
            continue;
        }
        if c == '/' {
            out.push(Tok::Sym("/"));
            i += 1;
            continue;
        }
        for s in SYMS {
            if src[i..].starts_with(s) {
                out.push(Tok::Sym(s));
                i += s.len();
                continue 'outer;
            }
        }
        return Err(format!("unexpected character {c:?}"));
    }
    Ok(out)
}

struct P<'a> {
    t: &'a [Tok],
    i: usize,
    dialect: Dialect,
    heads: BTreeSet<String>,
    bodies: BTreeSet<String>,
}

type R<T = ()> = Result<T, String>;

impl P<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.t.get(self.i)
    }
    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.t.get(self.i + k)
    }
    fn is(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }
    fn eat(&mut self, s: &str) -> bool {
        let hit = self.is(s);
        if hit {
            self.i += 1;
        }
        hit
    }
    fn expect(&mut self, s: &str) -> R {
        if self.eat(s) {
            Ok(())
        } else {
            Err(format!("expected `{s}` at token {} ({:?})", self.i, self.peek()))
        }
    }
    fn gringo(&self) -> bool {
        self.dialect == Dialect::Gringo
    }

    fn statement(&mut self) -> R {
        if let Some(Tok::Hash(h)) = self.peek().cloned() {
            self.i += 1;
            match (h.as_str(), self.dialect) {
                ("const", Dialect::Gringo) => {
                    let Some(Tok::Ident(_)) = self.peek() else { return Err("#const name".into()) };
                    self.i += 1;
                    self.expect("=")?;
                    self.int()?;
                }
                ("maxint", Dialect::Dlv) => {
                    self.expect("=")?;
                    self.int()?;
                }
                (h, _) => return Err(format!("directive #{h} not in this dialect")),
            }
            return self.expect(".");
        }
        let has_head = !self.is(":-");
        if has_head {
            self.head()?;
        }
        if self.eat(":-") {
            self.literal()?;
            while self.eat(",") {
                self.literal()?;
            }
        } else if !has_head {
            return Err("empty statement".into());
        }
        self.expect(".")
    }

    fn int(&mut self) -> R<i64> {
        let neg = self.eat("-");
        match self.peek() {
            Some(Tok::Int(i)) => {
                let i = *i;
                self.i += 1;
                Ok(if neg { -i } else { i })
            }
            t => Err(format!("expected integer, found {t:?}")),
        }
    }

    fn head(&mut self) -> R {
        let choice = self.is("{") || matches!(self.peek_at(1), Some(Tok::Sym("{")));
        if choice {
            if !self.gringo() {
                return Err("choice rule in dlv".into());
            }
            if !self.is("{") {
                self.term()?;
            }
            self.expect("{")?;
            let pred = self.atom(false)?;
            self.heads.insert(pred);
            if self.eat(":") {
                let d = self.atom(false)?;
                self.bodies.insert(d);
            }
            self.expect("}")?;
            if !self.is(":-") && !self.is(".") {
                self.term()?;
            }
            return Ok(());
        }
        let pred = self.atom(true)?;
        self.heads.insert(pred);
        loop {
            let sep = match (self.dialect, self.peek()) {
                (Dialect::Gringo, Some(Tok::Sym("|"))) => true,
                (Dialect::Dlv, Some(Tok::Ident(v))) if v == "v" => true,
                (_, Some(Tok::Sym("|"))) | (_, Some(Tok::Ident(_))) => return Err("wrong disjunction separator".into()),
                _ => false,
            };
            if !sep {
                return Ok(());
            }
            self.i += 1;
            let pred = self.atom(true)?;
            self.heads.insert(pred);
        }
    }

    /// Returns the predicate name; `classical` admits a leading `-`.
    fn atom(&mut self, classical: bool) -> R<String> {
        let neg = classical && self.eat("-");
        let Some(Tok::Ident(name)) = self.peek().cloned() else {
            return Err(format!("expected atom at token {} ({:?})", self.i, self.peek()));
        };
        self.i += 1;
        if self.eat("(") {
            self.arg()?;
            while self.eat(",") {
                self.arg()?;
            }
            self.expect(")")?;
        }
        Ok(if neg { format!("-{name}") } else { name })
    }

    fn arg(&mut self) -> R {
        self.term()?;
        if self.eat("..") {
            self.term()?;
        }
        Ok(())
    }

    fn term(&mut self) -> R {
        self.unary()?;
        while matches!(self.peek(), Some(Tok::Sym("+" | "-" | "*" | "/"))) {
            self.i += 1;
            self.unary()?;
        }
        Ok(())
    }

    fn unary(&mut self) -> R {
        if self.eat("-") {
            if !self.gringo() {
                return Err("negative term in dlv".into());
            }
            return self.unary();
        }
        match self.peek().cloned() {
            Some(Tok::Int(_)) | Some(Tok::Var(_)) | Some(Tok::Ident(_)) => {
                self.i += 1;
                Ok(())
            }
            Some(Tok::Sym("(")) => {
                self.i += 1;
                self.term()?;
                self.expect(")")
            }
            Some(Tok::Hash(f)) if self.gringo() && (f == "abs" || f == "pow") => {
                self.i += 1;
                self.expect("(")?;
                self.term()?;
                if f == "pow" {
                    self.expect(",")?;
                    self.term()?;
                }
                self.expect(")")
            }
            t => Err(format!("expected term at token {}, found {t:?}", self.i)),
        }
    }

    fn cmp(&mut self) -> R {
        for op in ["=", "!=", "<", "<=", ">", ">="] {
            if self.eat(op) {
                return Ok(());
            }
        }
        Err(format!("expected comparison at token {} ({:?})", self.i, self.peek()))
    }

    fn literal(&mut self) -> R {
        if matches!(self.peek(), Some(Tok::Ident(n)) if n == "not") {
            self.i += 1;
            let p = self.atom(true)?;
            self.bodies.insert(p);
            return Ok(());
        }
        if let Some(Tok::Hash(f)) = self.peek().cloned() {
            if matches!(f.as_str(), "count" | "sum" | "min" | "max") {
                return self.aggregate(None);
            }
        }
        // `L #agg...` in gringo
        if self.gringo() {
            let save = self.i;
            if self.term().is_ok() {
                if let Some(Tok::Hash(f)) = self.peek() {
                    if matches!(f.as_str(), "count" | "sum" | "min" | "max") {
                        return self.aggregate(Some(()));
                    }
                }
            }
            self.i = save;
        }
        // atom, unless a comparison follows
        let save = self.i;
        if let Ok(p) = self.atom(true) {
            if !matches!(self.peek(), Some(Tok::Sym("=" | "!=" | "<" | "<=" | ">" | ">=" | "+" | "-" | "*" | "/"))) {
                self.bodies.insert(p);
                return Ok(());
            }
        }
        self.i = save;
        self.term()?;
        self.cmp()?;
        self.term()
    }

    fn aggregate(&mut self, lower: Option<()>) -> R {
        let Some(Tok::Hash(f)) = self.peek().cloned() else { unreachable!() };
        self.i += 1;
        match self.dialect {
            Dialect::Dlv => {
                self.expect("{")?;
                let Some(Tok::Var(_)) = self.peek() else { return Err("dlv aggregate needs variables".into()) };
                self.i += 1;
                while self.eat(",") {
                    let Some(Tok::Var(_)) = self.peek() else { return Err("variable expected".into()) };
                    self.i += 1;
                }
                self.expect(":")?;
                let p = self.atom(false)?;
                self.bodies.insert(p);
                self.expect("}")?;
                self.cmp()?;
                self.term()
            }
            Dialect::Gringo => {
                if f == "count" {
                    self.expect("{")?;
                    let p = self.atom(false)?;
                    self.bodies.insert(p);
                    self.expect("}")?;
                } else {
                    self.expect("[")?;
                    let p = self.atom(false)?;
                    self.bodies.insert(p);
                    self.expect("=")?;
                    self.term()?;
                    self.expect("]")?;
                }
                let upper = !matches!(self.peek(), Some(Tok::Sym("," | ".")));
                if upper {
                    self.term()?;
                }
                if lower.is_none() && !upper {
                    return Err("unbounded aggregate".into());
                }
                Ok(())
            }
        }
    }
}

/// Splits into statements and checks each; returns (head predicates, body predicates).
fn recognize(text: &str, dialect: Dialect) -> Result<(BTreeSet<String>, BTreeSet<String>), String> {
    let toks = lex(text)?;
    let mut p = P { t: &toks, i: 0, dialect, heads: BTreeSet::new(), bodies: BTreeSet::new() };
    while p.i < toks.len() {
        let start = p.i;
        p.statement().map_err(|e| format!("{e} in statement starting at token {start}"))?;
    }
    Ok((p.heads, p.bodies))
}

#[test]
fn recognizer_rejects_cross_dialect_text() {
    assert!(recognize("p(1) | p(2).", Dialect::Gringo).is_ok());
    assert!(recognize("p(1) | p(2).", Dialect::Dlv).is_err());
    assert!(recognize("p(1) v p(2).", Dialect::Gringo).is_err());
    assert!(recognize("{p(X) : d(X)}.", Dialect::Dlv).is_err());
    assert!(recognize("#const n=3.", Dialect::Dlv).is_err());
    assert!(recognize("p(-1).", Dialect::Dlv).is_err());
    assert!(recognize(":- #count{X : p(X)}.", Dialect::Dlv).is_err());
    assert!(recognize(":- p(X) Y.", Dialect::Gringo).is_err());
}

#[test]
fn every_corpus_translation_conforms() {
    let mut checked = 0;
    for e in corpus::entries() {
        let analysis = e.analysis().unwrap();
        for opts in EmitOptions::combinations().into_iter().filter(EmitOptions::is_valid) {
            let rendered = translate(&analysis, &opts).and_then(|p| Ok((emit_dialect(&p, &opts)?, p)));
            let Ok((text, program)) = rendered else {
                assert_eq!(opts.dialect, Dialect::Dlv, "{} {opts}", e.name);
                continue;
            };
            let (heads, bodies) = recognize(&text, opts.dialect).unwrap_or_else(|err| panic!("{} {opts}: {err}\n{text}", e.name));
            // every body predicate is a fact or rule head somewhere
            let facts: BTreeSet<String> = program.facts.iter().map(|f| f.atom.pred.clone()).collect();
            for b in bodies {
                let b = b.trim_start_matches('-').to_string();
                assert!(facts.contains(&b) || heads.contains(&b), "{} {opts}: `{b}` is never defined", e.name);
            }
            checked += 1;
        }
    }
    assert!(checked >= 24 * 4, "{checked}");
}
