//! Recursive-descent parser producing a [`Spec`].

use std::collections::HashSet;

use crate::diagnostics::Pos;

use super::ast::*;
use super::lexer::{Keyword, Token, TokenKind};
use super::{is_variable_name, SyntaxError, SyntaxErrorKind};

/// Parses a token stream (as produced by [`super::tokenize`]) into a spec.
/// Parsing stops at the first error.
pub fn parse_spec(tokens: &[Token]) -> Result<Spec, SyntaxError> {
    let mut p = Parser { tokens, idx: 0 };
    p.spec()
}

struct Parser<'t> {
    tokens: &'t [Token],
    idx: usize,
}

type PResult<T> = Result<T, SyntaxError>;

impl<'t> Parser<'t> {
    fn peek(&self) -> &'t TokenKind {
        &self.tokens[self.idx.min(self.tokens.len() - 1)].kind
    }

    fn peek_at(&self, n: usize) -> &'t TokenKind {
        &self.tokens[(self.idx + n).min(self.tokens.len() - 1)].kind
    }

    fn pos(&self) -> Pos {
        self.tokens[self.idx.min(self.tokens.len() - 1)].pos
    }

    fn bump(&mut self) -> &'t Token {
        let t = &self.tokens[self.idx.min(self.tokens.len() - 1)];
        if self.idx < self.tokens.len() - 1 {
            self.idx += 1;
        }
        t
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == kind {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected<T>(&self, expected: &[&str]) -> PResult<T> {
        Err(SyntaxError::new(
            SyntaxErrorKind::Unexpected {
                found: self.peek().to_string(),
                expected: expected.iter().map(|s| s.to_string()).collect(),
            },
            self.pos(),
        ))
    }

    fn expect(&mut self, kind: TokenKind) -> PResult<Pos> {
        if self.peek() == &kind {
            Ok(self.bump().pos)
        } else {
            self.unexpected(&[&kind.to_string()])
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Pos)> {
        match self.peek() {
            TokenKind::Ident(s) if !is_variable_name(s) => {
                let pos = self.bump().pos;
                Ok((s.clone(), pos))
            }
            _ => self.unexpected(&[what]),
        }
    }

    fn spec(&mut self) -> PResult<Spec> {
        let mut spec = Spec::default();
        self.expect(TokenKind::Keyword(Keyword::Database))?;
        let mut names = HashSet::new();
        while let TokenKind::Ident(_) = self.peek() {
            self.db_item(&mut spec, &mut names)?;
        }
        if !self.eat(&TokenKind::Keyword(Keyword::Specification)) {
            return self.unexpected(&["identifier", "`SPECIFICATION`"]);
        }
        while self.peek() != &TokenKind::Eof {
            match self.peek() {
                TokenKind::Keyword(
                    Keyword::Subset | Keyword::Permutation | Keyword::Partition | Keyword::IntFunc,
                ) => spec.metafacts.push(self.metafact()?),
                TokenKind::Keyword(Keyword::Fail) | TokenKind::Ident(_) => spec.rules.push(self.rule()?),
                _ => return self.unexpected(&["metafact", "rule", "end of input"]),
            }
        }
        Ok(spec)
    }

    fn db_item(&mut self, spec: &mut Spec, names: &mut HashSet<String>) -> PResult<()> {
        let (name, pos) = self.ident("relation or constant name")?;
        if !names.insert(name.clone()) {
            return Err(SyntaxError::new(SyntaxErrorKind::Duplicate(name), pos));
        }
        self.expect(TokenKind::Assign)?;
        if self.eat(&TokenKind::LBrace) {
            let body = self.set_body(&name, pos)?;
            self.expect(TokenKind::RBrace)?;
            self.expect(TokenKind::Semi)?;
            let arity = match &body {
                RelBody::Range(..) => 1,
                RelBody::Tuples(ts) => ts[0].len(),
            };
            spec.relations.push(RelDef { name, arity, body, pos });
            return Ok(());
        }
        let value_pos = self.pos();
        let e = self.int_expr()?;
        if self.eat(&TokenKind::DotDot) {
            let hi = self.int_expr()?;
            self.expect(TokenKind::Semi)?;
            spec.relations.push(RelDef { name, arity: 1, body: RelBody::Range(e, hi), pos });
            return Ok(());
        }
        let IntExpr::Lit(value) = e else {
            return Err(SyntaxError::new(
                SyntaxErrorKind::Unexpected {
                    found: "expression".into(),
                    expected: vec!["integer literal".into()],
                },
                value_pos,
            ));
        };
        self.expect(TokenKind::Semi)?;
        spec.constants.push(ConstDef { name, value, pos });
        Ok(())
    }

    fn set_body(&mut self, name: &str, pos: Pos) -> PResult<RelBody> {
        if self.peek() == &TokenKind::RBrace {
            return Err(SyntaxError::new(SyntaxErrorKind::EmptyRelation(name.to_string()), pos));
        }
        if self.peek() != &TokenKind::LParen {
            let save = self.idx;
            if let Ok(lo) = self.int_expr() {
                if self.eat(&TokenKind::DotDot) {
                    let hi = self.int_expr()?;
                    return Ok(RelBody::Range(lo, hi));
                }
            }
            self.idx = save;
        }
        let mut tuples: Vec<Vec<Term>> = Vec::new();
        loop {
            let tpos = self.pos();
            let tuple = if self.eat(&TokenKind::LParen) {
                let mut t = vec![self.value()?];
                while self.eat(&TokenKind::Comma) {
                    t.push(self.value()?);
                }
                self.expect(TokenKind::RParen)?;
                t
            } else {
                vec![self.value()?]
            };
            if let Some(first) = tuples.first() {
                if first.len() != tuple.len() {
                    return Err(SyntaxError::new(
                        SyntaxErrorKind::TupleArity {
                            relation: name.to_string(),
                            expected: first.len(),
                            found: tuple.len(),
                        },
                        tpos,
                    ));
                }
            }
            tuples.push(tuple);
            if !self.eat(&TokenKind::Comma) {
                break;
            }
        }
        Ok(RelBody::Tuples(tuples))
    }

    /// A ground tuple element: integer (possibly negative) or symbol.
    fn value(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            TokenKind::Int(i) => {
                self.bump();
                Ok(Term::Int(i))
            }
            TokenKind::Minus => {
                if let TokenKind::Int(i) = self.peek_at(1) {
                    let i = *i;
                    self.bump();
                    self.bump();
                    Ok(Term::Int(-i))
                } else {
                    self.bump();
                    self.unexpected(&["integer"])
                }
            }
            TokenKind::Ident(s) if !is_variable_name(&s) => {
                self.bump();
                Ok(Term::Sym(s))
            }
            _ => self.unexpected(&["integer", "constant symbol"]),
        }
    }

    fn int_expr(&mut self) -> PResult<IntExpr> {
        let mut lhs = self.int_term()?;
        loop {
            let op = match self.peek() {
                TokenKind::Plus => ArithOp::Add,
                TokenKind::Minus => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.int_term()?;
            lhs = IntExpr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn int_term(&mut self) -> PResult<IntExpr> {
        let mut lhs = self.int_factor()?;
        loop {
            let op = match self.peek() {
                TokenKind::Star => ArithOp::Mul,
                TokenKind::Slash => ArithOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.int_factor()?;
            lhs = IntExpr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn int_factor(&mut self) -> PResult<IntExpr> {
        let base = self.int_unary()?;
        if self.eat(&TokenKind::Caret) {
            let exp = self.int_factor()?;
            return Ok(IntExpr::Binary(ArithOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn int_unary(&mut self) -> PResult<IntExpr> {
        match self.peek().clone() {
            TokenKind::Int(i) => {
                self.bump();
                Ok(IntExpr::Lit(i))
            }
            TokenKind::Minus => {
                self.bump();
                if let TokenKind::Int(i) = self.peek() {
                    let i = *i;
                    self.bump();
                    return Ok(IntExpr::Lit(-i));
                }
                let inner = self.int_unary()?;
                Ok(IntExpr::Binary(ArithOp::Sub, Box::new(IntExpr::Lit(0)), Box::new(inner)))
            }
            TokenKind::Ident(s) if !is_variable_name(&s) => {
                self.bump();
                Ok(IntExpr::Const(s))
            }
            TokenKind::LParen => {
                self.bump();
                let e = self.int_expr()?;
                self.expect(TokenKind::RParen)?;
                Ok(e)
            }
            _ => self.unexpected(&["integer", "constant name", "`(`"]),
        }
    }

    fn metafact(&mut self) -> PResult<Metafact> {
        let pos = self.pos();
        let kind = match self.bump().kind {
            TokenKind::Keyword(Keyword::Subset) => MetafactKind::Subset,
            TokenKind::Keyword(Keyword::Permutation) => MetafactKind::Permutation,
            TokenKind::Keyword(Keyword::Partition) => MetafactKind::Partition,
            TokenKind::Keyword(Keyword::IntFunc) => MetafactKind::IntFunc,
            _ => unreachable!("caller checked the metafact keyword"),
        };
        self.expect(TokenKind::LParen)?;
        let domain = self.domain()?;
        let wrong_count = |found: usize, pos: Pos| {
            let expected = match kind {
                MetafactKind::Subset | MetafactKind::Permutation => 2,
                _ => 3,
            };
            SyntaxError::new(SyntaxErrorKind::MetafactArguments { kind, expected, found }, pos)
        };
        if self.peek() == &TokenKind::RParen {
            return Err(wrong_count(1, pos));
        }
        self.expect(TokenKind::Comma)?;
        let (target, _) = self.ident("predicate name")?;
        let mut extras = Vec::new();
        while self.eat(&TokenKind::Comma) {
            let lo = self.int_expr()?;
            if self.eat(&TokenKind::DotDot) {
                let hi = self.int_expr()?;
                extras.push(MetafactParam::Range(lo, hi));
            } else {
                extras.push(MetafactParam::Count(lo));
            }
        }
        self.expect(TokenKind::RParen)?;
        let param = match (kind, extras.len()) {
            (MetafactKind::Subset | MetafactKind::Permutation, 0) => MetafactParam::None,
            (MetafactKind::Partition, 1) if matches!(extras[0], MetafactParam::Count(_)) => extras.remove(0),
            (MetafactKind::IntFunc, 1) if matches!(extras[0], MetafactParam::Range(..)) => extras.remove(0),
            (MetafactKind::Partition | MetafactKind::IntFunc, 1) => {
                let what = if kind == MetafactKind::Partition { "integer" } else { "range `lo..hi`" };
                return Err(SyntaxError::new(
                    SyntaxErrorKind::Unexpected {
                        found: "parameter".into(),
                        expected: vec![what.into()],
                    },
                    pos,
                ));
            }
            (_, n) => return Err(wrong_count(n + 2, pos)),
        };
        self.expect(TokenKind::Dot)?;
        Ok(Metafact { kind, domain, target, param, pos })
    }

    fn domain(&mut self) -> PResult<DomainExpr> {
        let mut lhs = self.domain_primary()?;
        let mut chain: Option<DomainOp> = None;
        loop {
            let op = match self.peek() {
                TokenKind::Product => DomainOp::Product,
                TokenKind::Plus => DomainOp::Union,
                TokenKind::Star => DomainOp::Intersect,
                TokenKind::Minus => DomainOp::Diff,
                _ => return Ok(lhs),
            };
            if chain.is_some_and(|c| c != op) {
                return Err(SyntaxError::new(SyntaxErrorKind::MixedDomainOperators, self.pos()));
            }
            chain = Some(op);
            self.bump();
            let rhs = self.domain_primary()?;
            lhs = DomainExpr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn domain_primary(&mut self) -> PResult<DomainExpr> {
        match self.peek().clone() {
            TokenKind::LParen => {
                self.bump();
                let d = self.domain()?;
                self.expect(TokenKind::RParen)?;
                Ok(d)
            }
            TokenKind::LBrace => {
                self.bump();
                let lo = self.int_expr()?;
                self.expect(TokenKind::DotDot)?;
                let hi = self.int_expr()?;
                self.expect(TokenKind::RBrace)?;
                Ok(DomainExpr::Range(lo, hi))
            }
            TokenKind::Ident(s) if !is_variable_name(&s) => {
                if self.peek_at(1) == &TokenKind::DotDot {
                    let lo = self.bound()?;
                    self.bump();
                    let hi = self.bound()?;
                    return Ok(DomainExpr::Range(lo, hi));
                }
                self.bump();
                Ok(DomainExpr::Pred(s))
            }
            TokenKind::Int(_) | TokenKind::Minus => {
                let lo = self.bound()?;
                self.expect(TokenKind::DotDot)?;
                let hi = self.bound()?;
                Ok(DomainExpr::Range(lo, hi))
            }
            _ => self.unexpected(&["predicate name", "range", "`(`"]),
        }
    }

    /// Range bound outside braces: a literal or constant name only.
    fn bound(&mut self) -> PResult<IntExpr> {
        match self.peek().clone() {
            TokenKind::Int(i) => {
                self.bump();
                Ok(IntExpr::Lit(i))
            }
            TokenKind::Minus => match self.peek_at(1) {
                TokenKind::Int(i) => {
                    let i = *i;
                    self.bump();
                    self.bump();
                    Ok(IntExpr::Lit(-i))
                }
                _ => {
                    self.bump();
                    self.unexpected(&["integer"])
                }
            },
            TokenKind::Ident(s) if !is_variable_name(&s) => {
                self.bump();
                Ok(IntExpr::Const(s))
            }
            _ => self.unexpected(&["integer", "constant name"]),
        }
    }

    fn rule(&mut self) -> PResult<Rule> {
        let pos = self.pos();
        let head = if self.eat(&TokenKind::Keyword(Keyword::Fail)) {
            Head::Fail
        } else {
            Head::Atom(self.atom()?)
        };
        if !self.eat(&TokenKind::Arrow) {
            return self.unexpected(&["`<--`"]);
        }
        let mut body = vec![self.body_elem()?];
        while self.eat(&TokenKind::Comma) {
            body.push(self.body_elem()?);
        }
        self.expect(TokenKind::Dot)?;
        Ok(Rule { head, body, pos })
    }

    fn atom(&mut self) -> PResult<Atom> {
        let (pred, pos) = match self.peek() {
            TokenKind::Keyword(Keyword::Fail) => {
                let pos = self.bump().pos;
                ("fail".to_string(), pos)
            }
            _ => self.ident("predicate name")?,
        };
        let mut args = Vec::new();
        if self.eat(&TokenKind::LParen) {
            args.push(self.term()?);
            while self.eat(&TokenKind::Comma) {
                args.push(self.term()?);
            }
            self.expect(TokenKind::RParen)?;
        }
        Ok(Atom { pred, args, pos })
    }

    fn cmp_op(&self) -> Option<CmpOp> {
        Some(match self.peek() {
            TokenKind::EqEq => CmpOp::Eq,
            TokenKind::NotEq => CmpOp::Ne,
            TokenKind::Lt => CmpOp::Lt,
            TokenKind::Le => CmpOp::Le,
            TokenKind::Gt => CmpOp::Gt,
            TokenKind::Ge => CmpOp::Ge,
            _ => return None,
        })
    }

    fn body_elem(&mut self) -> PResult<BodyElem> {
        match self.peek() {
            TokenKind::Keyword(Keyword::Not) => {
                self.bump();
                Ok(BodyElem::Neg(self.atom()?))
            }
            TokenKind::Keyword(Keyword::Count | Keyword::Sum | Keyword::Min | Keyword::Max)
                if self.peek_at(1) == &TokenKind::LParen =>
            {
                Ok(BodyElem::Aggregate(self.aggregate()?))
            }
            TokenKind::Keyword(Keyword::Fail) => Ok(BodyElem::Pos(self.atom()?)),
            TokenKind::Ident(s) if !is_variable_name(s) && self.peek_at(1) == &TokenKind::LParen => {
                Ok(BodyElem::Pos(self.atom()?))
            }
            _ => {
                let pos = self.pos();
                let lhs = self.term()?;
                match self.cmp_op() {
                    Some(op) => {
                        self.bump();
                        let rhs = self.term()?;
                        Ok(BodyElem::Builtin(op, lhs, rhs))
                    }
                    None => match lhs {
                        Term::Sym(pred) => Ok(BodyElem::Pos(Atom { pred, args: vec![], pos })),
                        _ => self.unexpected(&["comparison operator"]),
                    },
                }
            }
        }
    }

    fn aggregate(&mut self) -> PResult<Aggregate> {
        let pos = self.pos();
        let func = match self.bump().kind {
            TokenKind::Keyword(Keyword::Count) => AggFunc::Count,
            TokenKind::Keyword(Keyword::Sum) => AggFunc::Sum,
            TokenKind::Keyword(Keyword::Min) => AggFunc::Min,
            TokenKind::Keyword(Keyword::Max) => AggFunc::Max,
            _ => unreachable!("caller checked the aggregate keyword"),
        };
        self.expect(TokenKind::LParen)?;
        let (pred, _) = self.ident("predicate name")?;
        self.expect(TokenKind::LParen)?;
        let mut args = vec![self.agg_arg()?];
        while self.eat(&TokenKind::Comma) {
            args.push(self.agg_arg()?);
        }
        self.expect(TokenKind::RParen)?;
        self.expect(TokenKind::Comma)?;
        let result = match self.peek() {
            TokenKind::Ident(s) if is_variable_name(s) => {
                let s = s.clone();
                self.bump();
                s
            }
            _ => return self.unexpected(&["result variable"]),
        };
        self.expect(TokenKind::Colon)?;
        let lo = self.int_expr()?;
        self.expect(TokenKind::DotDot)?;
        let hi = self.int_expr()?;
        self.expect(TokenKind::RParen)?;
        let agg = Aggregate { func, pred, args, result, lo, hi, pos };
        let stars = agg.star_count();
        let ok = match func {
            AggFunc::Count => stars >= 1,
            _ => stars == 1,
        };
        if !ok {
            return Err(SyntaxError::new(SyntaxErrorKind::AggregateStars { func, found: stars }, pos));
        }
        if agg.args.iter().any(|a| matches!(a, AggArg::Var(v) if *v == agg.result)) {
            return Err(SyntaxError::new(SyntaxErrorKind::ResultInTemplate(agg.result), pos));
        }
        Ok(agg)
    }

    fn agg_arg(&mut self) -> PResult<AggArg> {
        match self.peek().clone() {
            TokenKind::Star => {
                self.bump();
                Ok(AggArg::Star)
            }
            TokenKind::Underscore => {
                self.bump();
                Ok(AggArg::Anon)
            }
            TokenKind::Ident(s) => {
                self.bump();
                Ok(if is_variable_name(&s) { AggArg::Var(s) } else { AggArg::Sym(s) })
            }
            TokenKind::Int(i) => {
                self.bump();
                Ok(AggArg::Int(i))
            }
            TokenKind::Minus => match self.peek_at(1) {
                TokenKind::Int(i) => {
                    let i = *i;
                    self.bump();
                    self.bump();
                    Ok(AggArg::Int(-i))
                }
                _ => {
                    self.bump();
                    self.unexpected(&["integer"])
                }
            },
            _ => self.unexpected(&["`*`", "`_`", "variable", "constant"]),
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let mut lhs = self.term_mul()?;
        loop {
            let op = match self.peek() {
                TokenKind::Plus => ArithOp::Add,
                TokenKind::Minus => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term_mul()?;
            lhs = Term::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term_mul(&mut self) -> PResult<Term> {
        let mut lhs = self.term_pow()?;
        loop {
            let op = match self.peek() {
                TokenKind::Star => ArithOp::Mul,
                TokenKind::Slash => ArithOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term_pow()?;
            lhs = Term::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term_pow(&mut self) -> PResult<Term> {
        let base = self.term_unary()?;
        if self.eat(&TokenKind::Caret) {
            let exp = self.term_pow()?;
            return Ok(Term::Binary(ArithOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn term_unary(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            TokenKind::Int(i) => {
                self.bump();
                Ok(Term::Int(i))
            }
            TokenKind::Minus => {
                self.bump();
                if let TokenKind::Int(i) = self.peek() {
                    let i = *i;
                    self.bump();
                    return Ok(Term::Int(-i));
                }
                let inner = self.term_unary()?;
                Ok(Term::Binary(ArithOp::Sub, Box::new(Term::Int(0)), Box::new(inner)))
            }
            TokenKind::Underscore => {
                self.bump();
                Ok(Term::Anon)
            }
            TokenKind::Ident(s) => {
                self.bump();
                Ok(if is_variable_name(&s) { Term::Var(s) } else { Term::Sym(s) })
            }
            TokenKind::Keyword(Keyword::Abs) => {
                self.bump();
                self.expect(TokenKind::LParen)?;
                let t = self.term()?;
                self.expect(TokenKind::RParen)?;
                Ok(Term::Abs(Box::new(t)))
            }
            TokenKind::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(TokenKind::RParen)?;
                Ok(t)
            }
            _ => self.unexpected(&["term"]),
        }
    }
}
