//! NP-SPEC frontend: tokenizer, parser and canonical pretty-printer.

mod ast;
mod lexer;
mod parser;
mod printer;

use std::fmt;

pub use ast::*;
pub use lexer::{tokenize, Keyword, Token, TokenKind};
pub use parser::parse_spec;
pub use printer::{
    fmt_aggregate, fmt_atom, fmt_domain, fmt_int_expr, fmt_metafact, fmt_rule, fmt_term, pretty_print,
};

use crate::diagnostics::{Diagnostic, Pos, Severity};

/// Tokenizes and parses NP-SPEC source.
pub fn parse(source: &str) -> Result<Spec, SyntaxError> {
    let tokens = tokenize(source)?;
    parse_spec(&tokens)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SyntaxErrorKind {
    UnterminatedComment,
    IllegalCharacter(char),
    IntegerOverflow(String),
    Unexpected { found: String, expected: Vec<String> },
    Duplicate(String),
    MetafactArguments { kind: MetafactKind, expected: usize, found: usize },
    AggregateStars { func: AggFunc, found: usize },
    ResultInTemplate(String),
    MixedDomainOperators,
    EmptyRelation(String),
    TupleArity { relation: String, expected: usize, found: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct SyntaxError {
    pub kind: SyntaxErrorKind,
    pub pos: Pos,
}

impl SyntaxError {
    pub fn new(kind: SyntaxErrorKind, pos: Pos) -> Self {
        SyntaxError { kind, pos }
    }

    pub fn code(&self) -> &'static str {
        match self.kind {
            SyntaxErrorKind::UnterminatedComment => "E0101",
            SyntaxErrorKind::IllegalCharacter(_) => "E0102",
            SyntaxErrorKind::IntegerOverflow(_) => "E0103",
            SyntaxErrorKind::Unexpected { .. } => "E0104",
            SyntaxErrorKind::Duplicate(_) => "E0105",
            SyntaxErrorKind::MetafactArguments { .. } => "E0106",
            SyntaxErrorKind::AggregateStars { .. } => "E0107",
            SyntaxErrorKind::ResultInTemplate(_) => "E0108",
            SyntaxErrorKind::MixedDomainOperators => "E0109",
            SyntaxErrorKind::EmptyRelation(_) => "E0110",
            SyntaxErrorKind::TupleArity { .. } => "E0111",
        }
    }

    pub fn diagnostic(&self) -> Diagnostic {
        Diagnostic::new(Severity::Error, self.code(), self.kind.to_string(), self.pos)
    }
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.kind)
    }
}

impl fmt::Display for SyntaxErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SyntaxErrorKind::UnterminatedComment => write!(f, "unterminated block comment"),
            SyntaxErrorKind::IllegalCharacter(c) => write!(f, "illegal character {c:?}"),
            SyntaxErrorKind::IntegerOverflow(s) => write!(f, "integer literal {s} out of range"),
            SyntaxErrorKind::Unexpected { found, expected } => {
                write!(f, "unexpected {found}, expected ")?;
                match expected.as_slice() {
                    [one] => write!(f, "{one}"),
                    many => write!(f, "one of {}", many.join(", ")),
                }
            }
            SyntaxErrorKind::Duplicate(name) => write!(f, "`{name}` is defined more than once"),
            SyntaxErrorKind::MetafactArguments { kind, expected, found } => write!(
                f,
                "{} takes {expected} arguments, found {found}",
                kind.keyword()
            ),
            SyntaxErrorKind::AggregateStars { func, found } => match func {
                AggFunc::Count => write!(f, "COUNT needs at least one `*`, found {found}"),
                _ => write!(f, "{} needs exactly one `*`, found {found}", func.keyword()),
            },
            SyntaxErrorKind::ResultInTemplate(v) => {
                write!(f, "aggregate result variable {v} also occurs in the template")
            }
            SyntaxErrorKind::MixedDomainOperators => write!(
                f,
                "mixed domain operators need parentheses, e.g. `(p >< q) + r`"
            ),
            SyntaxErrorKind::EmptyRelation(name) => {
                write!(f, "cannot infer the arity of empty relation `{name}`")
            }
            SyntaxErrorKind::TupleArity { relation, expected, found } => write!(
                f,
                "tuple of arity {found} in relation `{relation}` of arity {expected}"
            ),
        }
    }
}

pub fn is_variable_name(name: &str) -> bool {
    name.starts_with(|c: char| c.is_ascii_uppercase() || c == '_')
}
