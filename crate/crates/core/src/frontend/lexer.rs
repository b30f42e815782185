//! Tokenizer for NP-SPEC source text.

use std::fmt;

use crate::diagnostics::Pos;

use super::{SyntaxError, SyntaxErrorKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Keyword {
    Database,
    Specification,
    Subset,
    Permutation,
    Partition,
    IntFunc,
    Not,
    Fail,
    Count,
    Sum,
    Min,
    Max,
    Abs,
}

impl Keyword {
    fn from_ident(s: &str) -> Option<Keyword> {
        Some(match s {
            "DATABASE" => Keyword::Database,
            "SPECIFICATION" => Keyword::Specification,
            "Subset" => Keyword::Subset,
            "Permutation" => Keyword::Permutation,
            "Partition" => Keyword::Partition,
            "IntFunc" => Keyword::IntFunc,
            "NOT" | "not" => Keyword::Not,
            "fail" => Keyword::Fail,
            "COUNT" => Keyword::Count,
            "SUM" => Keyword::Sum,
            "MIN" => Keyword::Min,
            "MAX" => Keyword::Max,
            "abs" => Keyword::Abs,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Keyword::Database => "DATABASE",
            Keyword::Specification => "SPECIFICATION",
            Keyword::Subset => "Subset",
            Keyword::Permutation => "Permutation",
            Keyword::Partition => "Partition",
            Keyword::IntFunc => "IntFunc",
            Keyword::Not => "NOT",
            Keyword::Fail => "fail",
            Keyword::Count => "COUNT",
            Keyword::Sum => "SUM",
            Keyword::Min => "MIN",
            Keyword::Max => "MAX",
            Keyword::Abs => "abs",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TokenKind {
    Ident(String),
    Int(i64),
    Keyword(Keyword),
    /// `_`
    Underscore,
    Assign,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Semi,
    Dot,
    DotDot,
    Colon,
    Arrow,
    Product,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    EqEq,
    NotEq,
    Lt,
    Le,
    Gt,
    Ge,
    Eof,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TokenKind::Ident(s) => return write!(f, "identifier `{s}`"),
            TokenKind::Int(i) => return write!(f, "integer `{i}`"),
            TokenKind::Keyword(k) => return write!(f, "`{}`", k.as_str()),
            TokenKind::Underscore => "`_`",
            TokenKind::Assign => "`=`",
            TokenKind::LBrace => "`{`",
            TokenKind::RBrace => "`}`",
            TokenKind::LParen => "`(`",
            TokenKind::RParen => "`)`",
            TokenKind::Comma => "`,`",
            TokenKind::Semi => "`;`",
            TokenKind::Dot => "`.`",
            TokenKind::DotDot => "`..`",
            TokenKind::Colon => "`:`",
            TokenKind::Arrow => "`<--`",
            TokenKind::Product => "`><`",
            TokenKind::Plus => "`+`",
            TokenKind::Minus => "`-`",
            TokenKind::Star => "`*`",
            TokenKind::Slash => "`/`",
            TokenKind::Caret => "`^`",
            TokenKind::EqEq => "`==`",
            TokenKind::NotEq => "`!=`",
            TokenKind::Lt => "`<`",
            TokenKind::Le => "`<=`",
            TokenKind::Gt => "`>`",
            TokenKind::Ge => "`>=`",
            TokenKind::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
    line: u32,
    column: u32,
}

impl<'a> Cursor<'a> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.chars.clone();
        it.next();
        it.next().map(|(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn offset(&mut self) -> usize {
        self.chars.peek().map(|&(i, _)| i).unwrap_or(self.src.len())
    }

    fn pos(&self) -> Pos {
        Pos::new(self.line, self.column)
    }
}

/// Splits `source` into tokens. Comments (`//` to end of line and `/* */`)
/// are dropped. The returned stream always ends with an `Eof` token.
pub fn tokenize(source: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut cur = Cursor {
        chars: source.char_indices().peekable(),
        src: source,
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    loop {
        // whitespace and comments
        loop {
            match cur.peek() {
                Some(c) if c.is_whitespace() => {
                    cur.bump();
                }
                Some('/') if cur.peek2() == Some('/') => {
                    while let Some(c) = cur.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                Some('/') if cur.peek2() == Some('*') => {
                    let start = cur.pos();
                    cur.bump();
                    cur.bump();
                    let mut closed = false;
                    while let Some(c) = cur.bump() {
                        if c == '*' && cur.peek() == Some('/') {
                            cur.bump();
                            closed = true;
                            break;
                        }
                    }
                    if !closed {
                        return Err(SyntaxError::new(SyntaxErrorKind::UnterminatedComment, start));
                    }
                }
                _ => break,
            }
        }
        let pos = cur.pos();
        let Some(c) = cur.peek() else {
            tokens.push(Token { kind: TokenKind::Eof, pos });
            return Ok(tokens);
        };
        let kind = if c.is_ascii_alphabetic() || c == '_' {
            let start = cur.offset();
            while matches!(cur.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                cur.bump();
            }
            let end = cur.offset();
            let word = &source[start..end];
            if word == "_" {
                TokenKind::Underscore
            } else if let Some(k) = Keyword::from_ident(word) {
                TokenKind::Keyword(k)
            } else {
                TokenKind::Ident(word.to_string())
            }
        } else if c.is_ascii_digit() {
            let start = cur.offset();
            while matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
                cur.bump();
            }
            let end = cur.offset();
            let text = &source[start..end];
            let value = text
                .parse::<i64>()
                .map_err(|_| SyntaxError::new(SyntaxErrorKind::IntegerOverflow(text.to_string()), pos))?;
            TokenKind::Int(value)
        } else {
            cur.bump();
            let next = cur.peek();
            let two = |cur: &mut Cursor<'_>, k: TokenKind| {
                cur.bump();
                k
            };
            match (c, next) {
                ('<', Some('-')) if cur.peek2() == Some('-') => {
                    cur.bump();
                    cur.bump();
                    TokenKind::Arrow
                }
                ('<', Some('=')) => two(&mut cur, TokenKind::Le),
                ('<', _) => TokenKind::Lt,
                ('>', Some('<')) => two(&mut cur, TokenKind::Product),
                ('>', Some('=')) => two(&mut cur, TokenKind::Ge),
                ('>', _) => TokenKind::Gt,
                ('=', Some('=')) => two(&mut cur, TokenKind::EqEq),
                ('=', _) => TokenKind::Assign,
                ('!', Some('=')) => two(&mut cur, TokenKind::NotEq),
                ('.', Some('.')) => two(&mut cur, TokenKind::DotDot),
                ('.', _) => TokenKind::Dot,
                ('{', _) => TokenKind::LBrace,
                ('}', _) => TokenKind::RBrace,
                ('(', _) => TokenKind::LParen,
                (')', _) => TokenKind::RParen,
                (',', _) => TokenKind::Comma,
                (';', _) => TokenKind::Semi,
                (':', _) => TokenKind::Colon,
                ('+', _) => TokenKind::Plus,
                ('-', _) => TokenKind::Minus,
                ('*', _) => TokenKind::Star,
                ('/', _) => TokenKind::Slash,
                ('^', _) => TokenKind::Caret,
                _ => return Err(SyntaxError::new(SyntaxErrorKind::IllegalCharacter(c), pos)),
            }
        };
        tokens.push(Token { kind, pos });
    }
}
