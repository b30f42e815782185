//! Ground values shared by relations, interpretations and ground programs.

use std::fmt;
use std::sync::Arc;

/// A ground constant: an integer or a symbolic constant.
///
/// Ordering puts every integer before every symbol; symbols compare
/// lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(i64),
    Sym(Arc<str>),
}

impl Value {
    pub fn sym(name: &str) -> Self {
        Value::Sym(Arc::from(name))
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            Value::Sym(_) => None,
        }
    }
}

impl From<i64> for Value {
    fn from(i: i64) -> Self {
        Value::Int(i)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Sym(s) => f.write_str(s),
        }
    }
}

pub type Tuple = Vec<Value>;

/// Renders `name(a,b,c)`, or just `name` for the empty tuple.
pub fn fmt_atom(name: &str, args: &[Value]) -> String {
    if args.is_empty() {
        return name.to_string();
    }
    let mut out = String::with_capacity(name.len() + 2 + args.len() * 3);
    out.push_str(name);
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&a.to_string());
    }
    out.push(')');
    out
}
