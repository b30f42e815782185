//! Abstract syntax of NP-SPEC programs.

use std::collections::BTreeSet;

use crate::diagnostics::Pos;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Spec {
    pub constants: Vec<ConstDef>,
    pub relations: Vec<RelDef>,
    pub metafacts: Vec<Metafact>,
    pub rules: Vec<Rule>,
}

impl Spec {
    pub fn constant(&self, name: &str) -> Option<&ConstDef> {
        self.constants.iter().find(|c| c.name == name)
    }

    pub fn relation(&self, name: &str) -> Option<&RelDef> {
        self.relations.iter().find(|r| r.name == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstDef {
    pub name: String,
    pub value: i64,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RelDef {
    pub name: String,
    pub arity: usize,
    pub body: RelBody,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RelBody {
    Tuples(Vec<Vec<Term>>),
    Range(IntExpr, IntExpr),
}

/// Integer-valued expression over literals and named constants, used for
/// range bounds and metafact parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntExpr {
    Lit(i64),
    Const(String),
    Binary(ArithOp, Box<IntExpr>, Box<IntExpr>),
}

impl IntExpr {
    pub fn constants(&self, out: &mut Vec<String>) {
        match self {
            IntExpr::Lit(_) => {}
            IntExpr::Const(c) => out.push(c.clone()),
            IntExpr::Binary(_, l, r) => {
                l.constants(out);
                r.constants(out);
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MetafactKind {
    Subset,
    Permutation,
    Partition,
    IntFunc,
}

impl MetafactKind {
    pub fn keyword(self) -> &'static str {
        match self {
            MetafactKind::Subset => "Subset",
            MetafactKind::Permutation => "Permutation",
            MetafactKind::Partition => "Partition",
            MetafactKind::IntFunc => "IntFunc",
        }
    }

    /// Number of extra argument positions the guessed predicate has over
    /// its domain.
    pub fn extra_arity(self) -> usize {
        match self {
            MetafactKind::Subset => 0,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Metafact {
    pub kind: MetafactKind,
    pub domain: DomainExpr,
    pub target: String,
    pub param: MetafactParam,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MetafactParam {
    None,
    /// Number of partitions of a `Partition` metafact.
    Count(IntExpr),
    /// Value range of an `IntFunc` metafact.
    Range(IntExpr, IntExpr),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DomainOp {
    Product,
    Union,
    Intersect,
    Diff,
}

impl DomainOp {
    pub fn symbol(self) -> &'static str {
        match self {
            DomainOp::Product => "><",
            DomainOp::Union => "+",
            DomainOp::Intersect => "*",
            DomainOp::Diff => "-",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DomainExpr {
    Pred(String),
    Range(IntExpr, IntExpr),
    Binary(DomainOp, Box<DomainExpr>, Box<DomainExpr>),
}

impl DomainExpr {
    pub fn is_leaf(&self) -> bool {
        !matches!(self, DomainExpr::Binary(..))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub head: Head,
    pub body: Vec<BodyElem>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Head {
    Fail,
    Atom(Atom),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
    pub pos: Pos,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    /// NP-SPEC spelling.
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn holds<T: Ord>(self, l: &T, r: &T) -> bool {
        match self {
            CmpOp::Eq => l == r,
            CmpOp::Ne => l != r,
            CmpOp::Lt => l < r,
            CmpOp::Le => l <= r,
            CmpOp::Gt => l > r,
            CmpOp::Ge => l >= r,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BodyElem {
    Pos(Atom),
    Neg(Atom),
    Builtin(CmpOp, Term, Term),
    Aggregate(Aggregate),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
            ArithOp::Pow => "^",
        }
    }

    pub fn precedence(self) -> u8 {
        match self {
            ArithOp::Add | ArithOp::Sub => 1,
            ArithOp::Mul | ArithOp::Div => 2,
            ArithOp::Pow => 3,
        }
    }

    /// Checked integer evaluation. `None` on overflow, division by zero or
    /// a negative exponent.
    pub fn apply(self, l: i64, r: i64) -> Option<i64> {
        match self {
            ArithOp::Add => l.checked_add(r),
            ArithOp::Sub => l.checked_sub(r),
            ArithOp::Mul => l.checked_mul(r),
            ArithOp::Div => l.checked_div(r),
            ArithOp::Pow => u32::try_from(r).ok().and_then(|e| l.checked_pow(e)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Anon,
    Int(i64),
    Sym(String),
    Binary(ArithOp, Box<Term>, Box<Term>),
    Abs(Box<Term>),
}

impl Term {
    pub fn is_arith(&self) -> bool {
        matches!(self, Term::Binary(..) | Term::Abs(_))
    }

    /// Appends the variables of this term in left-to-right order.
    pub fn vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Var(v) => out.push(v),
            Term::Binary(_, l, r) => {
                l.vars(out);
                r.vars(out);
            }
            Term::Abs(t) => t.vars(out),
            Term::Anon | Term::Int(_) | Term::Sym(_) => {}
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AggFunc {
    Count,
    Sum,
    Min,
    Max,
}

impl AggFunc {
    pub fn keyword(self) -> &'static str {
        match self {
            AggFunc::Count => "COUNT",
            AggFunc::Sum => "SUM",
            AggFunc::Min => "MIN",
            AggFunc::Max => "MAX",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AggArg {
    Star,
    Anon,
    Var(String),
    Int(i64),
    Sym(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Aggregate {
    pub func: AggFunc,
    pub pred: String,
    pub args: Vec<AggArg>,
    pub result: String,
    pub lo: IntExpr,
    pub hi: IntExpr,
    pub pos: Pos,
}

impl Aggregate {
    pub fn star_count(&self) -> usize {
        self.args.iter().filter(|a| matches!(a, AggArg::Star)).count()
    }
}

/// Site of a variable occurrence inside a rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Site {
    Head,
    Body(usize),
}

impl Rule {
    /// Every variable occurrence in textual order, tagged with its site.
    /// Aggregate template variables and the aggregate result are tagged with
    /// the aggregate's body index.
    pub fn occurrences(&self) -> Vec<(&str, Site)> {
        let mut out = Vec::new();
        if let Head::Atom(a) = &self.head {
            let mut vs = Vec::new();
            a.args.iter().for_each(|t| t.vars(&mut vs));
            out.extend(vs.into_iter().map(|v| (v, Site::Head)));
        }
        for (i, e) in self.body.iter().enumerate() {
            let mut vs = Vec::new();
            match e {
                BodyElem::Pos(a) | BodyElem::Neg(a) => a.args.iter().for_each(|t| t.vars(&mut vs)),
                BodyElem::Builtin(_, l, r) => {
                    l.vars(&mut vs);
                    r.vars(&mut vs);
                }
                BodyElem::Aggregate(g) => {
                    for a in &g.args {
                        if let AggArg::Var(v) = a {
                            vs.push(v);
                        }
                    }
                    vs.push(&g.result);
                }
            }
            out.extend(vs.into_iter().map(|v| (v, Site::Body(i))));
        }
        out
    }

    /// Template variables of the aggregate at `index` that also occur at some
    /// other site of the rule; these are fixed during aggregation.
    pub fn aggregate_shared(&self, index: usize) -> BTreeSet<String> {
        let occ = self.occurrences();
        let BodyElem::Aggregate(g) = &self.body[index] else {
            return BTreeSet::new();
        };
        g.args
            .iter()
            .filter_map(|a| match a {
                AggArg::Var(v) => Some(v.as_str()),
                _ => None,
            })
            .filter(|v| occ.iter().any(|(w, s)| w == v && *s != Site::Body(index)))
            .map(str::to_string)
            .collect()
    }

    /// Variables of the rule in order of first occurrence. Variables that
    /// occur only inside a single aggregate template are local to it and are
    /// not listed.
    pub fn variables(&self) -> Vec<String> {
        let occ = self.occurrences();
        let mut seen: Vec<String> = Vec::new();
        for (v, site) in &occ {
            if seen.iter().any(|s| s == v) {
                continue;
            }
            let local = match site {
                Site::Body(i) => match &self.body[*i] {
                    BodyElem::Aggregate(g) => g.result != *v && occ.iter().all(|(w, s)| w != v || s == site),
                    _ => false,
                },
                Site::Head => false,
            };
            if !local {
                seen.push(v.to_string());
            }
        }
        seen
    }
}
