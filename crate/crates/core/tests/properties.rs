//! Property tests over randomly generated small specs.
//!
//! Specs are built from a structured description so the test can evaluate
//! them on its own: guesses are enumerated here, derived predicates are
//! computed bottom-up with every variable ranging over the active domain,
//! and the resulting answer sets are compared with the library's.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use npspec::analyzer::analyze;
use npspec::frontend::{parse, pretty_print};
use npspec::oracle::{cross_check, enumerate_guesses, solve, CheckLimits, GuessSpace, SolveMode, Verdict};
use npspec::translator::{translate, unsafe_variables, EmitOptions};
use npspec::value::Value;

#[derive(Clone, Copy, Debug)]
enum Kind {
    SubsetD,
    SubsetE,
    Permutation,
    Partition,
    IntFunc,
}

#[derive(Clone, Copy, Debug)]
enum Term {
    Var(usize),
    Const(i64),
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Lt,
    Le,
    Eq,
    Ne,
}

#[derive(Clone, Debug)]
enum Lit {
    /// Predicate index into the predicates visible to the rule.
    Pos(usize, [Term; 2]),
    Neg(usize, [Term; 2]),
    Cmp(Op, Term, Term),
    /// `a == b + 1`
    Succ(Term, Term),
    /// `COUNT(p(*),N:0..3), N op c` over a unary predicate, with a fresh `N`
    /// per literal.
    Count(usize, Op, i64),
}

#[derive(Clone, Debug)]
struct RuleDesc {
    head_arity: usize,
    head_term: Term,
    body: Vec<Lit>,
}

#[derive(Clone, Debug)]
struct SpecDesc {
    k: i64,
    e: Vec<(i64, i64)>,
    metas: Vec<Kind>,
    derived: Vec<RuleDesc>,
    fails: Vec<Vec<Lit>>,
}

const VARS: [&str; 3] = ["X", "Y", "Z"];

fn term() -> impl Strategy<Value = Term> {
    prop_oneof![3 => (0..3usize).prop_map(Term::Var), 1 => (0..=3i64).prop_map(Term::Const)]
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![Just(Op::Lt), Just(Op::Le), Just(Op::Eq), Just(Op::Ne)]
}

fn lit() -> impl Strategy<Value = Lit> {
    prop_oneof![
        4 => (0..8usize, term(), term()).prop_map(|(p, a, b)| Lit::Pos(p, [a, b])),
        2 => (0..8usize, term(), term()).prop_map(|(p, a, b)| Lit::Neg(p, [a, b])),
        1 => (op(), term(), term()).prop_map(|(o, a, b)| Lit::Cmp(o, a, b)),
        1 => (term(), term()).prop_map(|(a, b)| Lit::Succ(a, b)),
        1 => (0..8usize, op(), 0..=3i64).prop_map(|(p, o, c)| Lit::Count(p, o, c)),
    ]
}

fn kind() -> impl Strategy<Value = Kind> {
    prop_oneof![
        Just(Kind::SubsetD),
        Just(Kind::SubsetE),
        Just(Kind::Permutation),
        Just(Kind::Partition),
        Just(Kind::IntFunc)
    ]
}

fn spec_desc() -> impl Strategy<Value = SpecDesc> {
    let head_term = prop_oneof![3 => (0..3usize).prop_map(Term::Var), 1 => Just(Term::Const(1))];
    let rule = (0..2usize, head_term, prop::collection::vec(lit(), 1..4))
        .prop_map(|(head_arity, head_term, body)| RuleDesc { head_arity, head_term, body });
    (
        1..=3i64,
        prop::collection::vec((1..=3i64, 1..=3i64), 1..4),
        prop::collection::vec(kind(), 1..3),
        prop::collection::vec(rule, 0..4),
        prop::collection::vec(prop::collection::vec(lit(), 1..4), 0..3),
    )
        .prop_map(|(k, mut e, metas, derived, fails)| {
            e.sort();
            e.dedup();
            SpecDesc { k, e, metas, derived, fails }
        })
}

impl SpecDesc {
    fn meta_arity(kind: Kind) -> usize {
        match kind {
            Kind::SubsetD => 1,
            _ => 2,
        }
    }

    /// Predicates visible to derived rule `i`, or to fail rules when `i` is
    /// the number of derived rules.
    fn visible(&self, i: usize) -> Vec<(String, usize)> {
        let mut out = vec![("d".to_string(), 1), ("e".to_string(), 2)];
        for (j, &m) in self.metas.iter().enumerate() {
            out.push((format!("g{j}"), Self::meta_arity(m)));
        }
        for (j, r) in self.derived.iter().enumerate().take(i) {
            out.push((format!("h{j}"), r.head_arity));
        }
        out
    }

    fn render_term(t: Term) -> String {
        match t {
            Term::Var(v) => VARS[v].to_string(),
            Term::Const(c) => c.to_string(),
        }
    }

    fn render_atom(pred: &(String, usize), args: &[Term]) -> String {
        if pred.1 == 0 {
            return pred.0.clone();
        }
        let args: Vec<String> = args[..pred.1].iter().map(|&t| Self::render_term(t)).collect();
        format!("{}({})", pred.0, args.join(","))
    }

    fn render_op(o: Op) -> &'static str {
        match o {
            Op::Lt => "<",
            Op::Le => "<=",
            Op::Eq => "==",
            Op::Ne => "!=",
        }
    }

    fn unary(vis: &[(String, usize)], p: usize) -> &(String, usize) {
        let unary: Vec<_> = vis.iter().filter(|(_, a)| *a == 1).collect();
        unary[p % unary.len()]
    }

    fn render_body(&self, vis: &[(String, usize)], body: &[Lit]) -> String {
        body.iter()
            .enumerate()
            .map(|(i, l)| match l {
                Lit::Pos(p, args) => Self::render_atom(&vis[p % vis.len()], args),
                Lit::Neg(p, args) => format!("NOT {}", Self::render_atom(&vis[p % vis.len()], args)),
                Lit::Cmp(o, a, b) => format!("{} {} {}", Self::render_term(*a), Self::render_op(*o), Self::render_term(*b)),
                Lit::Succ(a, b) => format!("{} == {} + 1", Self::render_term(*a), Self::render_term(*b)),
                Lit::Count(p, o, c) => {
                    format!("COUNT({}(*),N{i}:0..3), N{i} {} {c}", Self::unary(vis, *p).0, Self::render_op(*o))
                }
            })
            .collect::<Vec<_>>()
            .join(", ")
    }

    fn render(&self) -> String {
        let e: Vec<String> = self.e.iter().map(|(a, b)| format!("({a},{b})")).collect();
        let mut s = format!("DATABASE\n    d = {{1..{}}};\n    e = {{{}}};\nSPECIFICATION\n", self.k, e.join(","));
        for (j, m) in self.metas.iter().enumerate() {
            let line = match m {
                Kind::SubsetD => format!("Subset(d, g{j})."),
                Kind::SubsetE => format!("Subset(e, g{j})."),
                Kind::Permutation => format!("Permutation(d, g{j})."),
                Kind::Partition => format!("Partition(d, g{j}, 2)."),
                Kind::IntFunc => format!("IntFunc(d, g{j}, 0..1)."),
            };
            s.push_str(&format!("    {line}\n"));
        }
        for (i, r) in self.derived.iter().enumerate() {
            let head = Self::render_atom(&(format!("h{i}"), r.head_arity), &[r.head_term]);
            s.push_str(&format!("    {head} <-- {}.\n", self.render_body(&self.visible(i), &r.body)));
        }
        let vis = self.visible(self.derived.len());
        for f in &self.fails {
            s.push_str(&format!("    fail <-- {}.\n", self.render_body(&vis, f)));
        }
        s
    }
}

type Db = BTreeMap<String, BTreeSet<Vec<i64>>>;

/// Direct evaluation of a `SpecDesc`.
struct Brute<'a> {
    spec: &'a SpecDesc,
    universe: Vec<i64>,
}

impl Brute<'_> {
    /// Active domain: database values, guessed value ranges and constants
    /// of rendered literals. Aggregate ranges are excluded.
    fn universe(spec: &SpecDesc) -> Vec<i64> {
        let mut u: BTreeSet<i64> = (1..=spec.k).collect();
        for &(a, b) in &spec.e {
            u.extend([a, b]);
        }
        for m in &spec.metas {
            match m {
                Kind::Partition | Kind::IntFunc => u.extend([0, 1]),
                Kind::Permutation => u.extend(1..=spec.k),
                _ => {}
            }
        }
        let mut scan = |vis: &[(String, usize)], body: &[Lit]| {
            for l in body {
                let mut c = |t: &Term| {
                    if let Term::Const(c) = t {
                        u.insert(*c);
                    }
                };
                match l {
                    Lit::Pos(p, args) | Lit::Neg(p, args) => args[..vis[p % vis.len()].1].iter().for_each(&mut c),
                    Lit::Cmp(_, a, b) => {
                        c(a);
                        c(b);
                    }
                    Lit::Succ(a, b) => {
                        c(a);
                        c(b);
                        u.insert(1);
                    }
                    Lit::Count(_, _, k) => {
                        u.insert(*k);
                    }
                }
            }
        };
        for (i, r) in spec.derived.iter().enumerate() {
            scan(&spec.visible(i), &r.body);
        }
        for f in &spec.fails {
            scan(&spec.visible(spec.derived.len()), f);
        }
        for r in &spec.derived {
            if let (1, Term::Const(c)) = (r.head_arity, r.head_term) {
                u.insert(c);
            }
        }
        u.into_iter().collect()
    }

    fn guesses(&self) -> Vec<Vec<BTreeSet<Vec<i64>>>> {
        let d: Vec<i64> = (1..=self.spec.k).collect();
        let mut all = vec![Vec::new()];
        for m in &self.spec.metas {
            let exts: Vec<BTreeSet<Vec<i64>>> = match m {
                Kind::SubsetD => subsets(&d.iter().map(|&x| vec![x]).collect::<Vec<_>>()),
                Kind::SubsetE => subsets(&self.spec.e.iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>()),
                Kind::Permutation => {
                    let mut out = Vec::new();
                    let mut p: Vec<i64> = d.clone();
                    heap_perms(&mut p, d.len(), &mut |p| {
                        out.push(d.iter().zip(p).map(|(&x, &pos)| vec![x, pos]).collect());
                    });
                    out
                }
                Kind::Partition | Kind::IntFunc => (0..1u32 << d.len())
                    .map(|bits| d.iter().enumerate().map(|(i, &x)| vec![x, (bits >> i & 1) as i64]).collect())
                    .collect(),
            };
            all = all
                .into_iter()
                .flat_map(|prefix| {
                    exts.iter().map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x.clone());
                        p
                    })
                })
                .collect();
        }
        all
    }

    fn holds(&self, db: &Db, vis: &[(String, usize)], body: &[Lit], env: &[i64; 3]) -> bool {
        let val = |t: &Term| match *t {
            Term::Var(v) => env[v],
            Term::Const(c) => c,
        };
        let cmp = |o: Op, a: i64, b: i64| match o {
            Op::Lt => a < b,
            Op::Le => a <= b,
            Op::Eq => a == b,
            Op::Ne => a != b,
        };
        body.iter().all(|l| match l {
            Lit::Pos(p, args) | Lit::Neg(p, args) => {
                let (name, arity) = &vis[p % vis.len()];
                let t: Vec<i64> = args[..*arity].iter().map(val).collect();
                db[name].contains(&t) == matches!(l, Lit::Pos(..))
            }
            Lit::Cmp(o, a, b) => cmp(*o, val(a), val(b)),
            Lit::Succ(a, b) => val(a) == val(b) + 1,
            Lit::Count(p, o, c) => {
                let n = db[&SpecDesc::unary(vis, *p).0].len() as i64;
                (0..=3).contains(&n) && cmp(*o, n, *c)
            }
        })
    }

    fn envs(&self) -> Vec<[i64; 3]> {
        let u = &self.universe;
        let mut out = Vec::new();
        for &x in u {
            for &y in u {
                for &z in u {
                    out.push([x, y, z]);
                }
            }
        }
        out
    }

    fn answers(&self) -> BTreeSet<BTreeSet<String>> {
        let spec = self.spec;
        let envs = self.envs();
        let mut out = BTreeSet::new();
        for guess in self.guesses() {
            let mut db: Db = BTreeMap::new();
            db.insert("d".into(), (1..=spec.k).map(|x| vec![x]).collect());
            db.insert("e".into(), spec.e.iter().map(|&(a, b)| vec![a, b]).collect());
            for (j, ext) in guess.into_iter().enumerate() {
                db.insert(format!("g{j}"), ext);
            }
            for (i, r) in spec.derived.iter().enumerate() {
                let vis = spec.visible(i);
                let mut ext = BTreeSet::new();
                for env in &envs {
                    if self.holds(&db, &vis, &r.body, env) {
                        ext.insert(match (r.head_arity, r.head_term) {
                            (0, _) => vec![],
                            (_, Term::Var(v)) => vec![env[v]],
                            (_, Term::Const(c)) => vec![c],
                        });
                    }
                }
                db.insert(format!("h{i}"), ext);
            }
            let vis = spec.visible(spec.derived.len());
            if spec.fails.iter().any(|f| envs.iter().any(|env| self.holds(&db, &vis, f, env))) {
                continue;
            }
            let mut answer = BTreeSet::new();
            for (name, ext) in &db {
                if name == "d" || name == "e" {
                    continue;
                }
                for t in ext {
                    let args: Vec<String> = t.iter().map(i64::to_string).collect();
                    answer.insert(if t.is_empty() { name.clone() } else { format!("{name}({})", args.join(",")) });
                }
            }
            out.insert(answer);
        }
        out
    }
}

fn subsets(items: &[Vec<i64>]) -> Vec<BTreeSet<Vec<i64>>> {
    (0..1u32 << items.len())
        .map(|bits| items.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, t)| t.clone()).collect())
        .collect()
}

fn heap_perms(p: &mut Vec<i64>, k: usize, f: &mut impl FnMut(&[i64])) {
    if k <= 1 {
        f(p);
        return;
    }
    for i in 0..k {
        heap_perms(p, k - 1, f);
        if k.is_multiple_of(2) {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
    }
}

fn config() -> ProptestConfig {
    ProptestConfig { failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn generated_specs_are_accepted(desc in spec_desc()) {
        let text = desc.render();
        let spec = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        analyze(&spec).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
    }

    #[test]
    fn pretty_print_is_a_fixpoint(desc in spec_desc()) {
        let printed = pretty_print(&parse(&desc.render()).unwrap());
        prop_assert_eq!(pretty_print(&parse(&printed).unwrap()), printed);
    }

    #[test]
    fn translations_are_safe_and_deterministic(desc in spec_desc()) {
        let analysis = analyze(&parse(&desc.render()).unwrap()).unwrap();
        for opts in EmitOptions::combinations() {
            let Ok(program) = translate(&analysis, &opts) else { continue };
            prop_assert_eq!(unsafe_variables(&program), vec![], "{}", opts);
            prop_assert_eq!(Ok(program), translate(&analysis, &opts));
        }
    }

    #[test]
    fn guess_enumeration_matches_the_count(desc in spec_desc()) {
        let analysis = analyze(&parse(&desc.render()).unwrap()).unwrap();
        let space = GuessSpace::new(&analysis);
        let mut n = 0u64;
        for g in enumerate_guesses(&space, u64::MAX).unwrap() {
            n += 1;
            for (slot, rel) in space.slots.iter().zip(&g.relations) {
                if slot.kind == npspec::frontend::MetafactKind::Permutation {
                    let positions: BTreeSet<_> = rel.iter().map(|t| t[t.len() - 1].clone()).collect();
                    let expected: BTreeSet<_> = (1..=slot.domain.len() as i64).map(Value::Int).collect();
                    prop_assert_eq!(rel.len(), slot.domain.len());
                    prop_assert_eq!(positions, expected);
                }
            }
        }
        prop_assert_eq!(num_bigint::BigUint::from(n), space.count());
    }

    #[test]
    fn answers_match_direct_evaluation(desc in spec_desc()) {
        let analysis = analyze(&parse(&desc.render()).unwrap()).unwrap();
        let ours: BTreeSet<BTreeSet<String>> = solve(&analysis, SolveMode::All, u64::MAX)
            .unwrap()
            .answers
            .iter()
            .map(|a| a.atoms.iter().map(ToString::to_string).collect())
            .collect();
        let brute = Brute { spec: &desc, universe: Brute::universe(&desc) };
        prop_assert_eq!(ours, brute.answers(), "{}", desc.render());
    }

    #[test]
    fn cross_check_never_fails(desc in spec_desc()) {
        let analysis = analyze(&parse(&desc.render()).unwrap()).unwrap();
        let report = cross_check(&analysis, &EmitOptions::combinations(), &CheckLimits::default()).unwrap();
        for r in &report.results {
            prop_assert!(!matches!(r.verdict, Verdict::Fail(_)), "{}\n{}", r, desc.render());
        }
    }
}
