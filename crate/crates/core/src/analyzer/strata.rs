use std::collections::{BTreeMap, BTreeSet};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::diagnostics::Pos;
use crate::frontend::*;

use super::{AnalysisError, AnalysisErrorKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Positive,
    Negative,
    Aggregate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratificationReport {
    /// Derived predicates grouped bottom-up; names sorted within a stratum.
    /// There is always at least one (possibly empty) stratum.
    pub strata: Vec<Vec<String>>,
    /// Dependency edges `(body predicate, head predicate, kind)` between
    /// derived predicates, sorted.
    pub edges: Vec<(String, String, EdgeKind)>,
}

impl StratificationReport {
    pub fn stratum_of(&self, pred: &str) -> Option<usize> {
        self.strata.iter().position(|s| s.iter().any(|p| p == pred))
    }
}

/// Builds the predicate dependency graph over derived predicates and
/// layers it. Negative and aggregate edges must not lie on a cycle.
pub fn check_stratified(spec: &Spec) -> Result<StratificationReport, AnalysisError> {
    let derived: BTreeSet<&str> = spec
        .rules
        .iter()
        .filter_map(|r| match &r.head {
            Head::Atom(a) => Some(a.pred.as_str()),
            Head::Fail => None,
        })
        .collect();

    let mut edges: BTreeMap<(String, String), (EdgeKind, Pos)> = BTreeMap::new();
    for r in &spec.rules {
        let Head::Atom(h) = &r.head else { continue };
        for e in &r.body {
            let (p, kind) = match e {
                BodyElem::Pos(a) => (&a.pred, EdgeKind::Positive),
                BodyElem::Neg(a) => (&a.pred, EdgeKind::Negative),
                BodyElem::Aggregate(g) => (&g.pred, EdgeKind::Aggregate),
                BodyElem::Builtin(..) => continue,
            };
            if !derived.contains(p.as_str()) {
                continue;
            }
            let entry = edges.entry((p.clone(), h.pred.clone())).or_insert((kind, r.pos));
            // keep the strongest label for the stratification test
            if kind > entry.0 {
                *entry = (kind, r.pos);
            }
        }
    }

    let mut graph = DiGraph::<&str, EdgeKind>::new();
    let nodes: BTreeMap<&str, NodeIndex> = derived.iter().map(|&p| (p, graph.add_node(p))).collect();
    for ((from, to), (kind, _)) in &edges {
        graph.add_edge(nodes[from.as_str()], nodes[to.as_str()], *kind);
    }

    let sccs = tarjan_scc(&graph);
    let mut component = vec![0usize; graph.node_count()];
    for (i, scc) in sccs.iter().enumerate() {
        for n in scc {
            component[n.index()] = i;
        }
    }
    for ((from, to), (kind, pos)) in &edges {
        let (a, b) = (nodes[from.as_str()], nodes[to.as_str()]);
        if *kind != EdgeKind::Positive && component[a.index()] == component[b.index()] {
            let mut cycle: Vec<String> =
                sccs[component[a.index()]].iter().map(|n| graph[*n].to_string()).collect();
            cycle.sort();
            return Err(AnalysisError::new(AnalysisErrorKind::NotStratified { cycle }, *pos));
        }
    }

    // tarjan_scc yields components in reverse topological order
    let mut level = vec![0usize; sccs.len()];
    for i in (0..sccs.len()).rev() {
        for n in &sccs[i] {
            for e in graph.edges_directed(*n, petgraph::Direction::Incoming) {
                use petgraph::visit::EdgeRef;
                let src = component[e.source().index()];
                if src == i {
                    continue;
                }
                let step = usize::from(*e.weight() != EdgeKind::Positive);
                level[i] = level[i].max(level[src] + step);
            }
        }
    }

    let height = level.iter().max().map_or(1, |m| m + 1);
    let mut strata = vec![Vec::new(); height];
    for (&p, n) in &nodes {
        strata[level[component[n.index()]]].push(p.to_string());
    }
    for s in &mut strata {
        s.sort();
    }
    Ok(StratificationReport {
        strata,
        edges: edges.into_iter().map(|((f, t), (k, _))| (f, t, k)).collect(),
    })
}
