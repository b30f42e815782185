use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::frontend::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SafetyReason {
    HeadOnly,
    BuiltinOnly,
    NegatedOnly,
    AggregateResult,
}

impl fmt::Display for SafetyReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SafetyReason::HeadOnly => "head-only",
            SafetyReason::BuiltinOnly => "builtin-only",
            SafetyReason::NegatedOnly => "negated-only",
            SafetyReason::AggregateResult => "aggregate-result",
        })
    }
}

/// A rule variable that no positive, non-builtin body atom binds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SafetyObligation {
    pub rule: usize,
    pub variable: String,
    pub reason: SafetyReason,
}

pub fn check_safety(spec: &Spec) -> Vec<SafetyObligation> {
    spec.rules.iter().enumerate().flat_map(|(i, r)| rule_obligations(r, i)).collect()
}

pub fn rule_obligations(rule: &Rule, index: usize) -> Vec<SafetyObligation> {
    let mut bound = BTreeSet::new();
    let mut in_builtin = BTreeSet::new();
    let mut in_neg = BTreeSet::new();
    let mut results = BTreeSet::new();
    for e in &rule.body {
        match e {
            BodyElem::Pos(a) => {
                for t in &a.args {
                    match t {
                        Term::Var(v) => {
                            bound.insert(v.as_str());
                        }
                        t if t.is_arith() => {
                            let mut vs = Vec::new();
                            t.vars(&mut vs);
                            in_builtin.extend(vs);
                        }
                        _ => {}
                    }
                }
            }
            BodyElem::Neg(a) => {
                let mut vs = Vec::new();
                a.args.iter().for_each(|t| t.vars(&mut vs));
                in_neg.extend(vs);
            }
            BodyElem::Builtin(_, l, r) => {
                let mut vs = Vec::new();
                l.vars(&mut vs);
                r.vars(&mut vs);
                in_builtin.extend(vs);
            }
            BodyElem::Aggregate(g) => {
                results.insert(g.result.as_str());
            }
        }
    }
    rule.variables()
        .into_iter()
        .filter(|v| !bound.contains(v.as_str()))
        .map(|v| {
            let reason = if results.contains(v.as_str()) {
                SafetyReason::AggregateResult
            } else if in_builtin.contains(v.as_str()) {
                SafetyReason::BuiltinOnly
            } else if in_neg.contains(v.as_str()) {
                SafetyReason::NegatedOnly
            } else {
                SafetyReason::HeadOnly
            };
            SafetyObligation { rule: index, variable: v, reason }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obligations(src: &str) -> Vec<(String, SafetyReason)> {
        check_safety(&parse(src).unwrap()).into_iter().map(|o| (o.variable, o.reason)).collect()
    }

    #[test]
    fn hamiltonian_constraint_is_safe() {
        assert!(obligations("DATABASE e = {(1,2)}; SPECIFICATION fail <-- path(X,P), path(Y,P+1), NOT e(X,Y).").is_empty());
    }

    #[test]
    fn negated_only() {
        assert_eq!(
            obligations("DATABASE p = {1}; SPECIFICATION fail <-- NOT p(X)."),
            vec![("X".to_string(), SafetyReason::NegatedOnly)]
        );
    }

    #[test]
    fn builtin_only() {
        assert_eq!(
            obligations("DATABASE p = {1}; SPECIFICATION q(Y) <-- p(X), Y == X + 1."),
            vec![("Y".to_string(), SafetyReason::BuiltinOnly)]
        );
    }

    #[test]
    fn head_only_and_aggregate_result() {
        assert_eq!(
            obligations("DATABASE p = {1}; SPECIFICATION q(X,Z) <-- COUNT(p(*),Z:0..3)."),
            vec![("X".to_string(), SafetyReason::HeadOnly), ("Z".to_string(), SafetyReason::AggregateResult)]
        );
    }

    #[test]
    fn aggregate_local_variables_need_no_binding() {
        assert!(obligations("DATABASE p = {(1,2)}; SPECIFICATION fail <-- p(_,Y), SUM(p(*,W),Z:0..3), Z > Y.")
            .iter()
            .all(|(v, _)| v == "Z"));
    }
}
