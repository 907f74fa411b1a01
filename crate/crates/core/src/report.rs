//! Serializable summary of an analysis run.

use serde::Serialize;

use crate::analysis::{AnalysisError, AnalysisResult};
use crate::domain::{canon_op, strip_points, ArgumentProfile};
use crate::frontend::Program;
use crate::ordering::ProfileOrder;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OSetReport {
    pub ops: Vec<String>,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArgReport {
    pub arg: usize,
    pub osets: Vec<OSetReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SitedOpReport {
    pub op: String,
    pub point: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InteractionReport {
    pub source: String,
    pub target: String,
    pub ops: Vec<SitedOpReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundsReport {
    pub total: usize,
    pub changing: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredicateReport {
    pub name: String,
    pub arity: usize,
    pub modes: Vec<String>,
    pub interactions: Vec<InteractionReport>,
    pub profile: Vec<ArgReport>,
    pub ordered: Vec<ArgReport>,
    pub permutation: Vec<usize>,
    pub rounds: RoundsReport,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ProfileReport {
    pub predicates: Vec<PredicateReport>,
}

fn args(profiles: &[ArgumentProfile]) -> Vec<ArgReport> {
    profiles
        .iter()
        .enumerate()
        .map(|(i, a)| ArgReport {
            arg: i + 1,
            osets: a
                .osets()
                .iter()
                .map(|o| {
                    let mut ops: Vec<String> = o.ops.iter().map(canon_op).collect();
                    ops.sort();
                    OSetReport {
                        ops,
                        target: o.target,
                    }
                })
                .collect(),
        })
        .collect()
}

fn canon_args(args: &[ArgReport]) -> String {
    let parts: Vec<String> = args
        .iter()
        .map(|a| {
            let osets: Vec<String> = a
                .osets
                .iter()
                .map(|o| format!("({{{}}},{})", o.ops.join(","), o.target))
                .collect();
            format!("{{{}}}", osets.join(","))
        })
        .collect();
    format!("[{}]", parts.join(";"))
}

impl ProfileReport {
    /// One entry per predicate, in program order.
    pub fn build<O: ProfileOrder + ?Sized>(
        program: &Program,
        result: &AnalysisResult,
        order: &O,
    ) -> Result<Self, AnalysisError> {
        let mut predicates = Vec::new();
        for pred in program.predicates.values() {
            let set = result
                .env
                .get(&pred.name)
                .ok_or_else(|| AnalysisError::UnknownPredicate(pred.name.clone()))?;
            let profile = strip_points(set, &pred.params, &pred.modes)?;
            let ordered = result.env.ordered_profile(pred, order)?;
            predicates.push(PredicateReport {
                name: pred.name.clone(),
                arity: pred.arity(),
                modes: pred.modes.iter().map(|m| m.as_str().to_owned()).collect(),
                interactions: set
                    .iter()
                    .map(|(s, t, ops)| InteractionReport {
                        source: s.to_string(),
                        target: t.to_string(),
                        ops: ops
                            .iter()
                            .map(|(p, op)| SitedOpReport {
                                op: canon_op(op),
                                point: *p,
                            })
                            .collect(),
                    })
                    .collect(),
                profile: args(&profile.per_arg),
                ordered: args(&ordered.profiles),
                permutation: ordered.permutation,
                rounds: RoundsReport {
                    total: result.trace.total_rounds(&pred.name),
                    changing: result.trace.changing_rounds(&pred.name),
                },
            });
        }
        Ok(ProfileReport { predicates })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable rendering of the same data as [`Self::to_json`].
    pub fn render(&self) -> String {
        let mut out = String::new();
        for p in &self.predicates {
            out.push_str(&format!(
                "{}/{} ({})\n",
                p.name,
                p.arity,
                p.modes.join(", ")
            ));
            out.push_str("  interactions:\n");
            for i in &p.interactions {
                let ops: Vec<String> = i
                    .ops
                    .iter()
                    .map(|o| format!("{}@{}", o.op, o.point))
                    .collect();
                out.push_str(&format!(
                    "    {} -> {} {{{}}}\n",
                    i.source,
                    i.target,
                    ops.join(", ")
                ));
            }
            out.push_str(&format!("  profile: {}\n", canon_args(&p.profile)));
            out.push_str(&format!("  ordered: {}\n", canon_args(&p.ordered)));
            let perm: Vec<String> = p.permutation.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("  permutation: ({})\n", perm.join(",")));
            out.push_str(&format!(
                "  rounds: {} ({} changing)\n",
                p.rounds.total, p.rounds.changing
            ));
        }
        out
    }
}

/// Canonical text of a report entry's ordered profile, identical to the
/// ordering module's serialization.
pub fn ordered_canonical(p: &PredicateReport) -> String {
    canon_args(&p.ordered)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::run_analysis;
    use crate::frontend::parse_program;
    use crate::ordering::FeatureOrder;

    fn report() -> ProfileReport {
        let p = parse_program(include_str!("../tests/fixtures/app_concat_dapp.mpl")).unwrap();
        let r = run_analysis(&p, &FeatureOrder).unwrap();
        ProfileReport::build(&p, &r, &FeatureOrder).unwrap()
    }

    #[test]
    fn text_and_json_agree() {
        let r = report();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let preds = v["predicates"].as_array().unwrap();
        assert_eq!(preds.len(), 3);
        assert_eq!(preds[1]["name"], "concat");
        assert_eq!(preds[1]["permutation"], serde_json::json!([2, 3, 1]));
        assert_eq!(preds[0]["modes"], serde_json::json!(["in", "in", "out"]));
        assert!(r.render().contains("concat/3 (out, in, in)"));
        assert!(r.render().contains("  permutation: (2,3,1)"));
    }

    #[test]
    fn canonical_forms_agree() {
        let p = parse_program(include_str!("../tests/fixtures/app_concat_dapp.mpl")).unwrap();
        let r = run_analysis(&p, &FeatureOrder).unwrap();
        for (entry, pred) in report().predicates.iter().zip(p.predicates.values()) {
            let o = r.env.ordered_profile(pred, &FeatureOrder).unwrap();
            assert_eq!(ordered_canonical(entry), o.canonical());
        }
    }

    #[test]
    fn empty_program() {
        let p = parse_program("").unwrap();
        let r = run_analysis(&p, &FeatureOrder).unwrap();
        let rep = ProfileReport::build(&p, &r, &FeatureOrder).unwrap();
        assert!(rep.predicates.is_empty());
        assert_eq!(rep.render(), "");
    }
}
