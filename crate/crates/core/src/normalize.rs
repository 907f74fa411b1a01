//! Argument reordering by ordered profile, and profile-level comparison of
//! predicates.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::analysis::{AnalysisError, Environment};
use crate::domain::canon_argument_profile;
use crate::frontend::{AtomKind, Predicate, Program};
use crate::ordering::ProfileOrder;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalizeError {
    #[error("no permutation planned for predicate `{0}`")]
    MissingPlan(String),
    #[error("permutation {perm:?} for `{pred}` is not a bijection on 1..{arity}")]
    NotAPermutation {
        pred: String,
        perm: Vec<usize>,
        arity: usize,
    },
}

/// For each predicate, `perm[new] = original` (1-based).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NormalizationPlan {
    pub perms: BTreeMap<String, Vec<usize>>,
}

impl NormalizationPlan {
    pub fn identity(program: &Program) -> Self {
        NormalizationPlan {
            perms: program
                .predicates
                .values()
                .map(|p| (p.name.clone(), (1..=p.arity()).collect()))
                .collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.perms
            .values()
            .all(|p| p.iter().enumerate().all(|(i, &o)| o == i + 1))
    }

    pub fn get(&self, pred: &str) -> Option<&[usize]> {
        self.perms.get(pred).map(Vec::as_slice)
    }

    /// `name: (p1,...,pn)` per predicate, in name order.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (name, perm) in &self.perms {
            let parts: Vec<_> = perm.iter().map(|p| p.to_string()).collect();
            out.push_str(&format!("{name}: ({})\n", parts.join(",")));
        }
        out
    }
}

/// The permutation of every predicate's ordered profile.
pub fn plan<O: ProfileOrder + ?Sized>(
    program: &Program,
    env: &Environment,
    order: &O,
) -> Result<NormalizationPlan, AnalysisError> {
    let mut perms = BTreeMap::new();
    for pred in program.predicates.values() {
        perms.insert(
            pred.name.clone(),
            env.ordered_profile(pred, order)?.permutation,
        );
    }
    Ok(NormalizationPlan { perms })
}

fn permute<T: Clone>(xs: &[T], perm: &[usize]) -> Vec<T> {
    perm.iter().map(|&o| xs[o - 1].clone()).collect()
}

fn check(pred: &Predicate, perm: &[usize]) -> Result<(), NormalizeError> {
    let mut seen = vec![false; pred.arity()];
    let ok = perm.len() == pred.arity()
        && perm.iter().all(|&o| {
            (1..=pred.arity()).contains(&o) && !std::mem::replace(&mut seen[o - 1], true)
        });
    if ok {
        Ok(())
    } else {
        Err(NormalizeError::NotAPermutation {
            pred: pred.name.clone(),
            perm: perm.to_vec(),
            arity: pred.arity(),
        })
    }
}

/// Permutes heads, mode declarations and call sites according to `plan`.
/// Body atom order and variable names are left alone.
pub fn rewrite(program: &Program, plan: &NormalizationPlan) -> Result<Program, NormalizeError> {
    for pred in program.predicates.values() {
        let perm = plan
            .get(&pred.name)
            .ok_or_else(|| NormalizeError::MissingPlan(pred.name.clone()))?;
        check(pred, perm)?;
    }
    let mut out = program.clone();
    for pred in out.predicates.values_mut() {
        let perm = &plan.perms[&pred.name];
        pred.params = permute(&pred.params, perm);
        pred.modes = permute(&pred.modes, perm);
        for clause in &mut pred.clauses {
            for atom in &mut clause.body {
                if let AtomKind::Call { pred: callee, args } = &mut atom.kind {
                    *args = permute(args, &plan.perms[callee.as_str()]);
                }
            }
        }
    }
    out.renumber();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison {
    /// Ordered profiles are canonically equal. `mapping` pairs 1-based
    /// original positions of the first predicate with those of the second.
    Equivalent {
        mapping: Vec<(usize, usize)>,
    },
    Distinct {
        reason: String,
    },
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Comparison::Equivalent { mapping } => {
                let parts: Vec<_> = mapping.iter().map(|(a, b)| format!("{a}<->{b}")).collect();
                write!(f, "profile-equivalent: {}", parts.join(", "))
            }
            Comparison::Distinct { reason } => write!(f, "distinct: {reason}"),
        }
    }
}

/// Profile-level equivalence modulo argument permutation. Equal ordered
/// profiles are necessary for two predicates to be permutation clones, not
/// sufficient.
pub fn compare<O: ProfileOrder + ?Sized>(
    p: &Predicate,
    q: &Predicate,
    env: &Environment,
    order: &O,
) -> Result<Comparison, AnalysisError> {
    if p.arity() != q.arity() {
        return Ok(Comparison::Distinct {
            reason: format!(
                "arity mismatch: {}/{} vs {}/{}",
                p.name,
                p.arity(),
                q.name,
                q.arity()
            ),
        });
    }
    let a = env.ordered_profile(p, order)?;
    let b = env.ordered_profile(q, order)?;
    for (k, (x, y)) in a.profiles.iter().zip(&b.profiles).enumerate() {
        let (cx, cy) = (canon_argument_profile(x), canon_argument_profile(y));
        if cx != cy {
            return Ok(Comparison::Distinct {
                reason: format!("ordered position {}: {cx} vs {cy}", k + 1),
            });
        }
    }
    let mut mapping: Vec<(usize, usize)> = a
        .permutation
        .iter()
        .copied()
        .zip(b.permutation.iter().copied())
        .collect();
    mapping.sort();
    Ok(Comparison::Equivalent { mapping })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::run_analysis;
    use crate::frontend::{parse_program, print_program};
    use crate::ordering::FeatureOrder;

    fn fixture() -> Program {
        parse_program(include_str!("../tests/fixtures/app_concat_dapp.mpl")).unwrap()
    }

    #[test]
    fn plan_for_fixture() {
        let p = fixture();
        let res = run_analysis(&p, &FeatureOrder).unwrap();
        let plan = plan(&p, &res.env, &FeatureOrder).unwrap();
        assert_eq!(plan.get("app"), Some(&[1, 2, 3][..]));
        assert_eq!(plan.get("concat"), Some(&[2, 3, 1][..]));
        assert_eq!(plan.get("dapp"), Some(&[1, 2, 3, 4][..]));
    }

    #[test]
    fn rewrite_permutes_call_sites() {
        let p = fixture();
        let res = run_analysis(&p, &FeatureOrder).unwrap();
        let plan = plan(&p, &res.env, &FeatureOrder).unwrap();
        let out = print_program(&rewrite(&p, &plan).unwrap());
        assert!(out.contains(":- pred concat(in, in, out)."));
        assert!(out.contains("concat(B, C, A) :- B => nil, A := C."));
        assert!(out.contains("concat(Is, C, As)"));
        assert!(out.contains("concat(L12, L3, L4)"));
        assert!(out.contains("app(X, Y, Z) :- X => nil, Z := Y."));
    }

    #[test]
    fn identity_rewrite() {
        let p = fixture();
        let r = rewrite(&p, &NormalizationPlan::identity(&p)).unwrap();
        assert_eq!(r, p);
    }

    #[test]
    fn missing_and_bad_plans() {
        let p = fixture();
        let mut plan = NormalizationPlan::identity(&p);
        plan.perms.remove("dapp");
        assert_eq!(
            rewrite(&p, &plan).unwrap_err(),
            NormalizeError::MissingPlan("dapp".into())
        );
        let mut plan = NormalizationPlan::identity(&p);
        plan.perms.insert("app".into(), vec![1, 1, 3]);
        assert!(matches!(
            rewrite(&p, &plan).unwrap_err(),
            NormalizeError::NotAPermutation { .. }
        ));
    }

    #[test]
    fn compare_examples() {
        let p = fixture();
        let res = run_analysis(&p, &FeatureOrder).unwrap();
        let get = |n| p.predicate(n).unwrap();
        assert_eq!(
            compare(get("app"), get("concat"), &res.env, &FeatureOrder).unwrap(),
            Comparison::Equivalent {
                mapping: vec![(1, 2), (2, 3), (3, 1)]
            }
        );
        assert_eq!(
            compare(get("app"), get("app"), &res.env, &FeatureOrder).unwrap(),
            Comparison::Equivalent {
                mapping: vec![(1, 1), (2, 2), (3, 3)]
            }
        );
        let d = compare(get("app"), get("dapp"), &res.env, &FeatureOrder).unwrap();
        assert!(matches!(d, Comparison::Distinct { ref reason } if reason.contains("arity")));
    }
}
