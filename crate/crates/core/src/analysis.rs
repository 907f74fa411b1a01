//! Bottom-up fixpoint computation of interaction sets.
//!
//! Predicates are analysed one at a time, callees first. A predicate is
//! re-analysed against the current environment until its interaction set
//! stops changing; callees are already final at that point, so every call to
//! them contributes a fixed ψ operation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use thiserror::Error;

use crate::domain::{DomainError, Interaction, InteractionSet, Operation, Owner, SitedOps};
use crate::frontend::{Atom, AtomKind, CallGraph, Mode, Predicate, Program, Var};
use crate::ordering::{oprof_of_set, OrderedProfile, ProfileOrder};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("predicate `{0}` has no entry in the environment")]
    UnknownPredicate(String),
    #[error("predicates {0:?} are not directly recursive; no analysis order exists")]
    NonDirectRecursion(BTreeSet<String>),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// Maps each predicate to its current interaction set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Environment {
    sets: BTreeMap<String, InteractionSet>,
}

impl Environment {
    /// Every predicate mapped to the empty set.
    pub fn bottom(program: &Program) -> Self {
        Environment {
            sets: program
                .predicates
                .values()
                .map(|p| (p.name.clone(), InteractionSet::empty(Owner::of(p))))
                .collect(),
        }
    }

    pub fn get(&self, pred: &str) -> Option<&InteractionSet> {
        self.sets.get(pred)
    }

    pub fn set(&mut self, pred: &str, s: InteractionSet) {
        self.sets.insert(pred.to_owned(), s);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &InteractionSet)> {
        self.sets.iter()
    }

    pub fn ordered_profile<O: ProfileOrder + ?Sized>(
        &self,
        pred: &Predicate,
        order: &O,
    ) -> Result<OrderedProfile, AnalysisError> {
        let set = self
            .get(&pred.name)
            .ok_or_else(|| AnalysisError::UnknownPredicate(pred.name.clone()))?;
        Ok(oprof_of_set(set, &pred.params, &pred.modes, order)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    /// 1-based count of predicate analyses over the whole run.
    pub round: usize,
    pub pred: String,
    pub snapshot: InteractionSet,
    pub changed: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnalysisTrace {
    pub entries: Vec<TraceEntry>,
}

impl AnalysisTrace {
    pub fn for_pred<'a>(&'a self, pred: &'a str) -> impl Iterator<Item = &'a TraceEntry> + 'a {
        self.entries.iter().filter(move |e| e.pred == pred)
    }

    /// Rounds that changed the predicate's interaction set.
    pub fn changing_rounds(&self, pred: &str) -> usize {
        self.for_pred(pred).filter(|e| e.changed).count()
    }

    pub fn total_rounds(&self, pred: &str) -> usize {
        self.for_pred(pred).count()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = writeln!(
                out,
                "round={} pred={} interactions={} changed={}",
                e.round,
                e.pred,
                e.snapshot.len(),
                e.changed
            );
            for line in e.snapshot.canonical().lines() {
                let _ = writeln!(out, "  {line}");
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisResult {
    pub env: Environment,
    pub trace: AnalysisTrace,
    /// Order in which predicates were discharged.
    pub order: Vec<String>,
}

fn rename(
    set: &InteractionSet,
    callee: &Predicate,
    actuals: &[Var],
) -> Result<Vec<Interaction>, DomainError> {
    let actual_of = |v: &Var| {
        callee
            .position(v)
            .map(|i| actuals[i].clone())
            .ok_or_else(|| DomainError::NotAnArgument(v.clone()))
    };
    let mut out = Vec::new();
    for (s, t, ops) in set.iter() {
        let (s, t) = (actual_of(s)?, actual_of(t)?);
        // Aliased actuals collapse an interaction onto one variable.
        if s != t {
            out.push(Interaction::new(s, t, ops.clone()));
        }
    }
    Ok(out)
}

/// The interactions contributed by a single body atom of `owner`.
pub fn analyze_atom<O: ProfileOrder + ?Sized>(
    atom: &Atom,
    owner: &Predicate,
    env: &Environment,
    program: &Program,
    order: &O,
) -> Result<InteractionSet, AnalysisError> {
    let mut out = InteractionSet::empty(Owner::of(owner));
    let pt = atom.point;
    match &atom.kind {
        AtomKind::Deconstruct { var, functor, args } => {
            let op = Operation::deconstruct(functor, args.len());
            for y in args {
                out.insert(Interaction::single(var, y, op.clone(), pt))?;
            }
        }
        AtomKind::Construct { var, functor, args } => {
            let op = Operation::construct(functor, args.len());
            for y in args {
                out.insert(Interaction::single(y, var, op.clone(), pt))?;
            }
        }
        AtomKind::Assign { target, source } => {
            out.insert(Interaction::single(source, target, Operation::Assign, pt))?;
        }
        AtomKind::Test(..) => {}
        AtomKind::Call { pred, args } => {
            let callee = program
                .predicate(pred)
                .ok_or_else(|| AnalysisError::UnknownPredicate(pred.clone()))?;
            let callee_set = env
                .get(pred)
                .ok_or_else(|| AnalysisError::UnknownPredicate(pred.clone()))?;
            for i in rename(callee_set, callee, args)? {
                out.insert(i)?;
            }
            let op = if *pred == owner.name {
                Operation::PsiBot
            } else {
                Operation::Psi(env.ordered_profile(callee, order)?.psi())
            };
            let (ins, outs): (Vec<_>, Vec<_>) = args
                .iter()
                .zip(&callee.modes)
                .partition(|(_, m)| **m == Mode::In);
            for (yi, _) in &ins {
                for (yj, _) in &outs {
                    if yi != yj {
                        out.insert(Interaction::single(yi, yj, op.clone(), pt))?;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Least fixpoint of adding `X -> Z` labelled `O ∪ O'` for every chain
/// `X -O-> Y -O'-> Z` over pairwise distinct variables.
pub fn transitive_closure(s: &InteractionSet) -> Result<InteractionSet, DomainError> {
    let mut out = s.clone();
    loop {
        let mut by_source: BTreeMap<&Var, Vec<(&Var, &SitedOps)>> = BTreeMap::new();
        for (a, b, ops) in out.iter() {
            by_source.entry(a).or_default().push((b, ops));
        }
        let mut new = Vec::new();
        for (x, y, o1) in out.iter() {
            for (z, o2) in by_source.get(y).map(Vec::as_slice).unwrap_or_default() {
                if x == *z {
                    continue;
                }
                let mut ops = o1.clone();
                ops.extend(o2.iter().map(|(p, o)| (*p, o.clone())));
                new.push(Interaction::new(x.clone(), (*z).clone(), ops));
            }
        }
        let mut changed = false;
        for i in new {
            changed |= out.insert(i)?;
        }
        if !changed {
            return Ok(out);
        }
    }
}

/// The closure of `s` restricted to interactions between formal arguments
/// of `pred`.
pub fn project(s: &InteractionSet, pred: &Predicate) -> Result<InteractionSet, DomainError> {
    let mut out = transitive_closure(s)?;
    out.retain(|a, b| pred.is_param(a) && pred.is_param(b));
    Ok(out)
}

/// Joins, over all clauses, the projection of the joined atom results.
pub fn analyze_predicate<O: ProfileOrder + ?Sized>(
    pred: &Predicate,
    env: &Environment,
    program: &Program,
    order: &O,
) -> Result<InteractionSet, AnalysisError> {
    let owner = Owner::of(pred);
    let mut result = InteractionSet::empty(owner.clone());
    for clause in &pred.clauses {
        let mut body = InteractionSet::empty(owner.clone());
        for atom in &clause.body {
            body.join_with(&analyze_atom(atom, pred, env, program, order)?)?;
        }
        result.join_with(&project(&body, pred)?)?;
    }
    Ok(result)
}

/// Predicates of `remaining` whose callees are all themselves or analysed.
pub fn leafs(
    remaining: &BTreeSet<String>,
    analyzed: &BTreeSet<String>,
    call_graph: &CallGraph,
) -> BTreeSet<String> {
    remaining
        .iter()
        .filter(|p| {
            call_graph
                .get(*p)
                .is_none_or(|callees| callees.iter().all(|q| q == *p || analyzed.contains(q)))
        })
        .cloned()
        .collect()
}

/// Analyses every predicate bottom-up in the call graph. Among eligible
/// predicates the lexicographically smallest name goes first.
pub fn run_analysis<O: ProfileOrder + ?Sized>(
    program: &Program,
    order: &O,
) -> Result<AnalysisResult, AnalysisError> {
    let mut env = Environment::bottom(program);
    let mut trace = AnalysisTrace::default();
    let mut remaining: BTreeSet<String> = program.predicates.keys().cloned().collect();
    let mut analyzed = BTreeSet::new();
    let mut discharged = Vec::new();
    let mut round = 0;

    while !remaining.is_empty() {
        let eligible = leafs(&remaining, &analyzed, &program.call_graph);
        let Some(name) = eligible.into_iter().next() else {
            return Err(AnalysisError::NonDirectRecursion(remaining));
        };
        let pred = &program.predicates[&name];
        loop {
            round += 1;
            let next = analyze_predicate(pred, &env, program, order)?;
            let changed = env.get(&name) != Some(&next);
            trace.entries.push(TraceEntry {
                round,
                pred: name.clone(),
                snapshot: next.clone(),
                changed,
            });
            if !changed {
                break;
            }
            env.set(&name, next);
        }
        remaining.remove(&name);
        analyzed.insert(name.clone());
        discharged.push(name);
    }

    Ok(AnalysisResult {
        env,
        trace,
        order: discharged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_program;
    use crate::ordering::FeatureOrder;

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn leafs_examples() {
        let p = parse_program(include_str!("../tests/fixtures/app_concat_dapp.mpl")).unwrap();
        let all = set(&["app", "concat", "dapp"]);
        assert_eq!(
            leafs(&all, &BTreeSet::new(), &p.call_graph),
            set(&["app", "concat"])
        );
        assert_eq!(
            leafs(&set(&["dapp"]), &set(&["app", "concat"]), &p.call_graph),
            set(&["dapp"])
        );
        assert!(leafs(&BTreeSet::new(), &BTreeSet::new(), &p.call_graph).is_empty());
    }

    #[test]
    fn test_only_predicate_is_bottom() {
        let p = parse_program(":- pred p(in,in). p(X,Y) :- X == Y.").unwrap();
        let pred = p.predicate("p").unwrap();
        let r = analyze_predicate(pred, &Environment::bottom(&p), &p, &FeatureOrder).unwrap();
        assert!(r.is_empty());
        let res = run_analysis(&p, &FeatureOrder).unwrap();
        assert_eq!(res.trace.total_rounds("p"), 1);
        assert_eq!(res.trace.changing_rounds("p"), 0);
    }

    #[test]
    fn mutual_recursion_rejected() {
        let p = parse_program(
            ":- pred p(in,out). :- pred q(in,out).
             p(X,Y) :- q(X,Y). q(X,Y) :- p(X,Y).",
        )
        .unwrap();
        assert_eq!(
            run_analysis(&p, &FeatureOrder).unwrap_err(),
            AnalysisError::NonDirectRecursion(set(&["p", "q"]))
        );
    }

    #[test]
    fn aliased_actuals_drop_self_interactions() {
        let src = ":- pred cp(in,out). :- pred p(in,out).
cp(A,B) :- B := A.
p(X,Y) :- cp(X,Y).";
        // Validation rejects an ill-moded `cp(Y,Y)`, so the call is built by hand.
        let p = parse_program(src).unwrap();
        let res = run_analysis(&p, &FeatureOrder).unwrap();
        let pred = p.predicate("p").unwrap();
        let call = Atom {
            point: 99,
            kind: AtomKind::Call {
                pred: "cp".into(),
                args: vec!["Y".into(), "Y".into()],
            },
            span: Default::default(),
        };
        let s = analyze_atom(&call, pred, &res.env, &p, &FeatureOrder).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn closure_chain() {
        let p = parse_program(":- pred p(in,out). p(A,D) :- B := A, C := B, D := C.").unwrap();
        let pred = p.predicate("p").unwrap();
        let env = Environment::bottom(&p);
        let mut body = InteractionSet::empty(Owner::of(pred));
        for a in pred.atoms() {
            body.join_with(&analyze_atom(a, pred, &env, &p, &FeatureOrder).unwrap())
                .unwrap();
        }
        let cl = transitive_closure(&body).unwrap();
        let ops = cl.get(&"A".into(), &"D".into()).unwrap();
        assert_eq!(ops.keys().copied().collect::<Vec<_>>(), vec![1, 2, 3]);
        let projected = project(&body, pred).unwrap();
        assert_eq!(projected.len(), 1);
    }

    #[test]
    fn trace_render_format() {
        let p = parse_program(":- pred p(in,out). p(X,Y) :- Y := X.").unwrap();
        let res = run_analysis(&p, &FeatureOrder).unwrap();
        assert_eq!(
            res.trace.render(),
            "round=1 pred=p interactions=1 changed=true\n  X -> Y {assign@1}\n\
             round=2 pred=p interactions=1 changed=false\n  X -> Y {assign@1}\n"
        );
    }
}
