use std::collections::{BTreeMap, BTreeSet};

use petgraph::algo::tarjan_scc;
use petgraph::graphmap::DiGraphMap;

use super::ast::{AtomKind, CallGraph, Program};
use super::error::{FrontendError, FrontendErrorKind};

/// Edge `p -> q` iff some clause of `p` calls `q`. Every predicate gets an
/// entry, possibly empty.
pub fn build_call_graph(program: &Program) -> Result<CallGraph, FrontendError> {
    let mut graph: CallGraph = BTreeMap::new();
    for (name, pred) in &program.predicates {
        let callees = graph.entry(name.clone()).or_default();
        for atom in pred.atoms() {
            if let AtomKind::Call { pred: callee, .. } = &atom.kind {
                if !program.predicates.contains_key(callee) {
                    return Err(FrontendError::new(
                        FrontendErrorKind::UndefinedPredicate(callee.clone()),
                        atom.span,
                    ));
                }
                callees.insert(callee.clone());
            }
        }
    }
    Ok(graph)
}

/// Strongly connected components with more than one member, each sorted by
/// name. These are exactly the cycles that are not self-loops.
pub fn mutual_recursion_groups(graph: &CallGraph) -> Vec<BTreeSet<String>> {
    let mut g: DiGraphMap<&str, ()> = DiGraphMap::new();
    for (from, tos) in graph {
        g.add_node(from.as_str());
        for to in tos {
            g.add_edge(from.as_str(), to.as_str(), ());
        }
    }
    let mut groups: Vec<BTreeSet<String>> = tarjan_scc(&g)
        .into_iter()
        .filter(|scc| scc.len() > 1)
        .map(|scc| scc.into_iter().map(str::to_owned).collect())
        .collect();
    groups.sort();
    groups
}
