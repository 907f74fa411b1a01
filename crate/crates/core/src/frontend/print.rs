use std::fmt::Write;

use super::ast::{AtomKind, Predicate, Program, Var};

fn var_list(out: &mut String, vars: &[Var]) {
    if vars.is_empty() {
        return;
    }
    out.push('(');
    for (i, v) in vars.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(v.as_str());
    }
    out.push(')');
}

pub fn atom_to_string(kind: &AtomKind) -> String {
    let mut s = String::new();
    match kind {
        AtomKind::Deconstruct { var, functor, args } => {
            let _ = write!(s, "{var} => {functor}");
            var_list(&mut s, args);
        }
        AtomKind::Construct { var, functor, args } => {
            let _ = write!(s, "{var} <= {functor}");
            var_list(&mut s, args);
        }
        AtomKind::Test(v, w) => {
            let _ = write!(s, "{v} == {w}");
        }
        AtomKind::Assign { target, source } => {
            let _ = write!(s, "{target} := {source}");
        }
        AtomKind::Call { pred, args } => {
            s.push_str(pred);
            var_list(&mut s, args);
        }
    }
    s
}

fn print_predicate(out: &mut String, pred: &Predicate) {
    out.push_str(":- pred ");
    out.push_str(&pred.name);
    if !pred.modes.is_empty() {
        let modes: Vec<_> = pred.modes.iter().map(|m| m.as_str()).collect();
        let _ = write!(out, "({})", modes.join(", "));
    }
    out.push_str(".\n");
    for clause in &pred.clauses {
        out.push_str(&pred.name);
        var_list(out, &pred.params);
        if !clause.body.is_empty() {
            out.push_str(" :- ");
            let atoms: Vec<_> = clause
                .body
                .iter()
                .map(|a| atom_to_string(&a.kind))
                .collect();
            out.push_str(&atoms.join(", "));
        }
        out.push_str(".\n");
    }
}

/// Renders a program in the surface syntax. The output is byte-stable and
/// parses back to a structurally identical program.
pub fn print_program(program: &Program) -> String {
    let mut out = String::new();
    for (i, pred) in program.predicates.values().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        print_predicate(&mut out, pred);
    }
    out
}
