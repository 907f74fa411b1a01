use std::collections::HashSet;
use std::fmt;

use super::ast::{Atom, AtomKind, Mode, Predicate, Program, Span, Var};
use super::callgraph::mutual_recursion_groups;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub span: Span,
    pub severity: Severity,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub diagnostics: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        !self
            .diagnostics
            .iter()
            .any(|d| d.severity == Severity::Error)
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.diagnostics.extend(other.diagnostics);
        self.diagnostics.sort_by_key(|d| d.span);
    }

    fn error(&mut self, span: Span, message: String) {
        self.diagnostics.push(Diagnostic {
            span,
            severity: Severity::Error,
            message,
        });
    }

    /// One `file:line:col: severity: message` line per diagnostic.
    pub fn render(&self, file: &str) -> String {
        let mut out = String::new();
        for d in &self.diagnostics {
            out.push_str(&format!(
                "{file}:{}:{}: {}: {}\n",
                d.span.line, d.span.col, d.severity, d.message
            ));
        }
        out
    }
}

/// Input and output variable positions of an atom. Calls take their
/// directions from the callee's declared modes.
pub fn atom_io<'a>(atom: &'a Atom, program: &Program) -> (Vec<&'a Var>, Vec<&'a Var>) {
    match &atom.kind {
        AtomKind::Deconstruct { var, args, .. } => (vec![var], args.iter().collect()),
        AtomKind::Construct { var, args, .. } => (args.iter().collect(), vec![var]),
        AtomKind::Test(v, w) => (vec![v, w], vec![]),
        AtomKind::Assign { target, source } => (vec![source], vec![target]),
        AtomKind::Call { pred, args } => {
            let modes = program
                .predicate(pred)
                .map(|q| q.modes.clone())
                .unwrap_or_default();
            let mut ins = Vec::new();
            let mut outs = Vec::new();
            for (a, m) in args.iter().zip(modes) {
                match m {
                    Mode::In => ins.push(a),
                    Mode::Out => outs.push(a),
                }
            }
            (ins, outs)
        }
    }
}

fn check_predicate(pred: &Predicate, program: &Program, report: &mut ValidationReport) {
    for clause in &pred.clauses {
        let mut bound: HashSet<&Var> = pred
            .params
            .iter()
            .zip(&pred.modes)
            .filter(|(_, m)| **m == Mode::In)
            .map(|(v, _)| v)
            .collect();
        for atom in &clause.body {
            let (ins, outs) = atom_io(atom, program);
            for v in ins {
                if !bound.contains(v) {
                    report.error(
                        atom.span,
                        format!("variable `{v}` is unbound at point {}", atom.point),
                    );
                }
            }
            let mut produced = HashSet::new();
            for v in outs {
                if bound.contains(v) || !produced.insert(v) {
                    report.error(
                        atom.span,
                        format!("variable `{v}` is already bound at point {}", atom.point),
                    );
                }
            }
            bound.extend(produced);
        }
        for (v, m) in pred.params.iter().zip(&pred.modes) {
            if *m == Mode::Out && !bound.contains(v) {
                report.error(
                    clause.span,
                    format!(
                        "output argument `{v}` of `{}` is unbound at the end of the clause",
                        pred.name
                    ),
                );
            }
        }
    }
}

/// Simulates left-to-right execution of every clause and reports each atom
/// whose inputs are not yet bound or whose outputs are already bound, and each
/// output argument left unbound.
pub fn validate_modes(program: &Program) -> ValidationReport {
    let mut report = ValidationReport::default();
    for pred in program.predicates.values() {
        check_predicate(pred, program, &mut report);
    }
    report
}

/// Reports every call-graph cycle that is not a self-loop.
pub fn validate_direct_recursion(program: &Program) -> ValidationReport {
    let mut report = ValidationReport::default();
    for group in mutual_recursion_groups(&program.call_graph) {
        let first = group.iter().next().expect("non-empty group");
        let span = program
            .predicate(first)
            .map_or_else(Span::default, |p| p.span);
        let names: Vec<_> = group.iter().map(String::as_str).collect();
        report.error(
            span,
            format!(
                "predicates {{{}}} are mutually recursive; only direct recursion is supported",
                names.join(", ")
            ),
        );
    }
    report
}

pub fn validate(program: &Program) -> ValidationReport {
    let mut r = validate_modes(program);
    r.merge(validate_direct_recursion(program));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_program;

    fn modes(src: &str) -> Vec<String> {
        let p = parse_program(src).unwrap();
        validate_modes(&p)
            .diagnostics
            .into_iter()
            .map(|d| d.message)
            .collect()
    }

    #[test]
    fn app_is_well_moded() {
        let src = include_str!("../../tests/fixtures/app_concat_dapp.mpl");
        assert!(modes(src).is_empty());
    }

    #[test]
    fn use_before_bind() {
        assert_eq!(
            modes(":- pred p(in,out). p(X,Y) :- Y := Z."),
            vec!["variable `Z` is unbound at point 1"]
        );
    }

    #[test]
    fn double_bind() {
        assert_eq!(
            modes(":- pred p(in,out). p(X,Y) :- Y := X, Y := X."),
            vec!["variable `Y` is already bound at point 2"]
        );
    }

    #[test]
    fn unbound_output() {
        assert_eq!(
            modes(":- pred p(in,out). p(X,Y) :- X == X."),
            vec!["output argument `Y` of `p` is unbound at the end of the clause"]
        );
    }

    #[test]
    fn call_modes_follow_callee() {
        let src = ":- pred q(out,in). :- pred p(in,out).
q(A,B) :- A := B.
p(X,Y) :- q(X,Y).";
        assert_eq!(
            modes(src),
            vec![
                "variable `Y` is unbound at point 2",
                "variable `X` is already bound at point 2",
                "output argument `Y` of `p` is unbound at the end of the clause",
            ]
        );
    }

    #[test]
    fn aliased_outputs() {
        let src = ":- pred p(in,out). p(X,Y) :- X => f(A,A), Y := A.";
        assert_eq!(modes(src), vec!["variable `A` is already bound at point 1"]);
    }

    #[test]
    fn render_format() {
        let p = parse_program(":- pred p(in,out).\np(X,Y) :- Y := Z.").unwrap();
        let r = validate_modes(&p);
        assert_eq!(
            r.render("f.mpl"),
            "f.mpl:2:11: error: variable `Z` is unbound at point 1\n"
        );
        assert!(!r.is_ok());
    }

    #[test]
    fn mutual_recursion_reported() {
        let p = parse_program(":- pred p(in). :- pred q(in). p(X) :- q(X). q(X) :- p(X).").unwrap();
        let r = validate_direct_recursion(&p);
        assert_eq!(r.diagnostics.len(), 1);
        assert!(r.diagnostics[0].message.contains("{p, q}"));
    }
}
