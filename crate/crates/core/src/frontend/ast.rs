use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use indexmap::IndexMap;

/// A program variable. Variables are scoped to the clause (or predicate head)
/// they occur in.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var(s.to_owned())
    }
}

/// Program point of a body atom. Points are global to a program and start at 1.
pub type Point = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    In,
    Out,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::In => "in",
            Mode::Out => "out",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// 1-based source position.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// The five atom forms of the flat language: four moded unifications and calls.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AtomKind {
    /// `V => f(Y1,...,Yn)`: `V` is input, the `Yi` are output.
    Deconstruct {
        var: Var,
        functor: String,
        args: Vec<Var>,
    },
    /// `V <= f(Y1,...,Yn)`: the `Yi` are input, `V` is output.
    Construct {
        var: Var,
        functor: String,
        args: Vec<Var>,
    },
    /// `V == W`: both input.
    Test(Var, Var),
    /// `V := W`: `W` input, `V` output.
    Assign {
        target: Var,
        source: Var,
    },
    Call {
        pred: String,
        args: Vec<Var>,
    },
}

#[derive(Debug, Clone)]
pub struct Atom {
    pub point: Point,
    pub kind: AtomKind,
    pub span: Span,
}

// Spans are positional metadata; structural equality ignores them.
impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        self.point == other.point && self.kind == other.kind
    }
}

impl Eq for Atom {}

impl Atom {
    pub fn vars(&self) -> Vec<&Var> {
        match &self.kind {
            AtomKind::Deconstruct { var, args, .. } | AtomKind::Construct { var, args, .. } => {
                std::iter::once(var).chain(args.iter()).collect()
            }
            AtomKind::Test(v, w) => vec![v, w],
            AtomKind::Assign { target, source } => vec![target, source],
            AtomKind::Call { args, .. } => args.iter().collect(),
        }
    }
}

/// A clause body. The head is shared by all clauses of a predicate and lives
/// on [`Predicate::params`].
#[derive(Debug, Clone)]
pub struct Clause {
    pub body: Vec<Atom>,
    pub span: Span,
}

impl PartialEq for Clause {
    fn eq(&self, other: &Self) -> bool {
        self.body == other.body
    }
}

impl Eq for Clause {}

#[derive(Debug, Clone)]
pub struct Predicate {
    pub name: String,
    /// Formal arguments, i.e. the head variables common to every clause.
    pub params: Vec<Var>,
    pub modes: Vec<Mode>,
    pub clauses: Vec<Clause>,
    /// Position of the mode declaration.
    pub span: Span,
}

impl PartialEq for Predicate {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.params == other.params
            && self.modes == other.modes
            && self.clauses == other.clauses
    }
}

impl Eq for Predicate {}

impl Predicate {
    pub fn arity(&self) -> usize {
        self.modes.len()
    }

    pub fn position(&self, v: &Var) -> Option<usize> {
        self.params.iter().position(|p| p == v)
    }

    pub fn is_param(&self, v: &Var) -> bool {
        self.params.contains(v)
    }

    pub fn is_output_param(&self, v: &Var) -> bool {
        self.position(v).is_some_and(|i| self.modes[i] == Mode::Out)
    }

    pub fn is_input_param(&self, v: &Var) -> bool {
        self.position(v).is_some_and(|i| self.modes[i] == Mode::In)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.clauses.iter().flat_map(|c| c.body.iter())
    }

    pub fn num_points(&self) -> usize {
        self.clauses.iter().map(|c| c.body.len()).sum()
    }
}

pub type CallGraph = BTreeMap<String, BTreeSet<String>>;

#[derive(Debug, Clone, Default)]
pub struct Program {
    /// Predicates in source order.
    pub predicates: IndexMap<String, Predicate>,
    pub call_graph: CallGraph,
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.predicates.len() == other.predicates.len()
            && self
                .predicates
                .iter()
                .zip(other.predicates.iter())
                .all(|(a, b)| a == b)
    }
}

impl Eq for Program {}

impl Program {
    pub fn predicate(&self, name: &str) -> Option<&Predicate> {
        self.predicates.get(name)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.predicates.values().flat_map(|p| p.atoms())
    }

    /// Reassigns program points 1..N in textual order.
    pub fn renumber(&mut self) {
        let mut next: Point = 1;
        for pred in self.predicates.values_mut() {
            for clause in &mut pred.clauses {
                for atom in &mut clause.body {
                    atom.point = next;
                    next += 1;
                }
            }
        }
    }

    /// Functor names with their arities, as used anywhere in the program.
    pub fn functors(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for atom in self.atoms() {
            if let AtomKind::Deconstruct { functor, args, .. }
            | AtomKind::Construct { functor, args, .. } = &atom.kind
            {
                out.insert(functor.clone(), args.len());
            }
        }
        out
    }
}
