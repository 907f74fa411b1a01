//! Surface syntax, static validation and call graph for flat moded programs.

mod ast;
mod callgraph;
mod error;
mod lexer;
mod parser;
mod print;
mod validate;

pub use ast::{Atom, AtomKind, CallGraph, Clause, Mode, Point, Predicate, Program, Span, Var};
pub use callgraph::{build_call_graph, mutual_recursion_groups};
pub use error::{FrontendError, FrontendErrorKind};
pub use parser::parse_program;
pub use print::{atom_to_string, print_program};
pub use validate::{
    atom_io, validate, validate_direct_recursion, validate_modes, Diagnostic, Severity,
    ValidationReport,
};

pub(crate) use lexer::Tok;
pub(crate) use parser::Cursor;
