use thiserror::Error;

use super::ast::Span;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrontendErrorKind {
    #[error("lexical error: {0}")]
    Lex(String),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("duplicate definition of predicate `{0}`")]
    DuplicatePredicate(String),
    #[error("functor `{name}` used with arity {found}, previously with arity {expected}")]
    FunctorArity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("predicate `{0}` has no mode declaration")]
    MissingModes(String),
    #[error("predicate `{name}` declared with arity {expected}, used with arity {found}")]
    PredicateArity {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("clause head of `{0}` differs from the head of its first clause")]
    HeadMismatch(String),
    #[error("variable `{var}` occurs more than once in the head of `{pred}`")]
    RepeatedHeadVar { pred: String, var: String },
    #[error("call to undefined predicate `{0}`")]
    UndefinedPredicate(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {kind}")]
pub struct FrontendError {
    pub kind: FrontendErrorKind,
    pub span: Span,
}

impl FrontendError {
    pub fn new(kind: FrontendErrorKind, span: Span) -> Self {
        FrontendError { kind, span }
    }

    pub fn syntax(msg: impl Into<String>, span: Span) -> Self {
        FrontendError::new(FrontendErrorKind::Syntax(msg.into()), span)
    }
}
