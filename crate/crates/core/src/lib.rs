//! Argument-profile analysis for a moded logic language in flat form.
//!
//! The pipeline is `parse_program` → `validate` → `run_analysis` →
//! `plan`/`rewrite`. The interpreter in [`interp`] is a reference semantics
//! for checking that rewriting preserves answers.

pub mod analysis;
pub mod domain;
pub mod frontend;
pub mod interp;
pub mod normalize;
pub mod ordering;
pub mod report;

pub use analysis::{run_analysis, AnalysisError, AnalysisResult, AnalysisTrace, Environment};
pub use domain::{
    ArgumentProfile, DomainError, Interaction, InteractionSet, OSet, Operation, PredicateProfile,
};
pub use frontend::{
    parse_program, print_program, validate, FrontendError, Mode, Predicate, Program, Var,
};
pub use interp::{parse_query, solve, Answer, GroundTerm, InterpError, Limits, Query};
pub use normalize::{compare, plan, rewrite, Comparison, NormalizationPlan, NormalizeError};
pub use ordering::{oprof, FeatureOrder, OrderedProfile, ProfileOrder};
pub use report::ProfileReport;
