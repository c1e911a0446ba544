//! The resolution language: AST, pattern dictionary, interpreter and JSON form.
//!
//! A program is `Apply(condition, transformation)`. The condition is a
//! conjunction of predicates over the conflict; the transformation builds the
//! resolved node list by concatenating and removing selections of the main
//! and fork regions.

mod ast;
mod dictionary;
mod eval;
mod json;

pub use ast::{AstError, Condition, Predicate, PredicateTag, Program, Selection, Transformation};
pub use dictionary::{build_pattern_dictionary, KeywordConfig, PatternDictionary};
pub use eval::{
    eval_condition, eval_predicate, eval_selection, eval_transformation, program_dictionary,
    remove_nodes, run_program, run_program_with, EvalError, Suggestion,
};
pub use json::{
    deserialize_program, program_from_json, program_json, serialize_program, transformation_json,
    ProgramParseError, DSL_VERSION,
};
