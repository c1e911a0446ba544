use thiserror::Error;

use super::ast::{Condition, Predicate, Program, Selection, Transformation};
use super::dictionary::{build_pattern_dictionary, KeywordConfig, PatternDictionary};
use crate::conflict::{ConflictInput, Node, RegionKind};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("index {index} out of range for {region:?} region of length {len}")]
    IndexOutOfRange {
        region: RegionKind,
        index: usize,
        len: usize,
    },
    #[error("cannot remove `{node}`: not present in the source selection")]
    RemoveMismatch { node: String },
}

/// Outcome of running a program on one conflict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Suggestion {
    Resolved(Vec<Node>),
    NoSuggestion,
    Failed(EvalError),
}

impl Suggestion {
    pub fn resolved(&self) -> Option<&[Node]> {
        match self {
            Suggestion::Resolved(nodes) => Some(nodes),
            _ => None,
        }
    }
}

pub fn eval_predicate(p: &Predicate, _input: &ConflictInput, dict: &PatternDictionary) -> bool {
    !dict.entry(p).is_empty()
}

/// Conjunction over the predicates, short-circuiting in list order.
pub fn eval_condition(c: &Condition, input: &ConflictInput, dict: &PatternDictionary) -> bool {
    c.predicates().iter().all(|p| eval_predicate(p, input, dict))
}

pub fn eval_selection(
    s: &Selection,
    input: &ConflictInput,
    dict: &PatternDictionary,
) -> Result<Vec<Node>, EvalError> {
    let by_index = |region: RegionKind, k: usize| {
        let nodes = input.region(region);
        nodes
            .get(k)
            .map(|n| vec![n.clone()])
            .ok_or(EvalError::IndexOutOfRange {
                region,
                index: k,
                len: nodes.len(),
            })
    };
    let by_path = |region: RegionKind, path: &str| {
        input
            .region(region)
            .iter()
            .filter(|n| n.include_path() == Some(path))
            .cloned()
            .collect()
    };
    Ok(match s {
        Selection::Main => input.main_nodes.clone(),
        Selection::Fork => input.fork_nodes.clone(),
        Selection::MainByIndex(k) => by_index(RegionKind::Main, *k)?,
        Selection::ForkByIndex(k) => by_index(RegionKind::Fork, *k)?,
        Selection::MainByPath(p) => by_path(RegionKind::Main, p),
        Selection::ForkByPath(p) => by_path(RegionKind::Fork, p),
        Selection::Pattern(key) => dict.pattern(*key),
    })
}

/// Deletes the first occurrence of each node of `removed` from `source`.
pub fn remove_nodes(source: &[Node], removed: &[Node]) -> Result<Vec<Node>, EvalError> {
    let mut kept: Vec<Option<&Node>> = source.iter().map(Some).collect();
    for r in removed {
        let slot = kept
            .iter_mut()
            .find(|slot| slot.is_some_and(|n| n == r))
            .ok_or_else(|| EvalError::RemoveMismatch {
                node: r.render(),
            })?;
        *slot = None;
    }
    Ok(kept.into_iter().flatten().cloned().collect())
}

pub fn eval_transformation(
    t: &Transformation,
    input: &ConflictInput,
    dict: &PatternDictionary,
) -> Result<Vec<Node>, EvalError> {
    match t {
        Transformation::Concat(left, right) => {
            let mut out = eval_transformation(left, input, dict)?;
            out.extend(eval_transformation(right, input, dict)?);
            Ok(out)
        }
        Transformation::Remove(source, removed) => {
            let source = eval_selection(source, input, dict)?;
            let removed = eval_selection(removed, input, dict)?;
            remove_nodes(&source, &removed)
        }
        Transformation::Select(s) => eval_selection(s, input, dict),
    }
}

/// Dictionary for running `prog` on `input`, tracking the program's frequent paths.
pub fn program_dictionary(
    prog: &Program,
    input: &ConflictInput,
    keywords: &KeywordConfig,
) -> PatternDictionary {
    build_pattern_dictionary(input, keywords).track_paths(
        prog.condition
            .predicates()
            .iter()
            .filter_map(|p| p.path().map(str::to_string)),
    )
}

pub fn run_program_with(prog: &Program, input: &ConflictInput, keywords: &KeywordConfig) -> Suggestion {
    let dict = program_dictionary(prog, input, keywords);
    if !eval_condition(&prog.condition, input, &dict) {
        return Suggestion::NoSuggestion;
    }
    match eval_transformation(&prog.transformation, input, &dict) {
        Ok(nodes) => Suggestion::Resolved(nodes),
        Err(e) => Suggestion::Failed(e),
    }
}

/// Runs a program with the default keyword configuration.
pub fn run_program(prog: &Program, input: &ConflictInput) -> Suggestion {
    run_program_with(prog, input, &KeywordConfig::default())
}
