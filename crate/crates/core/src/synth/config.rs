use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conflict::{ConflictInput, Node};
use crate::dsl::KeywordConfig;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SynthError {
    #[error("an example specification needs at least one case")]
    EmptySpec,
    #[error("max_concat_depth must be at least 1")]
    ZeroDepth,
    #[error("ranking weight `{0}` is not finite")]
    NonFiniteWeight(&'static str),
}

/// Feature weights. Lower total score ranks first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RankingWeights {
    /// Per operator node, predicates and selections included.
    pub operators: f64,
    /// Per literal: paths, indices and pattern keys.
    pub constants: f64,
    /// Penalty per index-based selection.
    pub index: f64,
    /// Bonus per `Pattern` selection.
    pub pattern: f64,
    /// Bonus per whole `Main`/`Fork` selection.
    pub whole_branch: f64,
    /// Penalty per `Pattern` selection whose predicate is not in the guard.
    pub unguarded_pattern: f64,
    /// Penalty per guard predicate the transformation does not use.
    pub unreferenced_guard: f64,
}

impl Default for RankingWeights {
    fn default() -> Self {
        RankingWeights {
            operators: 1.0,
            constants: 0.5,
            index: 2.0,
            pattern: 1.5,
            whole_branch: 1.0,
            unguarded_pattern: 2.0,
            unreferenced_guard: 3.0,
        }
    }
}

impl RankingWeights {
    fn named(&self) -> [(&'static str, f64); 7] {
        [
            ("operators", self.operators),
            ("constants", self.constants),
            ("index", self.index),
            ("pattern", self.pattern),
            ("whole_branch", self.whole_branch),
            ("unguarded_pattern", self.unguarded_pattern),
            ("unreferenced_guard", self.unreferenced_guard),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub max_concat_depth: usize,
    pub max_programs: usize,
    pub weights: RankingWeights,
    pub keywords: KeywordConfig,
    /// Evaluation-only: compare include resolutions as sets.
    pub order_insensitive_includes: bool,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            max_concat_depth: 3,
            max_programs: 10_000,
            weights: RankingWeights::default(),
            keywords: KeywordConfig::default(),
            order_insensitive_includes: false,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.max_concat_depth == 0 {
            return Err(SynthError::ZeroDepth);
        }
        for (name, w) in self.weights.named() {
            if !w.is_finite() {
                return Err(SynthError::NonFiniteWeight(name));
            }
        }
        Ok(())
    }
}

/// Input/output pairs to learn from.
#[derive(Debug, Clone)]
pub struct ExampleSpec {
    cases: Vec<(ConflictInput, Vec<Node>)>,
}

impl ExampleSpec {
    pub fn new(cases: Vec<(ConflictInput, Vec<Node>)>) -> Result<ExampleSpec, SynthError> {
        if cases.is_empty() {
            return Err(SynthError::EmptySpec);
        }
        Ok(ExampleSpec { cases })
    }

    pub fn cases(&self) -> &[(ConflictInput, Vec<Node>)] {
        &self.cases
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    pub fn inputs(&self) -> impl Iterator<Item = &ConflictInput> {
        self.cases.iter().map(|(i, _)| i)
    }
}
