use std::cmp::Ordering;

use serde::Serialize;
use serde_json::{json, Value};

use super::config::{RankingWeights, SynthConfig};
use crate::dsl::{program_json, Condition, Predicate, PredicateTag, Program, Selection, Transformation};

/// Feature counts of one program.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct FeatureVector {
    pub operators: usize,
    pub constants: usize,
    pub index_selections: usize,
    pub pattern_selections: usize,
    pub whole_branch_selections: usize,
    pub unguarded_patterns: usize,
    pub unreferenced_guards: usize,
}

impl FeatureVector {
    pub fn score(&self, w: &RankingWeights) -> f64 {
        w.operators * self.operators as f64
            + w.constants * self.constants as f64
            + w.index * self.index_selections as f64
            - w.pattern * self.pattern_selections as f64
            - w.whole_branch * self.whole_branch_selections as f64
            + w.unguarded_pattern * self.unguarded_patterns as f64
            + w.unreferenced_guard * self.unreferenced_guards as f64
    }

    fn add(&mut self, other: FeatureVector) {
        self.operators += other.operators;
        self.constants += other.constants;
        self.index_selections += other.index_selections;
        self.pattern_selections += other.pattern_selections;
        self.whole_branch_selections += other.whole_branch_selections;
        self.unguarded_patterns += other.unguarded_patterns;
        self.unreferenced_guards += other.unreferenced_guards;
    }
}

fn selection_features(s: &Selection) -> FeatureVector {
    let mut f = FeatureVector {
        operators: 1,
        ..FeatureVector::default()
    };
    match s {
        Selection::Main | Selection::Fork => f.whole_branch_selections = 1,
        Selection::MainByIndex(_) | Selection::ForkByIndex(_) => {
            f.constants = 1;
            f.index_selections = 1;
        }
        Selection::MainByPath(_) | Selection::ForkByPath(_) => f.constants = 1,
        Selection::Pattern(_) => {
            f.constants = 1;
            f.pattern_selections = 1;
        }
    }
    f
}

/// Guard-independent features of a transformation.
pub fn transformation_features(t: &Transformation) -> FeatureVector {
    let mut f = FeatureVector::default();
    match t {
        Transformation::Concat(l, r) => {
            f.operators = 1;
            f.add(transformation_features(l));
            f.add(transformation_features(r));
        }
        Transformation::Remove(a, b) => {
            f.operators = 1;
            f.add(selection_features(a));
            f.add(selection_features(b));
        }
        Transformation::Select(s) => f.add(selection_features(s)),
    }
    f
}

/// Whether the transformation makes use of the guard predicate `p`.
fn references(t: &Transformation, p: &Predicate) -> bool {
    t.selections().into_iter().any(|s| match (s, p) {
        (Selection::Pattern(key), _) => *key == p.tag(),
        (Selection::MainByPath(a) | Selection::ForkByPath(a), Predicate::FrequentPattern(b)) => a == b,
        _ => false,
    })
}

pub fn program_features(prog: &Program) -> FeatureVector {
    let preds = prog.condition.predicates();
    let t = &prog.transformation;
    let mut f = transformation_features(t);
    // Apply, each predicate, and the And nodes joining them.
    f.operators += 1 + preds.len() + preds.len() - 1;
    f.constants += preds.iter().filter(|p| p.path().is_some()).count();
    f.unguarded_patterns = t
        .selections()
        .into_iter()
        .filter(|s| match s {
            Selection::Pattern(key) => !preds.iter().any(|p| p.tag() == *key),
            _ => false,
        })
        .count();
    f.unreferenced_guards = preds.iter().filter(|p| !references(t, p)).count();
    f
}

pub fn program_score(prog: &Program, w: &RankingWeights) -> f64 {
    program_features(prog).score(w)
}

/// The cheapest sub-conjunction of `full` to guard `t` with.
///
/// Predicates whose pattern `t` selects are always kept. Otherwise a single
/// predicate is chosen, preferring ones `t` refers to.
pub fn minimal_guard(full: &Condition, t: &Transformation, w: &RankingWeights) -> Condition {
    let mandatory: Vec<Predicate> = full
        .predicates()
        .iter()
        .filter(|p| p.tag() != PredicateTag::FrequentPattern)
        .filter(|p| {
            t.selections()
                .into_iter()
                .any(|s| *s == Selection::Pattern(p.tag()))
        })
        .cloned()
        .collect();
    if !mandatory.is_empty() {
        return Condition::new(mandatory).expect("subset of a valid condition");
    }
    let best = full
        .predicates()
        .iter()
        .min_by(|a, b| {
            let cost = |p: &Predicate| program_score(&Program::new(Condition::single((*p).clone()), t.clone()), w);
            cost(a).total_cmp(&cost(b))
        })
        .expect("conditions are non-empty");
    Condition::single(best.clone())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedProgram {
    pub program: Program,
    pub score: f64,
    pub features: FeatureVector,
}

impl RankedProgram {
    pub fn to_json(&self) -> Value {
        json!({
            "program": program_json(&self.program),
            "score": self.score,
            "features": self.features,
        })
    }
}

/// Programs in ascending score order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RankedPrograms {
    pub entries: Vec<RankedProgram>,
    /// Set when the candidate set exceeded the configured cap.
    pub truncated: bool,
}

impl RankedPrograms {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn top(&self) -> Option<&RankedProgram> {
        self.entries.first()
    }

    pub fn programs(&self) -> impl Iterator<Item = &Program> {
        self.entries.iter().map(|e| &e.program)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.entries.iter().map(RankedProgram::to_json).collect())
    }
}

/// Scores and sorts programs. Ties are broken on the program's text form.
pub fn rank<I: IntoIterator<Item = Program>>(programs: I, config: &SynthConfig) -> RankedPrograms {
    let mut entries: Vec<(RankedProgram, String)> = programs
        .into_iter()
        .map(|program| {
            let features = program_features(&program);
            let score = features.score(&config.weights);
            let text = program.to_string();
            (
                RankedProgram {
                    program,
                    score,
                    features,
                },
                text,
            )
        })
        .collect();
    entries.sort_by(|(a, at), (b, bt)| match a.score.total_cmp(&b.score) {
        Ordering::Equal => at.cmp(bt),
        other => other,
    });
    entries.dedup_by(|(_, a), (_, b)| a == b);
    RankedPrograms {
        entries: entries.into_iter().map(|(e, _)| e).collect(),
        truncated: false,
    }
}
