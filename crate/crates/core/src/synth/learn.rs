use std::collections::BTreeSet;

use log::warn;

use super::config::{ExampleSpec, SynthConfig};
use super::rank::{minimal_guard, rank, transformation_features, RankedPrograms};
use super::vsa::ProgramSet;
use super::witness::{learn_in_context, CaseContext};
use crate::conflict::ConflictInput;
use crate::dsl::{
    build_pattern_dictionary, eval_transformation, AstError, Condition, KeywordConfig,
    Predicate, Program, Transformation,
};

/// Every predicate that holds on all inputs, in the fixed predicate order.
pub fn learn_condition<'a, I>(inputs: I, keywords: &KeywordConfig) -> Result<Condition, AstError>
where
    I: IntoIterator<Item = &'a ConflictInput>,
{
    let mut common: Option<Vec<Predicate>> = None;
    for input in inputs {
        let holds = build_pattern_dictionary(input, keywords).true_predicates();
        common = Some(match common {
            None => holds,
            Some(prev) => prev.into_iter().filter(|p| holds.contains(p)).collect(),
        });
    }
    Condition::new(common.unwrap_or_default())
}

/// Structural intersection of per-example sets.
pub fn intersect_program_sets(sets: &[ProgramSet]) -> ProgramSet {
    let Some((first, rest)) = sets.split_first() else {
        return ProgramSet::empty();
    };
    rest.iter().fold(first.clone(), |acc, s| acc.intersect(s))
}

/// Transformations consistent with every case, before ranking.
///
/// Path literals range over the include paths of all cases.
pub fn learn_program_set(spec: &ExampleSpec, config: &SynthConfig) -> ProgramSet {
    let paths: BTreeSet<String> = spec.inputs().flat_map(|i| i.include_paths()).collect();
    let sets: Vec<ProgramSet> = spec
        .cases()
        .iter()
        .map(|(input, o)| {
            let ctx = CaseContext::new(input, &paths, config);
            learn_in_context(&ctx, o, config.max_concat_depth)
        })
        .collect();
    intersect_program_sets(&sets)
}

/// Learns ranked programs consistent with every case of `spec`.
///
/// The result is empty when no guard or no transformation fits.
pub fn learn(spec: &ExampleSpec, config: &SynthConfig) -> RankedPrograms {
    let Ok(condition) = learn_condition(spec.inputs(), &config.keywords) else {
        return RankedPrograms::default();
    };
    let set = learn_program_set(spec, config);
    let total = set.len();
    let w = &config.weights;
    let candidates = set.cheapest(
        config.max_programs,
        |t| transformation_features(t).score(w),
        w.operators,
    );
    let truncated = total > config.max_programs as u128;
    if truncated {
        warn!(
            "{total} consistent transformations; keeping the {} cheapest",
            config.max_programs
        );
    }
    let dicts: Vec<_> = spec
        .inputs()
        .map(|i| build_pattern_dictionary(i, &config.keywords))
        .collect();
    let consistent = |t: &Transformation| {
        spec.cases()
            .iter()
            .zip(&dicts)
            .all(|((input, o), d)| eval_transformation(t, input, d).is_ok_and(|out| &out == o))
    };
    let programs = candidates
        .into_iter()
        .map(|(_, t)| t)
        .filter(|t| consistent(t))
        .map(|t| Program::new(minimal_guard(&condition, &t, w), t));
    let mut ranked = rank(programs, config);
    ranked.truncated = truncated;
    ranked
}
