//! Learning programs from example resolutions.
//!
//! The condition is the conjunction of predicates true on every example.
//! Transformations are learned per example by splitting the output top-down
//! with witness functions into a shared version space, then intersected
//! across examples and ranked.

mod config;
mod learn;
mod rank;
mod vsa;
mod witness;

pub use config::{ExampleSpec, RankingWeights, SynthConfig, SynthError};
pub use learn::{intersect_program_sets, learn, learn_condition, learn_program_set};
pub use rank::{
    minimal_guard, program_features, program_score, rank, transformation_features,
    FeatureVector, RankedProgram, RankedPrograms,
};
pub use vsa::ProgramSet;
pub(crate) use witness::same_multiset;
pub use witness::{learn_selection, learn_transformation, wf_concat, wf_remove};
