//! Builds a program by hand and round-trips it through its JSON form.

use mergepbe::dsl::{
    deserialize_program, serialize_program, Condition, Predicate, PredicateTag, Program, Selection, Transformation,
};
use mergepbe::synth::{program_features, SynthConfig};

fn main() {
    let program = Program::new(
        Condition::single(Predicate::DuplicateMainFork),
        Transformation::concat(
            Transformation::Select(Selection::Fork),
            Transformation::Remove(Selection::Main, Selection::Pattern(PredicateTag::DuplicateMainFork)),
        ),
    );
    let text = serialize_program(&program);
    println!("{program}\n\n{text}\n");
    let back = deserialize_program(&text).unwrap();
    assert_eq!(back, program);

    let features = program_features(&program);
    println!("features: {}", serde_json::to_string(&features).unwrap());
    println!("score: {}", features.score(&SynthConfig::default().weights));

    match deserialize_program(r#"{"dslv":1,"apply":{"condition":[],"transform":{"select":{"tag":"Main"}}}}"#) {
        Ok(p) => println!("unexpectedly parsed {p}"),
        Err(e) => println!("rejected: {e}"),
    }
}
