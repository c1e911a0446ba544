//! Learns to keep the fork's headers when main only adds a moved copy.

use mergepbe::conflict::ConflictInput;
use mergepbe::dsl::{build_pattern_dictionary, KeywordConfig};
use mergepbe::synth::{learn, ExampleSpec, SynthConfig};

fn main() {
    let input = ConflictInput::from_regions(
        "ui/base/cursor/cursor.cc",
        &[r#"#include "ui/base/cursor/mojom/cursor_type.mojom-shared.h""#],
        &[
            r#"#include "ui/base/anonymous_ui_base_features.h""#,
            r#"#include "ui/base/mojom/cursor_type.mojom-shared.h""#,
        ],
    );

    let dict = build_pattern_dictionary(&input, &KeywordConfig::default());
    println!("predicates that hold:");
    for p in dict.true_predicates() {
        let nodes: Vec<String> = dict.entry(&p).iter().map(ToString::to_string).collect();
        println!("  {p}: {nodes:?}");
    }

    let resolution = input.fork_nodes.clone();
    let spec = ExampleSpec::new(vec![(input, resolution)]).unwrap();
    let ranked = learn(&spec, &SynthConfig::default());
    let top = ranked.top().expect("the fork side is reachable");
    println!("\ntop program: {}", top.program);
    println!("features: {}", serde_json::to_string(&top.features).unwrap());
}
