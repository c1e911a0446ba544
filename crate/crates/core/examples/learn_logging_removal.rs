//! Learns "drop the logging include, keep the replacement" from two conflicts.
//!
//! Run with `cargo run --example learn_logging_removal`.

use mergepbe::conflict::{parse_conflict_file, tokenize_text, RegionKind, SideOrder};
use mergepbe::synth::{learn, ExampleSpec, SynthConfig};

const FIRST: &str = r#"#include "base/native_library.h"
<<<<<<< fork
#include "base/logging.h"
#include "base/scoped_native_library.h"
=======
#include "base/notreached.h"
>>>>>>> main
"#;

const SECOND: &str = r#"#include "base/command_line_util.h"
<<<<<<< fork
#include "base/command_line.h"
#include "base/logging.h"
=======
#include "base/check_op.h"
>>>>>>> main
"#;

fn example(text: &str, path: &str, resolution: &str) -> (mergepbe::conflict::ConflictInput, Vec<mergepbe::conflict::Node>) {
    let input = parse_conflict_file(text, path, SideOrder::ForkFirst)
        .expect("well-formed conflict")
        .remove(0);
    (input, tokenize_text(resolution, RegionKind::Outside))
}

fn main() {
    let spec = ExampleSpec::new(vec![
        example(
            FIRST,
            "base/native_library_win.cc",
            "#include \"base/notreached.h\"\n#include \"base/scoped_native_library.h\"\n",
        ),
        example(
            SECOND,
            "base/command_line_util.cc",
            "#include \"base/check_op.h\"\n#include \"base/command_line.h\"\n",
        ),
    ])
    .unwrap();

    let ranked = learn(&spec, &SynthConfig::default());
    println!("{} candidate programs{}", ranked.len(), if ranked.truncated { " (truncated)" } else { "" });
    for (i, entry) in ranked.entries.iter().take(5).enumerate() {
        println!("{:>2}. [{:5.2}] {}", i + 1, entry.score, entry.program);
    }
}
