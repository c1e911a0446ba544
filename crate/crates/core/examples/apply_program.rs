//! Runs a stored program over every chunk of a conflicted file.

use mergepbe::conflict::{ConflictFile, SideOrder};
use mergepbe::dsl::{deserialize_program, run_program, Suggestion};

const PROGRAM: &str = r#"{
  "dslv": 1,
  "apply": {
    "condition": [{"tag": "FrequentPattern", "path": "base/logging.h"}],
    "transform": {"concat": [
      {"select": {"tag": "Main"}},
      {"remove": [{"tag": "Fork"}, {"tag": "ForkByPath", "path": "base/logging.h"}]}
    ]}
  }
}"#;

const FILE: &str = r#"#include "base/files/file_util.h"

<<<<<<< fork
#include "base/logging.h"
#include "base/strings/string_util.h"
=======
#include "base/check.h"
>>>>>>> main

namespace base {
<<<<<<< fork
int kLimit = 4;
=======
int kLimit = 8;
>>>>>>> main
}
"#;

fn main() {
    let program = match deserialize_program(PROGRAM) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("bad program: {e}");
            std::process::exit(1);
        }
    };
    println!("program: {program}\n");

    let file = ConflictFile::parse(FILE).unwrap();
    let resolutions: Vec<Option<Vec<String>>> = file
        .to_inputs("base/files/file_util.cc", SideOrder::ForkFirst)
        .iter()
        .map(|input| match run_program(&program, input) {
            Suggestion::Resolved(nodes) => Some(nodes.iter().map(|n| n.original().to_string()).collect()),
            other => {
                println!("chunk {}: {other:?}", input.chunk_index);
                None
            }
        })
        .collect();
    print!("\n{}", file.render_with(&resolutions));
}
