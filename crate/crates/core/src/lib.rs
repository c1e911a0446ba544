//! Learn merge-conflict resolutions from a handful of examples.
//!
//! `mergepbe` parses textual merge conflicts into structured chunks, learns
//! small resolution programs from example resolutions, applies them to new
//! conflicts, and evaluates them against corpora of human resolutions.
//!
//! ```
//! use mergepbe::conflict::{parse_conflict_file, tokenize_text, RegionKind, SideOrder};
//! use mergepbe::synth::{learn, ExampleSpec, SynthConfig};
//!
//! let conflict = "<<<<<<< fork\n#include \"base/logging.h\"\n#include \"base/a.h\"\n=======\n#include \"base/b.h\"\n>>>>>>> main\n";
//! let input = parse_conflict_file(conflict, "x.cc", SideOrder::ForkFirst).unwrap().remove(0);
//! let output = tokenize_text("#include \"base/b.h\"\n#include \"base/a.h\"\n", RegionKind::Outside);
//! let spec = ExampleSpec::new(vec![(input, output)]).unwrap();
//! let ranked = learn(&spec, &SynthConfig::default());
//! assert!(!ranked.is_empty());
//! ```

pub mod cli;
pub mod conflict;
pub mod corpus;
pub mod dsl;
pub mod synth;
