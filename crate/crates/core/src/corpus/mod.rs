//! Corpora of conflicts paired with the resolutions developers chose.
//!
//! A corpus directory holds one entry per conflicted file:
//!
//! ```text
//! <root>/<merge-id>/<path-hash>/conflict.txt    file with conflict markers
//!                               resolved.txt    the file as committed
//!                               meta.json       {"file_path", "label"?, "side_order"?}
//!                               headers/        optional header texts
//! ```

mod align;
mod classify;
mod evaluate;
mod load;
mod report;

pub use align::{align_chunks, align_resolution, AlignError};
pub use classify::{
    classify_file_type, classify_line, classify_location, classify_size, FileType, Location,
    ResolutionLabel, SizeBucket,
};
pub use evaluate::{evaluate, EvalReport, ProgramRow, Tally};
pub use load::{load_corpus, CaseId, CaseMeta, Corpus, CorpusCase, CorpusError, Diagnostic};
pub use report::{report, ClassificationReport};
