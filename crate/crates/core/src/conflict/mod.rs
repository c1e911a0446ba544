//! Conflict-marker parsing and the node model shared by the rest of the crate.
//!
//! A conflicted file is split into text and conflict segments. Each conflict
//! becomes a [`ConflictInput`]: the main and fork regions tokenized into
//! [`Node`]s, the rest of the file, and the other chunks of the same file.

mod node;
mod parse;

pub use node::{
    normalize_whitespace, render_nodes, tokenize_nodes, tokenize_text, Node, NodeKind, RegionKind,
};
pub use parse::{
    conflict_kind, is_marker_line, parse_conflict_file, ConflictFile, ConflictInput,
    ConflictKind, ConflictParseError, RawChunk, Segment, SideOrder,
};
