use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::node::{tokenize_nodes, Node, NodeKind, RegionKind};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ConflictParseError {
    #[error("unbalanced conflict markers at line {line}: {reason}")]
    UnbalancedMarkers { line: usize, reason: &'static str },
}

/// Which side of a conflict git writes first.
///
/// `ForkFirst` puts the downstream fork in the first section and the
/// upstream main branch in the second. `OursFirst` is the reverse and matches
/// a checkout of the main branch merging the fork.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SideOrder {
    #[default]
    ForkFirst,
    OursFirst,
}

impl FromStr for SideOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fork-first" => Ok(SideOrder::ForkFirst),
            "ours-first" => Ok(SideOrder::OursFirst),
            other => Err(format!(
                "unknown side order `{other}` (expected fork-first or ours-first)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Marker {
    Start,
    Base,
    Separator,
    End,
}

fn classify_marker(line: &str) -> Option<Marker> {
    let line = line.trim_end();
    let starts = |prefix: &str| {
        line.starts_with(prefix)
            && line[prefix.len()..]
                .chars()
                .next()
                .is_none_or(|c| c == ' ' || c == '\t')
    };
    if starts("<<<<<<<") {
        Some(Marker::Start)
    } else if starts("|||||||") {
        Some(Marker::Base)
    } else if line == "=======" {
        Some(Marker::Separator)
    } else if starts(">>>>>>>") {
        Some(Marker::End)
    } else {
        None
    }
}

/// True when the line is one of the four conflict marker lines.
pub fn is_marker_line(line: &str) -> bool {
    classify_marker(line).is_some()
}

/// A marker-delimited region exactly as it appears in the file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawChunk {
    pub start_marker: String,
    pub first: Vec<String>,
    pub base: Option<(String, Vec<String>)>,
    pub separator: String,
    pub second: Vec<String>,
    pub end_marker: String,
}

impl RawChunk {
    /// All lines of the chunk including the marker lines.
    pub fn marker_lines(&self) -> Vec<String> {
        let mut out = vec![self.start_marker.clone()];
        out.extend(self.first.iter().cloned());
        if let Some((marker, lines)) = &self.base {
            out.push(marker.clone());
            out.extend(lines.iter().cloned());
        }
        out.push(self.separator.clone());
        out.extend(self.second.iter().cloned());
        out.push(self.end_marker.clone());
        out
    }

    pub fn sides(&self, order: SideOrder) -> (&[String], &[String]) {
        match order {
            SideOrder::ForkFirst => (&self.second, &self.first),
            SideOrder::OursFirst => (&self.first, &self.second),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Text(Vec<String>),
    Conflict(RawChunk),
}

/// A conflicted file split into plain text and conflict segments.
///
/// Line terminators are normalized to LF; `crlf` and `trailing_newline`
/// record what the source used so the file can be written back faithfully.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictFile {
    pub segments: Vec<Segment>,
    pub crlf: bool,
    pub trailing_newline: bool,
}

impl ConflictFile {
    pub fn parse(text: &str) -> Result<ConflictFile, ConflictParseError> {
        let crlf = text.contains("\r\n");
        let normalized = text.replace("\r\n", "\n");
        let trailing_newline = normalized.ends_with('\n');
        let body = normalized.strip_suffix('\n').unwrap_or(&normalized);
        let lines: Vec<&str> = if normalized.is_empty() {
            Vec::new()
        } else {
            body.split('\n').collect()
        };

        #[derive(PartialEq)]
        enum State {
            Outside,
            First,
            Base,
            Second,
        }

        let mut segments = Vec::new();
        let mut text_buf: Vec<String> = Vec::new();
        let mut state = State::Outside;
        let mut chunk: Option<RawChunk> = None;

        for (idx, &line) in lines.iter().enumerate() {
            let lineno = idx + 1;
            let unbalanced = |reason| ConflictParseError::UnbalancedMarkers {
                line: lineno,
                reason,
            };
            let marker = classify_marker(line);
            match (&state, marker) {
                (State::Outside, None) => text_buf.push(line.to_string()),
                (State::Outside, Some(Marker::Start)) => {
                    if !text_buf.is_empty() {
                        segments.push(Segment::Text(std::mem::take(&mut text_buf)));
                    }
                    chunk = Some(RawChunk {
                        start_marker: line.to_string(),
                        first: Vec::new(),
                        base: None,
                        separator: String::new(),
                        second: Vec::new(),
                        end_marker: String::new(),
                    });
                    state = State::First;
                }
                (State::Outside, Some(_)) => {
                    return Err(unbalanced("marker outside of a conflict region"))
                }
                (_, Some(Marker::Start)) => return Err(unbalanced("nested conflict start")),
                (State::First, None) => chunk.as_mut().unwrap().first.push(line.to_string()),
                (State::First, Some(Marker::Base)) => {
                    chunk.as_mut().unwrap().base = Some((line.to_string(), Vec::new()));
                    state = State::Base;
                }
                (State::First | State::Base, Some(Marker::Separator)) => {
                    chunk.as_mut().unwrap().separator = line.to_string();
                    state = State::Second;
                }
                (State::First | State::Base, Some(Marker::End)) => {
                    return Err(unbalanced("conflict end before separator"))
                }
                (State::Base, None) => {
                    chunk.as_mut().unwrap().base.as_mut().unwrap().1.push(line.to_string())
                }
                (State::Base, Some(Marker::Base)) => return Err(unbalanced("repeated base marker")),
                (State::Second, None) => chunk.as_mut().unwrap().second.push(line.to_string()),
                (State::Second, Some(Marker::End)) => {
                    let mut done = chunk.take().unwrap();
                    done.end_marker = line.to_string();
                    segments.push(Segment::Conflict(done));
                    state = State::Outside;
                }
                (State::Second, Some(_)) => {
                    return Err(unbalanced("unexpected marker in second section"))
                }
            }
        }
        if state != State::Outside {
            return Err(ConflictParseError::UnbalancedMarkers {
                line: lines.len(),
                reason: "unterminated conflict region",
            });
        }
        if !text_buf.is_empty() {
            segments.push(Segment::Text(text_buf));
        }
        Ok(ConflictFile {
            segments,
            crlf,
            trailing_newline,
        })
    }

    pub fn chunks(&self) -> impl Iterator<Item = &RawChunk> {
        self.segments.iter().filter_map(|s| match s {
            Segment::Conflict(c) => Some(c),
            Segment::Text(_) => None,
        })
    }

    pub fn chunk_count(&self) -> usize {
        self.chunks().count()
    }

    /// Every non-conflict line, in file order.
    pub fn outside_lines(&self) -> Vec<String> {
        self.segments
            .iter()
            .filter_map(|s| match s {
                Segment::Text(lines) => Some(lines.iter().cloned()),
                Segment::Conflict(_) => None,
            })
            .flatten()
            .collect()
    }

    /// Builds one [`ConflictInput`] per chunk with siblings and outside content filled in.
    pub fn to_inputs(&self, file_path: &str, order: SideOrder) -> Vec<ConflictInput> {
        let outside = self.outside_lines();
        let bare: Vec<ConflictInput> = self
            .chunks()
            .enumerate()
            .map(|(index, chunk)| {
                let (main, fork) = chunk.sides(order);
                ConflictInput {
                    file_path: file_path.to_string(),
                    chunk_index: index,
                    main_nodes: tokenize_nodes(main, RegionKind::Main),
                    fork_nodes: tokenize_nodes(fork, RegionKind::Fork),
                    outside_content: outside.clone(),
                    sibling_chunks: Vec::new(),
                    header_contents: BTreeMap::new(),
                }
            })
            .collect();
        bare.iter()
            .map(|input| {
                let mut full = input.clone();
                full.sibling_chunks = bare
                    .iter()
                    .filter(|other| other.chunk_index != input.chunk_index)
                    .cloned()
                    .collect();
                full
            })
            .collect()
    }

    /// Reassembles the file, replacing chunks that have a resolution.
    ///
    /// `resolutions[i]` is the replacement for chunk `i`; `None` keeps the
    /// original marker lines.
    pub fn render_with(&self, resolutions: &[Option<Vec<String>>]) -> String {
        let mut lines: Vec<String> = Vec::new();
        let mut chunk_idx = 0;
        for segment in &self.segments {
            match segment {
                Segment::Text(text) => lines.extend(text.iter().cloned()),
                Segment::Conflict(chunk) => {
                    match resolutions.get(chunk_idx).and_then(Option::as_ref) {
                        Some(resolved) => lines.extend(resolved.iter().cloned()),
                        None => lines.extend(chunk.marker_lines()),
                    }
                    chunk_idx += 1;
                }
            }
        }
        let eol = if self.crlf { "\r\n" } else { "\n" };
        let mut out = lines.join(eol);
        if self.trailing_newline && !lines.is_empty() {
            out.push_str(eol);
        }
        out
    }
}

/// One conflict chunk as seen by a resolution program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictInput {
    pub file_path: String,
    pub chunk_index: usize,
    pub main_nodes: Vec<Node>,
    pub fork_nodes: Vec<Node>,
    /// The file with every conflict region elided, one entry per line.
    pub outside_content: Vec<String>,
    /// The other chunks of the same file. Their own sibling lists are empty.
    pub sibling_chunks: Vec<ConflictInput>,
    /// Header text keyed by include path, when available.
    pub header_contents: BTreeMap<String, String>,
}

impl ConflictInput {
    /// A standalone chunk with no surrounding file content.
    pub fn from_regions(file_path: &str, main: &[&str], fork: &[&str]) -> ConflictInput {
        ConflictInput {
            file_path: file_path.to_string(),
            chunk_index: 0,
            main_nodes: tokenize_nodes(main, RegionKind::Main),
            fork_nodes: tokenize_nodes(fork, RegionKind::Fork),
            outside_content: Vec::new(),
            sibling_chunks: Vec::new(),
            header_contents: BTreeMap::new(),
        }
    }

    pub fn region(&self, region: RegionKind) -> &[Node] {
        match region {
            RegionKind::Main => &self.main_nodes,
            RegionKind::Fork => &self.fork_nodes,
            RegionKind::Outside => &[],
        }
    }

    /// Main nodes followed by fork nodes.
    pub fn region_nodes(&self) -> impl Iterator<Item = &Node> {
        self.main_nodes.iter().chain(self.fork_nodes.iter())
    }

    /// Distinct include paths of both regions, sorted.
    pub fn include_paths(&self) -> Vec<String> {
        let mut paths: Vec<String> = self
            .region_nodes()
            .filter_map(|n| n.include_path().map(str::to_string))
            .collect();
        paths.sort();
        paths.dedup();
        paths
    }
}

/// Parses a conflicted file into its chunks.
///
/// A file without markers yields an empty list.
pub fn parse_conflict_file(
    text: &str,
    file_path: &str,
    order: SideOrder,
) -> Result<Vec<ConflictInput>, ConflictParseError> {
    Ok(ConflictFile::parse(text)?.to_inputs(file_path, order))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConflictKind {
    Include,
    Macro,
    Mixed,
    Other,
}

/// Classifies a chunk by the kinds of its non-blank nodes.
pub fn conflict_kind(input: &ConflictInput) -> ConflictKind {
    let mut includes = false;
    let mut macros = false;
    for node in input.region_nodes().filter(|n| !n.is_blank()) {
        match node.kind() {
            NodeKind::Include => includes = true,
            NodeKind::Macro => macros = true,
            NodeKind::RawLine => return ConflictKind::Other,
        }
    }
    match (includes, macros) {
        (true, false) => ConflictKind::Include,
        (false, true) => ConflictKind::Macro,
        (true, true) => ConflictKind::Mixed,
        (false, false) => ConflictKind::Other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NATIVE_LIBRARY: &str = "\
#include \"base/files/file_path.h\"
<<<<<<< HEAD
#include \"base/logging.h\"
#include \"base/scoped_native_library.h\"
=======
#include \"base/notreached.h\"
>>>>>>> upstream
namespace foo {
";

    #[test]
    fn parses_single_chunk_fork_first() {
        let chunks = parse_conflict_file(NATIVE_LIBRARY, "a.cc", SideOrder::ForkFirst).unwrap();
        assert_eq!(chunks.len(), 1);
        let c = &chunks[0];
        assert_eq!(c.fork_nodes.len(), 2);
        assert_eq!(c.main_nodes.len(), 1);
        assert!(c.fork_nodes.iter().all(|n| n.kind() == NodeKind::Include));
        assert_eq!(c.main_nodes[0].include_path(), Some("base/notreached.h"));
        assert_eq!(
            c.outside_content,
            vec!["#include \"base/files/file_path.h\"", "namespace foo {"]
        );
        assert!(c.sibling_chunks.is_empty());
    }

    #[test]
    fn ours_first_swaps_sides() {
        let chunks = parse_conflict_file(NATIVE_LIBRARY, "a.cc", SideOrder::OursFirst).unwrap();
        assert_eq!(chunks[0].main_nodes.len(), 2);
        assert_eq!(chunks[0].fork_nodes.len(), 1);
    }

    #[test]
    fn no_markers_is_empty() {
        assert!(parse_conflict_file("int x;\n", "a.cc", SideOrder::ForkFirst)
            .unwrap()
            .is_empty());
        assert!(parse_conflict_file("", "a.cc", SideOrder::ForkFirst)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn two_chunks_are_siblings() {
        let text = "a\n<<<<<<< x\nb\n=======\nc\n>>>>>>> y\nd\n<<<<<<< x\ne\n=======\n>>>>>>> y\nf\n";
        let chunks = parse_conflict_file(text, "a.cc", SideOrder::ForkFirst).unwrap();
        assert_eq!(chunks.len(), 2);
        assert_eq!(chunks[0].sibling_chunks.len(), 1);
        assert_eq!(chunks[0].sibling_chunks[0].chunk_index, 1);
        assert_eq!(chunks[1].sibling_chunks[0].chunk_index, 0);
        assert_eq!(chunks[1].main_nodes.len(), 0);
        assert_eq!(chunks[1].fork_nodes[0].raw_text(), "e");
        assert_eq!(chunks[0].outside_content, vec!["a", "d", "f"]);
    }

    #[test]
    fn diff3_base_is_dropped() {
        let text = "<<<<<<< ours\nx\n||||||| base\nold\n=======\ny\n>>>>>>> theirs\n";
        let chunks = parse_conflict_file(text, "a.cc", SideOrder::OursFirst).unwrap();
        assert_eq!(chunks[0].main_nodes[0].raw_text(), "x");
        assert_eq!(chunks[0].fork_nodes[0].raw_text(), "y");
        assert_eq!(chunks[0].main_nodes.len(), 1);
    }

    #[test]
    fn unbalanced_inputs_are_rejected() {
        for text in [
            "<<<<<<< a\nx\n",
            "<<<<<<< a\nx\n>>>>>>> b\n",
            "=======\n",
            "<<<<<<< a\n<<<<<<< b\n=======\n>>>>>>> c\n",
            "x\n>>>>>>> b\n",
        ] {
            assert!(
                matches!(
                    parse_conflict_file(text, "a", SideOrder::ForkFirst),
                    Err(ConflictParseError::UnbalancedMarkers { .. })
                ),
                "{text:?}"
            );
        }
    }

    #[test]
    fn longer_marker_runs_are_content() {
        let text = "<<<<<<<< not a marker\n";
        assert!(parse_conflict_file(text, "a", SideOrder::ForkFirst)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn crlf_round_trips_through_render() {
        let text = "a\r\n<<<<<<< x\r\nb\r\n=======\r\nc\r\n>>>>>>> y\r\n";
        let file = ConflictFile::parse(text).unwrap();
        assert!(file.crlf);
        assert_eq!(file.render_with(&[None]), text);
        assert_eq!(file.render_with(&[Some(vec!["z".into()])]), "a\r\nz\r\n");
    }

    #[test]
    fn kinds() {
        let inc = ConflictInput::from_regions("a.cc", &["#include <a.h>"], &["#include <b.h>", ""]);
        assert_eq!(conflict_kind(&inc), ConflictKind::Include);
        let mac = ConflictInput::from_regions("a.cc", &["TEST_F(A, B) {"], &["TEST_P(A, B) {"]);
        assert_eq!(conflict_kind(&mac), ConflictKind::Macro);
        let mixed = ConflictInput::from_regions("a.cc", &["TEST_F(A, B) {"], &["#include <b.h>"]);
        assert_eq!(conflict_kind(&mixed), ConflictKind::Mixed);
        let other = ConflictInput::from_regions("a.cc", &["#include <a.h>"], &["int x;"]);
        assert_eq!(conflict_kind(&other), ConflictKind::Other);
        let empty = ConflictInput::from_regions("a.cc", &[], &[]);
        assert_eq!(conflict_kind(&empty), ConflictKind::Other);
    }
}
