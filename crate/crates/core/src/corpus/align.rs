//! Recovering each chunk's resolution from the developer's final file.

use thiserror::Error;

use crate::conflict::{is_marker_line, tokenize_nodes, ConflictFile, ConflictParseError, Node, RegionKind, Segment};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AlignError {
    #[error(transparent)]
    Parse(#[from] ConflictParseError),
    #[error("resolved file still contains a conflict marker at line {line}")]
    MarkersInResolution { line: usize },
    #[error("cannot anchor chunk {chunk} in the resolved file")]
    AmbiguousAlignment { chunk: usize },
}

/// Splits text into lines, dropping `\r` line endings.
pub(crate) fn text_lines(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| l.strip_suffix('\r').unwrap_or(l).to_string())
        .collect()
}

/// Resolved lines for every chunk, or an error for chunks that cannot be
/// anchored unambiguously.
pub fn align_chunks(
    conflict_text: &str,
    resolved_text: &str,
) -> Result<Vec<Result<Vec<String>, AlignError>>, AlignError> {
    let file = ConflictFile::parse(conflict_text)?;
    let resolved = text_lines(resolved_text);
    if let Some(i) = resolved.iter().position(|l| is_marker_line(l)) {
        return Err(AlignError::MarkersInResolution { line: i + 1 });
    }

    // Position of each chunk within the outside lines.
    let mut outside: Vec<&str> = Vec::new();
    let mut gaps = Vec::new();
    for segment in &file.segments {
        match segment {
            Segment::Text(lines) => outside.extend(lines.iter().map(|l| l.strip_suffix('\r').unwrap_or(l))),
            Segment::Conflict(_) => gaps.push(outside.len()),
        }
    }
    let resolved_refs: Vec<&str> = resolved.iter().map(String::as_str).collect();
    let early = lcs_matching(&outside, &resolved_refs);
    let late = late_matching(&outside, &resolved_refs);

    let spans = |matching: &[Option<usize>]| -> Vec<(usize, usize)> {
        gaps.iter()
            .map(|&g| {
                let start = matching[..g].iter().rev().find_map(|m| *m).map_or(0, |p| p + 1);
                let end = matching[g..].iter().find_map(|m| *m).unwrap_or(resolved.len());
                (start, end)
            })
            .collect()
    };
    let early_spans = spans(&early);
    let late_spans = spans(&late);

    Ok(early_spans
        .iter()
        .enumerate()
        .map(|(chunk, &span)| {
            let lumped = early_spans
                .iter()
                .enumerate()
                .any(|(other, &s)| other != chunk && s == span && span.0 < span.1);
            // Equal content at different places still means the context matched two ways.
            let differs = span != late_spans[chunk];
            if lumped || differs {
                Err(AlignError::AmbiguousAlignment { chunk })
            } else {
                Ok(resolved[span.0..span.1].to_vec())
            }
        })
        .collect())
}

/// Node list per chunk. Fails if any chunk is ambiguous.
pub fn align_resolution(conflict_text: &str, resolved_text: &str) -> Result<Vec<Vec<Node>>, AlignError> {
    align_chunks(conflict_text, resolved_text)?
        .into_iter()
        .map(|r| r.map(|lines| tokenize_nodes(&lines, RegionKind::Outside)))
        .collect()
}

/// Longest common subsequence matching `a[i] -> b[j]`, preferring the
/// earliest positions in `b`.
fn lcs_matching(a: &[&str], b: &[&str]) -> Vec<Option<usize>> {
    let mut out = vec![None; a.len()];
    // A shared prefix needs no table. A shared suffix would, since matching
    // it greedily prefers late positions.
    let mut lo = 0;
    while lo < a.len() && lo < b.len() && a[lo] == b[lo] {
        out[lo] = Some(lo);
        lo += 1;
    }
    let am = &a[lo..];
    let bm = &b[lo..];
    let (n, m) = (am.len(), bm.len());
    if n == 0 || m == 0 {
        return out;
    }
    // suffix[i][j] = LCS length of am[i..] and bm[j..]
    let width = m + 1;
    let mut suffix = vec![0u32; (n + 1) * width];
    for i in (0..n).rev() {
        for j in (0..m).rev() {
            suffix[i * width + j] = if am[i] == bm[j] {
                suffix[(i + 1) * width + j + 1] + 1
            } else {
                suffix[(i + 1) * width + j].max(suffix[i * width + j + 1])
            };
        }
    }
    let (mut i, mut j) = (0, 0);
    while i < n && j < m {
        let here = suffix[i * width + j];
        if am[i] == bm[j] && here == suffix[(i + 1) * width + j + 1] + 1 {
            out[lo + i] = Some(lo + j);
            i += 1;
            j += 1;
        } else if suffix[i * width + j + 1] == here {
            j += 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Same as [`lcs_matching`] but preferring the latest positions in `b`.
fn late_matching(a: &[&str], b: &[&str]) -> Vec<Option<usize>> {
    let ra: Vec<&str> = a.iter().rev().copied().collect();
    let rb: Vec<&str> = b.iter().rev().copied().collect();
    let mut out = lcs_matching(&ra, &rb);
    out.reverse();
    out.into_iter().map(|m| m.map(|j| b.len() - 1 - j)).collect()
}
