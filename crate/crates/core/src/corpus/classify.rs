//! File-type, size and location classifiers for conflict chunks.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::conflict::{ConflictInput, Node, NodeKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FileType {
    #[serde(rename = "C++")]
    Cpp,
    Dependency,
    Headers,
    Build,
    Python,
    Data,
    Text,
    Others,
}

impl FileType {
    pub const ALL: [FileType; 8] = [
        FileType::Cpp,
        FileType::Dependency,
        FileType::Headers,
        FileType::Build,
        FileType::Python,
        FileType::Data,
        FileType::Text,
        FileType::Others,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FileType::Cpp => "C++",
            FileType::Dependency => "Dependency",
            FileType::Headers => "Headers",
            FileType::Build => "Build",
            FileType::Python => "Python",
            FileType::Data => "Data",
            FileType::Text => "Text",
            FileType::Others => "Others",
        }
    }
}

impl fmt::Display for FileType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn classify_file_type(path: &str) -> FileType {
    let p = Path::new(path);
    let name = p.file_name().and_then(|n| n.to_str()).unwrap_or(path);
    let ext = p
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .unwrap_or_default();
    if name == "DEPS" {
        return FileType::Dependency;
    }
    if name == "BUILD.gn" {
        return FileType::Build;
    }
    if name.starts_with("README") {
        return FileType::Text;
    }
    match ext.as_str() {
        "cc" | "cpp" | "cxx" => FileType::Cpp,
        "h" | "hpp" | "hh" => FileType::Headers,
        "gni" => FileType::Dependency,
        "gn" | "ninja" | "stamp" => FileType::Build,
        "py" | "pyl" => FileType::Python,
        "mm" | "grd" => FileType::Data,
        "md" | "txt" => FileType::Text,
        _ => FileType::Others,
    }
}

/// Region length buckets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SizeBucket {
    #[serde(rename = "1-2")]
    L1To2,
    #[serde(rename = "3-4")]
    L3To4,
    #[serde(rename = "5-6")]
    L5To6,
    #[serde(rename = "7-8")]
    L7To8,
    #[serde(rename = "9-10")]
    L9To10,
    #[serde(rename = "11-15")]
    L11To15,
    #[serde(rename = "16-20")]
    L16To20,
    #[serde(rename = "21-25")]
    L21To25,
    #[serde(rename = "26-30")]
    L26To30,
    #[serde(rename = "31-40")]
    L31To40,
    #[serde(rename = "41-50")]
    L41To50,
    #[serde(rename = ">50")]
    Over50,
}

impl SizeBucket {
    pub const ALL: [SizeBucket; 12] = [
        SizeBucket::L1To2,
        SizeBucket::L3To4,
        SizeBucket::L5To6,
        SizeBucket::L7To8,
        SizeBucket::L9To10,
        SizeBucket::L11To15,
        SizeBucket::L16To20,
        SizeBucket::L21To25,
        SizeBucket::L26To30,
        SizeBucket::L31To40,
        SizeBucket::L41To50,
        SizeBucket::Over50,
    ];

    /// Inclusive line range; the last bucket is open-ended.
    pub fn range(self) -> (usize, Option<usize>) {
        match self {
            SizeBucket::L1To2 => (1, Some(2)),
            SizeBucket::L3To4 => (3, Some(4)),
            SizeBucket::L5To6 => (5, Some(6)),
            SizeBucket::L7To8 => (7, Some(8)),
            SizeBucket::L9To10 => (9, Some(10)),
            SizeBucket::L11To15 => (11, Some(15)),
            SizeBucket::L16To20 => (16, Some(20)),
            SizeBucket::L21To25 => (21, Some(25)),
            SizeBucket::L26To30 => (26, Some(30)),
            SizeBucket::L31To40 => (31, Some(40)),
            SizeBucket::L41To50 => (41, Some(50)),
            SizeBucket::Over50 => (51, None),
        }
    }

    /// `None` for an empty region.
    pub fn for_lines(n: usize) -> Option<SizeBucket> {
        SizeBucket::ALL
            .into_iter()
            .find(|b| match b.range() {
                (lo, Some(hi)) => (lo..=hi).contains(&n),
                (lo, None) => n >= lo,
            })
    }

    pub fn label(self) -> String {
        match self.range() {
            (lo, Some(hi)) => format!("{lo}-{hi}"),
            (_, None) => ">50".to_string(),
        }
    }
}

impl fmt::Display for SizeBucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `(main, fork)` buckets by region line count.
pub fn classify_size(input: &ConflictInput) -> (Option<SizeBucket>, Option<SizeBucket>) {
    (
        SizeBucket::for_lines(input.main_nodes.len()),
        SizeBucket::for_lines(input.fork_nodes.len()),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Location {
    Condition,
    Declare,
    Expression,
    Include,
    Loop,
    Macro,
    Method,
    Others,
}

impl Location {
    pub const ALL: [Location; 8] = [
        Location::Condition,
        Location::Declare,
        Location::Expression,
        Location::Include,
        Location::Loop,
        Location::Macro,
        Location::Method,
        Location::Others,
    ];
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

static CONDITION_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^(\}\s*)?(if\b|else\b|switch\b|case\b|default\s*:|#\s*(if|ifdef|ifndef|elif|else|endif)\b)").unwrap()
});
static LOOP_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^(\}\s*)?(for|while|do)\b").unwrap());
static DECLARE_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"^((class|struct|enum|union|namespace|using|typedef|friend)\b|((static|const|constexpr|extern|inline|mutable|volatile)\s+)*[A-Za-z_][\w:]*(\s*<[^;()]*>)?[\s\*&]+[\*&]*[A-Za-z_]\w*(\[[^\]]*\])?\s*(=[^;]*|\{[^;]*\})?;$)",
    )
    .unwrap()
});
static METHOD_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^([\w:<>,\*&~]+\s+)*[\*&]*~?[A-Za-z_][\w:~]*\s*\([^;]*\)?\s*(const\s*)?(override\s*)?(final\s*)?(\{\s*)?$").unwrap()
});
static PROTOTYPE_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^([\w:<>,\*&~]+\s+)+[\*&]*~?[A-Za-z_][\w:~]*\s*\([^;]*\)\s*(const\s*)?(override\s*)?(final\s*)?(=\s*(0|default|delete)\s*)?;$").unwrap()
});
static STATEMENT_KEYWORD_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(return|delete|throw|co_return|goto|break|continue)\b").unwrap());

/// Category of a single line; `None` for lines that carry no signal.
pub fn classify_line(node: &Node) -> Option<Location> {
    let text = node.raw_text().trim();
    if text.is_empty() || text.chars().all(|c| matches!(c, '{' | '}' | ';' | ')' | '(')) {
        return None;
    }
    if text.starts_with("//") || text.starts_with("/*") || text.starts_with('*') {
        return Some(Location::Others);
    }
    match node.kind() {
        NodeKind::Include => return Some(Location::Include),
        NodeKind::Macro => return Some(Location::Macro),
        NodeKind::RawLine => {}
    }
    if text.starts_with("#import") {
        return Some(Location::Include);
    }
    if CONDITION_RE.is_match(text) {
        return Some(Location::Condition);
    }
    if text.starts_with("#define") {
        return Some(Location::Macro);
    }
    if text.starts_with('#') {
        return Some(Location::Others);
    }
    if LOOP_RE.is_match(text) {
        return Some(Location::Loop);
    }
    if STATEMENT_KEYWORD_RE.is_match(text) {
        return Some(Location::Expression);
    }
    if DECLARE_RE.is_match(text) || PROTOTYPE_RE.is_match(text) {
        return Some(Location::Declare);
    }
    if METHOD_RE.is_match(text) && text.contains('(') {
        return Some(Location::Method);
    }
    Some(Location::Expression)
}

/// Plurality vote over the lines of both regions; ties give `Others`.
pub fn classify_location(input: &ConflictInput) -> Location {
    let mut counts = [0usize; 8];
    for node in input.region_nodes() {
        if let Some(loc) = classify_line(node) {
            counts[loc as usize] += 1;
        }
    }
    let best = *counts.iter().max().unwrap_or(&0);
    if best == 0 {
        return Location::Others;
    }
    let mut winners = Location::ALL.into_iter().filter(|l| counts[*l as usize] == best);
    match (winners.next(), winners.next()) {
        (Some(only), None) => only,
        _ => Location::Others,
    }
}

/// Resolution-pattern labels attached to corpus cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ResolutionLabel {
    AFSC,
    CH,
    Concat,
    DDC,
    FB,
    LC,
    RD,
    Rename,
    SR,
    Others,
}

impl ResolutionLabel {
    pub const ALL: [ResolutionLabel; 10] = [
        ResolutionLabel::AFSC,
        ResolutionLabel::CH,
        ResolutionLabel::Concat,
        ResolutionLabel::DDC,
        ResolutionLabel::FB,
        ResolutionLabel::LC,
        ResolutionLabel::RD,
        ResolutionLabel::Rename,
        ResolutionLabel::SR,
        ResolutionLabel::Others,
    ];
}

impl fmt::Display for ResolutionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for ResolutionLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ResolutionLabel::ALL
            .into_iter()
            .find(|l| l.to_string() == s)
            .ok_or_else(|| format!("unknown resolution label `{s}`"))
    }
}
