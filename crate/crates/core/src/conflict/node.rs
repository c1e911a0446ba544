use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::LazyLock;

use regex::Regex;

/// Which part of a conflicted file a line came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionKind {
    Main,
    Fork,
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    Include,
    Macro,
    RawLine,
}

static INCLUDE_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r#"^#\s*include\s*("[^"]+"|<[^>]+>)$"#).unwrap());
static MACRO_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^([A-Z][A-Z0-9_]*)\s*(\(.*)$").unwrap());

/// The atomic unit the resolution language selects, concatenates and removes.
///
/// Two nodes are equal when they have the same kind and the same children
/// (for includes and macros) or the same normalized text (for raw lines).
/// The original line and the region it came from are carried along for
/// rendering and diagnostics but never take part in equality.
#[derive(Debug, Clone)]
pub struct Node {
    kind: NodeKind,
    raw_text: String,
    children: Vec<String>,
    original: String,
    region: RegionKind,
}

impl Node {
    /// Tokenizes a single line.
    pub fn from_line(line: &str, region: RegionKind) -> Node {
        let line = line.strip_suffix('\r').unwrap_or(line);
        let normalized = normalize_whitespace(line);
        let (kind, children, raw_text) = if let Some(caps) = INCLUDE_RE.captures(&normalized) {
            let path = caps[1].to_string();
            let raw = format!("#include {path}");
            (NodeKind::Include, vec!["#include".to_string(), path], raw)
        } else if let Some(caps) = MACRO_RE.captures(&normalized) {
            (
                NodeKind::Macro,
                vec![caps[1].to_string(), caps[2].to_string()],
                normalized.clone(),
            )
        } else {
            (NodeKind::RawLine, Vec::new(), normalized)
        };
        Node {
            kind,
            raw_text,
            children,
            original: line.to_string(),
            region,
        }
    }

    pub fn include(path_token: &str) -> Node {
        let token = if path_token.starts_with('"') || path_token.starts_with('<') {
            path_token.to_string()
        } else {
            format!("\"{path_token}\"")
        };
        Node::from_line(&format!("#include {token}"), RegionKind::Outside)
    }

    pub fn kind(&self) -> NodeKind {
        self.kind
    }

    pub fn raw_text(&self) -> &str {
        &self.raw_text
    }

    pub fn children(&self) -> &[String] {
        &self.children
    }

    /// The line as it appeared in the source, without its line terminator.
    pub fn original(&self) -> &str {
        &self.original
    }

    pub fn region(&self) -> RegionKind {
        self.region
    }

    pub fn is_blank(&self) -> bool {
        self.kind == NodeKind::RawLine && self.raw_text.is_empty()
    }

    /// Include path without its quotes or angle brackets.
    pub fn include_path(&self) -> Option<&str> {
        match self.kind {
            NodeKind::Include => {
                let token = &self.children[1];
                Some(&token[1..token.len() - 1])
            }
            _ => None,
        }
    }

    pub fn macro_name(&self) -> Option<&str> {
        match self.kind {
            NodeKind::Macro => Some(&self.children[0]),
            _ => None,
        }
    }

    pub fn macro_args(&self) -> Option<&str> {
        match self.kind {
            NodeKind::Macro => Some(&self.children[1]),
            _ => None,
        }
    }

    /// Canonical rendering, rebuilt from the children where there are any.
    pub fn render(&self) -> String {
        match self.kind {
            NodeKind::Include => format!("{} {}", self.children[0], self.children[1]),
            NodeKind::Macro => format!("{}{}", self.children[0], self.children[1]),
            NodeKind::RawLine => self.raw_text.clone(),
        }
    }
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && if self.children.is_empty() && other.children.is_empty() {
                self.raw_text == other.raw_text
            } else {
                self.children == other.children
            }
    }
}

impl Eq for Node {}

impl Hash for Node {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.kind.hash(state);
        if self.children.is_empty() {
            self.raw_text.hash(state);
        } else {
            self.children.hash(state);
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Strips leading and trailing whitespace and collapses internal runs to one space.
pub fn normalize_whitespace(line: &str) -> String {
    line.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// One node per line.
pub fn tokenize_nodes<S: AsRef<str>>(lines: &[S], region: RegionKind) -> Vec<Node> {
    lines
        .iter()
        .map(|l| Node::from_line(l.as_ref(), region))
        .collect()
}

/// Splits text into lines (LF or CRLF) and tokenizes them.
pub fn tokenize_text(text: &str, region: RegionKind) -> Vec<Node> {
    if text.is_empty() {
        return Vec::new();
    }
    let text = text.strip_suffix('\n').unwrap_or(text);
    text.split('\n')
        .map(|l| Node::from_line(l, region))
        .collect()
}

/// Canonical text for a node list, one line per node joined with `\n`.
pub fn render_nodes(nodes: &[Node]) -> String {
    nodes
        .iter()
        .map(Node::render)
        .collect::<Vec<_>>()
        .join("\n")
}
