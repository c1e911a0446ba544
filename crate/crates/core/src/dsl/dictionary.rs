use std::collections::{BTreeMap, BTreeSet};
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::ast::{Predicate, PredicateTag};
use crate::conflict::{tokenize_nodes, ConflictInput, Node, NodeKind, RegionKind};

/// Identifiers that mark a line as specific to one branch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct KeywordConfig {
    pub fork: Vec<String>,
    pub main: Vec<String>,
}

impl Default for KeywordConfig {
    fn default() -> Self {
        KeywordConfig {
            fork: vec!["ANONYMOUS".to_string(), "DISABLED".to_string()],
            main: Vec::new(),
        }
    }
}

static IDENT_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"[A-Za-z_][A-Za-z0-9_]*").unwrap());

/// Nodes matched by each predicate on one input.
///
/// A predicate holds exactly when its entry is non-empty. `FrequentPattern`
/// has one entry per include path found in the conflict regions; the
/// `FrequentPattern` pattern key resolves to the union of the entries for
/// the tracked paths (the paths named in the program's condition).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternDictionary {
    plain: BTreeMap<PredicateTag, Vec<Node>>,
    frequent: BTreeMap<String, Vec<Node>>,
    tracked: Vec<String>,
}

impl PatternDictionary {
    pub fn entry(&self, predicate: &Predicate) -> &[Node] {
        match predicate {
            Predicate::FrequentPattern(path) => {
                self.frequent.get(path).map(Vec::as_slice).unwrap_or(&[])
            }
            other => self
                .plain
                .get(&other.tag())
                .map(Vec::as_slice)
                .unwrap_or(&[]),
        }
    }

    /// Nodes selected by `Pattern(x, key)`.
    pub fn pattern(&self, key: PredicateTag) -> Vec<Node> {
        match key {
            PredicateTag::FrequentPattern => self
                .tracked
                .iter()
                .flat_map(|path| self.frequent.get(path).into_iter().flatten().cloned())
                .collect(),
            tag => self.plain.get(&tag).cloned().unwrap_or_default(),
        }
    }

    pub fn track_paths<I: IntoIterator<Item = String>>(mut self, paths: I) -> Self {
        self.tracked = paths.into_iter().collect();
        self
    }

    /// Every predicate that holds, in the fixed predicate order.
    pub fn true_predicates(&self) -> Vec<Predicate> {
        let mut out: Vec<Predicate> = PredicateTag::PLAIN
            .into_iter()
            .filter_map(Predicate::plain)
            .filter(|p| !self.entry(p).is_empty())
            .collect();
        out.extend(
            self.frequent
                .iter()
                .filter(|(_, nodes)| !nodes.is_empty())
                .map(|(path, _)| Predicate::FrequentPattern(path.clone())),
        );
        out
    }
}

fn basename(path: &str) -> &str {
    path.rsplit('/').next().unwrap_or(path)
}

/// Duplicate test: includes compare by file name (plus header text when both
/// are known), everything else by node equality. Blank lines never match.
fn same_content(a: &Node, b: &Node, headers: &BTreeMap<String, String>) -> bool {
    match (a.include_path(), b.include_path()) {
        (Some(pa), Some(pb)) => {
            basename(pa) == basename(pb)
                && match (headers.get(pa), headers.get(pb)) {
                    (Some(ha), Some(hb)) => ha == hb,
                    _ => true,
                }
        }
        (None, None) => !a.is_blank() && a == b,
        _ => false,
    }
}

fn normalize_ident(s: &str) -> String {
    s.chars()
        .filter(|c| *c != '_')
        .flat_map(char::to_lowercase)
        .collect()
}

fn include_stem(path: &str) -> String {
    let name = basename(path);
    normalize_ident(name.split('.').next().unwrap_or(name))
}

fn references(text: &str, stem: &str) -> bool {
    !stem.is_empty() && IDENT_RE.find_iter(text).any(|m| normalize_ident(m.as_str()) == stem)
}

fn identifiers(text: &str) -> BTreeSet<&str> {
    IDENT_RE
        .find_iter(text)
        .map(|m| m.as_str())
        .filter(|t| !t.chars().all(|c| c.is_ascii_digit()))
        .collect()
}

/// Computes the pattern dictionary for one input.
pub fn build_pattern_dictionary(input: &ConflictInput, keywords: &KeywordConfig) -> PatternDictionary {
    let headers = &input.header_contents;
    let outside = tokenize_nodes(&input.outside_content, RegionKind::Outside);
    let main = &input.main_nodes;
    let fork = &input.fork_nodes;

    let dup_in = |region: &[Node], others: &[Node]| -> Vec<Node> {
        region
            .iter()
            .filter(|n| others.iter().any(|o| same_content(n, o, headers)))
            .cloned()
            .collect()
    };
    let with_keyword = |region: &[Node], words: &[String]| -> Vec<Node> {
        region
            .iter()
            .filter(|n| words.iter().any(|w| !w.is_empty() && n.raw_text().contains(w.as_str())))
            .cloned()
            .collect()
    };

    let dependency: Vec<Node> = input
        .region_nodes()
        .filter(|n| {
            let Some(path) = n.include_path() else {
                return false;
            };
            let stem = include_stem(path);
            let outside_refs = outside
                .iter()
                .filter(|o| o.kind() != NodeKind::Include)
                .any(|o| references(o.raw_text(), &stem));
            let sibling_refs = input
                .sibling_chunks
                .iter()
                .flat_map(|s| s.region_nodes())
                .filter(|o| o.kind() != NodeKind::Include)
                .any(|o| references(o.raw_text(), &stem));
            !outside_refs && sibling_refs
        })
        .cloned()
        .collect();

    // Renamed test macros: one macro per region, different names, shared argument identifier.
    let mut main_hits = BTreeSet::new();
    let mut fork_hits = BTreeSet::new();
    for (i, m) in main.iter().enumerate().filter(|(_, n)| n.kind() == NodeKind::Macro) {
        let m_ids = identifiers(m.macro_args().unwrap_or_default());
        for (j, f) in fork.iter().enumerate().filter(|(_, n)| n.kind() == NodeKind::Macro) {
            if m.macro_name() == f.macro_name() {
                continue;
            }
            let f_ids = identifiers(f.macro_args().unwrap_or_default());
            if m_ids.intersection(&f_ids).next().is_some() {
                main_hits.insert(i);
                fork_hits.insert(j);
            }
        }
    }
    let rename: Vec<Node> = main_hits
        .into_iter()
        .map(|i| main[i].clone())
        .chain(fork_hits.into_iter().map(|j| fork[j].clone()))
        .collect();

    let mut plain = BTreeMap::new();
    plain.insert(PredicateTag::DuplicateMainFork, dup_in(main, fork));
    plain.insert(PredicateTag::DuplicateMainOutside, dup_in(main, &outside));
    plain.insert(PredicateTag::DuplicateForkOutside, dup_in(fork, &outside));
    plain.insert(PredicateTag::MainSpecific, with_keyword(main, &keywords.main));
    plain.insert(PredicateTag::ForkSpecific, with_keyword(fork, &keywords.fork));
    plain.insert(PredicateTag::Dependency, dependency);
    plain.insert(PredicateTag::Rename, rename);

    let mut frequent: BTreeMap<String, Vec<Node>> = BTreeMap::new();
    for n in input.region_nodes() {
        if let Some(path) = n.include_path() {
            frequent.entry(path.to_string()).or_default().push(n.clone());
        }
    }

    PatternDictionary {
        plain,
        frequent,
        tracked: Vec::new(),
    }
}
