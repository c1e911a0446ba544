use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use log::warn;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::align::align_chunks;
use super::classify::ResolutionLabel;
use crate::conflict::{tokenize_nodes, ConflictFile, ConflictInput, Node, RegionKind, SideOrder};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus root {path}: {source}")]
    Root { path: PathBuf, source: io::Error },
    #[error("no usable cases under {0}")]
    EmptyCorpus(PathBuf),
}

/// Per-case metadata stored next to the conflict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseMeta {
    pub file_path: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side_order: Option<SideOrder>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CaseId {
    pub merge_id: String,
    pub path_hash: String,
    pub chunk_index: usize,
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}#{}", self.merge_id, self.path_hash, self.chunk_index)
    }
}

/// One conflict chunk with the resolution the developer chose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusCase {
    pub id: CaseId,
    pub conflict: ConflictInput,
    pub human_resolution: Vec<Node>,
    pub label: Option<ResolutionLabel>,
}

impl CorpusCase {
    pub fn file_path(&self) -> &str {
        &self.conflict.file_path
    }
}

/// A problem with one corpus entry. The entry is skipped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub path: PathBuf,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub cases: Vec<CorpusCase>,
    pub diagnostics: Vec<Diagnostic>,
}

fn sorted_subdirs(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut dirs: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();
    Ok(dirs)
}

fn dir_name(p: &Path) -> String {
    p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Loads `<root>/<merge-id>/<path-hash>/` entries.
///
/// Each entry holds `conflict.txt`, `resolved.txt`, `meta.json` and an
/// optional `headers/` directory. Broken entries and chunks that cannot be
/// aligned are skipped and reported in [`Corpus::diagnostics`].
pub fn load_corpus(root: &Path) -> Result<Corpus, CorpusError> {
    let merges = sorted_subdirs(root).map_err(|source| CorpusError::Root {
        path: root.to_path_buf(),
        source,
    })?;
    let mut corpus = Corpus::default();
    for merge in merges {
        let entries = match sorted_subdirs(&merge) {
            Ok(e) => e,
            Err(e) => {
                corpus.diagnose(&merge, e.to_string());
                continue;
            }
        };
        for entry in entries {
            if let Err(message) = load_entry(&merge, &entry, &mut corpus) {
                corpus.diagnose(&entry, message);
            }
        }
    }
    if corpus.cases.is_empty() {
        return Err(CorpusError::EmptyCorpus(root.to_path_buf()));
    }
    Ok(corpus)
}

impl Corpus {
    fn diagnose(&mut self, path: &Path, message: String) {
        warn!("skipping {}: {message}", path.display());
        self.diagnostics.push(Diagnostic {
            path: path.to_path_buf(),
            message,
        });
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_entry(merge: &Path, entry: &Path, corpus: &mut Corpus) -> Result<(), String> {
    let conflict_text = read(&entry.join("conflict.txt"))?;
    let resolved_path = entry.join("resolved.txt");
    if !resolved_path.is_file() {
        return Err("missing resolution: no resolved.txt".to_string());
    }
    let resolved_text = read(&resolved_path)?;
    let meta: CaseMeta = serde_json::from_str(&read(&entry.join("meta.json"))?)
        .map_err(|e| format!("meta.json: {e}"))?;
    let label = match meta.label.as_deref() {
        None | Some("") => None,
        Some(s) => match s.parse::<ResolutionLabel>() {
            Ok(l) => Some(l),
            Err(e) => {
                corpus.diagnose(entry, format!("{e}; treating case as unlabeled"));
                None
            }
        },
    };
    let file = ConflictFile::parse(&conflict_text).map_err(|e| e.to_string())?;
    let order = meta.side_order.unwrap_or_default();
    let mut inputs = file.to_inputs(&meta.file_path, order);
    let headers = entry.join("headers");
    if headers.is_dir() {
        for input in &mut inputs {
            attach_headers(input, &headers);
        }
    }
    let aligned = align_chunks(&conflict_text, &resolved_text).map_err(|e| e.to_string())?;
    if inputs.is_empty() {
        return Err("conflict.txt has no conflict markers".to_string());
    }
    for (input, resolution) in inputs.into_iter().zip(aligned) {
        let id = CaseId {
            merge_id: dir_name(merge),
            path_hash: dir_name(entry),
            chunk_index: input.chunk_index,
        };
        match resolution {
            Ok(lines) => corpus.cases.push(CorpusCase {
                id,
                conflict: input,
                human_resolution: tokenize_nodes(&lines, RegionKind::Outside),
                label,
            }),
            Err(e) => corpus.diagnose(entry, format!("chunk {}: {e}", id.chunk_index)),
        }
    }
    Ok(())
}

/// Header text is looked up under the include path first, then the basename.
fn attach_headers(input: &mut ConflictInput, dir: &Path) {
    let paths = input.include_paths();
    for path in paths {
        let base = path.rsplit('/').next().unwrap_or(&path);
        let text = fs::read_to_string(dir.join(&path)).or_else(|_| fs::read_to_string(dir.join(base)));
        if let Ok(text) = text {
            input.header_contents.insert(path.clone(), text);
        }
    }
    for sibling in &mut input.sibling_chunks {
        attach_headers(sibling, dir);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_case(root: &Path, merge: &str, hash: &str, conflict: &str, resolved: Option<&str>, meta: &str) {
        let dir = root.join(merge).join(hash);
        fs::create_dir_all(&dir).unwrap();
        fs::write(dir.join("conflict.txt"), conflict).unwrap();
        if let Some(r) = resolved {
            fs::write(dir.join("resolved.txt"), r).unwrap();
        }
        fs::write(dir.join("meta.json"), meta).unwrap();
    }

    const CONFLICT: &str = "<<<<<<< fork\n#include \"f.h\"\n=======\n#include \"m.h\"\n>>>>>>> main\n";

    #[test]
    fn empty_root_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(load_corpus(dir.path()), Err(CorpusError::EmptyCorpus(_))));
        assert!(matches!(
            load_corpus(&dir.path().join("missing")),
            Err(CorpusError::Root { .. })
        ));
    }

    #[test]
    fn broken_entries_are_isolated() {
        let dir = tempfile::tempdir().unwrap();
        let meta = r#"{"file_path": "a.cc", "label": "FB"}"#;
        write_case(dir.path(), "m1", "h1", CONFLICT, Some("#include \"f.h\"\n"), meta);
        write_case(dir.path(), "m1", "h2", CONFLICT, None, meta);
        write_case(dir.path(), "m2", "h1", CONFLICT, Some(""), "{not json");
        let corpus = load_corpus(dir.path()).unwrap();
        assert_eq!(corpus.cases.len(), 1);
        assert_eq!(corpus.diagnostics.len(), 2);
        assert!(corpus.diagnostics[0].message.contains("missing resolution"));
        let case = &corpus.cases[0];
        assert_eq!(case.id.to_string(), "m1/h1#0");
        assert_eq!(case.label, Some(ResolutionLabel::FB));
        assert_eq!(case.human_resolution, vec![Node::include("f.h")]);
        assert_eq!(case.conflict.fork_nodes, vec![Node::include("f.h")]);
    }

    #[test]
    fn side_order_and_headers() {
        let dir = tempfile::tempdir().unwrap();
        write_case(
            dir.path(),
            "m",
            "h",
            CONFLICT,
            Some("#include \"m.h\"\n"),
            r#"{"file_path": "a.cc", "side_order": "ours-first"}"#,
        );
        let headers = dir.path().join("m/h/headers");
        fs::create_dir_all(&headers).unwrap();
        fs::write(headers.join("m.h"), "// m\n").unwrap();
        let corpus = load_corpus(dir.path()).unwrap();
        let case = &corpus.cases[0];
        assert_eq!(case.conflict.main_nodes, vec![Node::include("f.h")]);
        assert_eq!(case.conflict.header_contents.get("m.h").map(String::as_str), Some("// m\n"));
        assert_eq!(case.label, None);
    }
}
