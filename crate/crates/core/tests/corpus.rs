mod common;

use std::fs;
use std::path::Path;

use common::*;
use mergepbe::conflict::{Node, RegionKind};
use mergepbe::corpus::{evaluate, load_corpus, report, CorpusError, ResolutionLabel};
use mergepbe::dsl::{Condition, Predicate, Program, Selection, Transformation};
use mergepbe::synth::SynthConfig;

fn write_case(root: &Path, merge: &str, entry: &str, conflict: &str, resolved: Option<&str>, meta: &str) {
    let dir = root.join(merge).join(entry);
    fs::create_dir_all(&dir).unwrap();
    fs::write(dir.join("conflict.txt"), conflict).unwrap();
    if let Some(r) = resolved {
        fs::write(dir.join("resolved.txt"), r).unwrap();
    }
    fs::write(dir.join("meta.json"), meta).unwrap();
}

#[test]
fn sample_corpus_loads_in_order() {
    let dir = tempfile::tempdir().unwrap();
    write_sample_corpus(dir.path());
    let corpus = load_corpus(dir.path()).unwrap();
    assert!(corpus.diagnostics.is_empty(), "{:?}", corpus.diagnostics);
    let ids: Vec<String> = corpus.cases.iter().map(|c| c.id.to_string()).collect();
    assert_eq!(ids, ["merge-a/0001#0", "merge-b/0001#0", "merge-c/0001#0", "merge-d/0001#0"]);
    for (case, sample) in corpus.cases.iter().zip(SAMPLES) {
        assert_eq!(case.human_resolution, sample.output());
        assert_eq!(case.file_path(), sample.file_path);
    }
    assert_eq!(corpus.cases[2].label, Some(ResolutionLabel::FB));
}

#[test]
fn broken_entries_become_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    write_sample_corpus(root);
    let meta = r#"{"file_path": "x.cc"}"#;
    write_case(root, "merge-z", "missing", &NATIVE_LIBRARY.conflict_text(), None, meta);
    write_case(root, "merge-z", "badmeta", &NATIVE_LIBRARY.conflict_text(), Some(&NATIVE_LIBRARY.resolved_file()), "{");
    write_case(
        root,
        "merge-z",
        "marker",
        &NATIVE_LIBRARY.conflict_text(),
        Some("<<<<<<< still here\n"),
        meta,
    );
    write_case(
        root,
        "merge-z",
        "label",
        &NATIVE_LIBRARY.conflict_text(),
        Some(&NATIVE_LIBRARY.resolved_file()),
        r#"{"file_path": "x.cc", "label": "Nonsense"}"#,
    );
    let corpus = load_corpus(root).unwrap();
    assert_eq!(corpus.cases.len(), 5);
    assert_eq!(corpus.cases[4].label, None);
    let messages: Vec<&str> = corpus.diagnostics.iter().map(|d| d.message.as_str()).collect();
    assert_eq!(messages.len(), 4, "{messages:?}");
    assert!(messages.iter().any(|m| m.contains("missing resolution")));
    assert!(messages.iter().any(|m| m.contains("meta.json")));
    assert!(messages.iter().any(|m| m.contains("conflict marker")));
    assert!(messages.iter().any(|m| m.contains("unlabeled")));
}

#[test]
fn empty_or_missing_roots_fail() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(load_corpus(dir.path()), Err(CorpusError::EmptyCorpus(_))));
    assert!(matches!(load_corpus(&dir.path().join("nope")), Err(CorpusError::Root { .. })));
}

#[test]
fn headers_make_duplicates_content_sensitive() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    write_case(
        root,
        "m",
        "h",
        &CURSOR_SHARED.conflict_text(),
        Some(&CURSOR_SHARED.resolved_file()),
        &format!(r#"{{"file_path": "{}"}}"#, CURSOR_SHARED.file_path),
    );
    let headers = root.join("m/h/headers");
    fs::create_dir_all(headers.join("ui/base/mojom")).unwrap();
    fs::write(headers.join("ui/base/mojom/cursor_type.mojom-shared.h"), "enum A {};").unwrap();
    fs::write(headers.join("cursor_type.mojom-shared.h"), "enum B {};").unwrap();
    let corpus = load_corpus(root).unwrap();
    let input = &corpus.cases[0].conflict;
    assert_eq!(input.header_contents.len(), 2);
    // Same basename, different text: no longer a duplicate.
    let report = evaluate(&[dmf_program()], &corpus.cases, &SynthConfig::default());
    assert_eq!(report.combined.no_suggestion, 1);
}

#[test]
fn evaluation_rows_and_labels() {
    let dir = tempfile::tempdir().unwrap();
    write_sample_corpus(dir.path());
    let corpus = load_corpus(dir.path()).unwrap();
    let config = SynthConfig::default();

    let fb_only = evaluate(&[fb_program()], &corpus.cases[2..], &config);
    assert_eq!(fb_only.combined.accuracy(), Some(1.0));
    assert_eq!(fb_only.combined.coverage(), Some(1.0));

    let unrelated = Program::new(
        Condition::single(Predicate::Rename),
        Transformation::Select(Selection::Main),
    );
    let none = evaluate(std::slice::from_ref(&unrelated), &corpus.cases, &config);
    assert_eq!(none.combined.coverage(), Some(0.0));
    assert_eq!(none.combined.accuracy(), None);
    assert!(none.to_table().contains("N/A"));

    let both = evaluate(&[fb_program(), dmf_program(), unrelated], &corpus.cases, &config);
    let matched: Vec<usize> = both.programs.iter().map(|r| r.tally.matched).collect();
    assert_eq!(matched, [2, 2, 0]);
    assert_eq!(both.combined.matched, 4);
    assert_eq!(both.by_label["FB"].matched, 2);
    assert_eq!(both.by_label["RD"].matched, 2);
}

#[test]
fn order_insensitive_includes() {
    let dir = tempfile::tempdir().unwrap();
    write_sample_corpus(dir.path());
    let mut corpus = load_corpus(dir.path()).unwrap();
    // A developer who kept the same includes in another order.
    corpus.cases[2].human_resolution.reverse();
    let strict = evaluate(&[fb_program()], &corpus.cases[2..3], &SynthConfig::default());
    assert_eq!(strict.combined.mismatched, 1);
    let loose_config = SynthConfig {
        order_insensitive_includes: true,
        ..SynthConfig::default()
    };
    let loose = evaluate(&[fb_program()], &corpus.cases[2..3], &loose_config);
    assert_eq!(loose.combined.matched, 1);
}

#[test]
fn classification_of_samples() {
    let dir = tempfile::tempdir().unwrap();
    write_sample_corpus(dir.path());
    let corpus = load_corpus(dir.path()).unwrap();
    let r = report(&corpus.cases);
    assert_eq!(r.count(&r.file_types, "C++"), 4);
    assert_eq!(r.count(&r.locations, "Include"), 4);
    assert_eq!(r.count(&r.main_sizes, "1-2"), 4);
    assert_eq!(r.count(&r.fork_sizes, "1-2"), 4);
    assert_eq!(r.count(&r.labels, "FB"), 2);
    assert_eq!(r.count(&r.labels, "RD"), 2);
}

#[test]
fn crlf_corpus_entries_align() {
    let dir = tempfile::tempdir().unwrap();
    let conflict = NATIVE_LIBRARY.conflict_text().replace('\n', "\r\n");
    let resolved = NATIVE_LIBRARY.resolved_file().replace('\n', "\r\n");
    write_case(dir.path(), "m", "h", &conflict, Some(&resolved), r#"{"file_path": "a.cc"}"#);
    let corpus = load_corpus(dir.path()).unwrap();
    assert_eq!(corpus.cases[0].human_resolution, NATIVE_LIBRARY.output());
    assert!(corpus.cases[0]
        .human_resolution
        .iter()
        .all(|n| !n.original().ends_with('\r')));
    assert_eq!(
        corpus.cases[0].conflict.main_nodes,
        vec![Node::from_line("#include \"base/notreached.h\"", RegionKind::Main)]
    );
}
