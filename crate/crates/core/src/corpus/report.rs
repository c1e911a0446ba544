use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::classify::{
    classify_file_type, classify_location, classify_size, FileType, Location, ResolutionLabel,
    SizeBucket,
};
use super::evaluate::render_table;
use super::load::CorpusCase;

/// Counts of corpus cases under each taxonomy.
///
/// Every map lists all categories of its taxonomy, so each sums to `total`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub total: usize,
    pub file_types: Vec<(String, usize)>,
    /// Main region size; `empty` for zero-line regions.
    pub main_sizes: Vec<(String, usize)>,
    pub fork_sizes: Vec<(String, usize)>,
    /// `main/fork` bucket pairs that occur.
    pub size_pairs: Vec<(String, usize)>,
    /// Location is only defined for C++ and header files; others count as `n/a`.
    pub locations: Vec<(String, usize)>,
    pub labels: Vec<(String, usize)>,
}

fn counter<I: IntoIterator<Item = String>>(keys: I) -> Vec<(String, usize)> {
    keys.into_iter().map(|k| (k, 0)).collect()
}

fn bump(counts: &mut Vec<(String, usize)>, key: &str) {
    match counts.iter_mut().find(|(k, _)| k == key) {
        Some((_, n)) => *n += 1,
        None => counts.push((key.to_string(), 1)),
    }
}

fn bucket_name(b: Option<SizeBucket>) -> String {
    b.map_or("empty".to_string(), |b| b.label())
}

pub fn report(cases: &[CorpusCase]) -> ClassificationReport {
    let bucket_keys = || {
        SizeBucket::ALL
            .into_iter()
            .map(SizeBucket::label)
            .chain(["empty".to_string()])
    };
    let mut r = ClassificationReport {
        total: cases.len(),
        file_types: counter(FileType::ALL.into_iter().map(|f| f.label().to_string())),
        main_sizes: counter(bucket_keys()),
        fork_sizes: counter(bucket_keys()),
        size_pairs: Vec::new(),
        locations: counter(
            Location::ALL
                .into_iter()
                .map(|l| l.to_string())
                .chain(["n/a".to_string()]),
        ),
        labels: counter(
            ResolutionLabel::ALL
                .into_iter()
                .map(|l| l.to_string())
                .chain(["unlabeled".to_string()]),
        ),
    };
    let mut pairs: BTreeMap<(Option<SizeBucket>, Option<SizeBucket>), usize> = BTreeMap::new();
    for case in cases {
        let file_type = classify_file_type(case.file_path());
        bump(&mut r.file_types, file_type.label());
        let (main, fork) = classify_size(&case.conflict);
        bump(&mut r.main_sizes, &bucket_name(main));
        bump(&mut r.fork_sizes, &bucket_name(fork));
        *pairs.entry((main, fork)).or_default() += 1;
        let location = match file_type {
            FileType::Cpp | FileType::Headers => classify_location(&case.conflict).to_string(),
            _ => "n/a".to_string(),
        };
        bump(&mut r.locations, &location);
        let label = case.label.map_or("unlabeled".to_string(), |l| l.to_string());
        bump(&mut r.labels, &label);
    }
    r.size_pairs = pairs
        .into_iter()
        .map(|((m, f), n)| (format!("{}/{}", bucket_name(m), bucket_name(f)), n))
        .collect();
    r
}

impl ClassificationReport {
    pub fn count(&self, section: &[(String, usize)], key: &str) -> usize {
        section.iter().find(|(k, _)| k == key).map_or(0, |(_, n)| *n)
    }

    fn sections(&self) -> [(&'static str, &[(String, usize)]); 6] {
        [
            ("file_type", &self.file_types),
            ("main_size", &self.main_sizes),
            ("fork_size", &self.fork_sizes),
            ("size_pair", &self.size_pairs),
            ("location", &self.locations),
            ("label", &self.labels),
        ]
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("total".into(), json!(self.total));
        for (name, counts) in self.sections() {
            let section: Map<String, Value> = counts.iter().map(|(k, n)| (k.clone(), json!(n))).collect();
            out.insert(name.into(), Value::Object(section));
        }
        Value::Object(out)
    }

    /// One aligned table per taxonomy. Zero rows are omitted.
    pub fn to_table(&self) -> String {
        let mut out = format!("total cases: {}\n", self.total);
        for (name, counts) in self.sections() {
            let mut rows: Vec<[String; 3]> = vec![[name.to_string(), "count".into(), "share".into()]];
            for (k, n) in counts.iter().filter(|(_, n)| *n > 0) {
                let share = if self.total == 0 {
                    "N/A".to_string()
                } else {
                    format!("{:.1}%", *n as f64 * 100.0 / self.total as f64)
                };
                rows.push([k.clone(), n.to_string(), share]);
            }
            out.push('\n');
            out.push_str(&render_table(&rows));
        }
        out
    }
}
