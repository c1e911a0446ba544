use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::{json, Value};

use super::load::CorpusCase;
use crate::conflict::{conflict_kind, ConflictKind, Node};
use crate::dsl::{run_program_with, Program, Suggestion};
use crate::synth::SynthConfig;

/// Outcome counts over a set of cases.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub total: usize,
    pub matched: usize,
    pub mismatched: usize,
    pub no_suggestion: usize,
    /// Cases where the guard held but evaluation failed. Counted as no suggestion.
    pub errors: usize,
}

impl Tally {
    pub fn suggested(&self) -> usize {
        self.matched + self.mismatched
    }

    /// `None` when nothing was suggested.
    pub fn accuracy(&self) -> Option<f64> {
        (self.suggested() > 0).then(|| self.matched as f64 / self.suggested() as f64)
    }

    pub fn coverage(&self) -> Option<f64> {
        (self.total > 0).then(|| self.suggested() as f64 / self.total as f64)
    }

    fn record(&mut self, outcome: Outcome) {
        self.total += 1;
        match outcome {
            Outcome::Matched => self.matched += 1,
            Outcome::Mismatched => self.mismatched += 1,
            Outcome::NoSuggestion => self.no_suggestion += 1,
            Outcome::Error => {
                self.no_suggestion += 1;
                self.errors += 1;
            }
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "total": self.total,
            "suggested": self.suggested(),
            "matched": self.matched,
            "mismatched": self.mismatched,
            "no_suggestion": self.no_suggestion,
            "errors": self.errors,
            "accuracy": self.accuracy(),
            "coverage": self.coverage(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Matched,
    Mismatched,
    NoSuggestion,
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProgramRow {
    pub name: String,
    pub program: Program,
    pub tally: Tally,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    /// Each program run alone over every case.
    pub programs: Vec<ProgramRow>,
    /// First suggestion wins, programs tried in order.
    pub combined: Tally,
    /// Combined outcome per resolution label; `unlabeled` for cases without one.
    pub by_label: BTreeMap<String, Tally>,
}

fn matches(suggested: &[Node], human: &[Node], case: &CorpusCase, config: &SynthConfig) -> bool {
    if config.order_insensitive_includes && conflict_kind(&case.conflict) == ConflictKind::Include {
        crate::synth::same_multiset(suggested, human)
    } else {
        suggested == human
    }
}

fn outcome(program: &Program, case: &CorpusCase, config: &SynthConfig) -> Outcome {
    match run_program_with(program, &case.conflict, &config.keywords) {
        Suggestion::Resolved(nodes) if matches(&nodes, &case.human_resolution, case, config) => Outcome::Matched,
        Suggestion::Resolved(_) => Outcome::Mismatched,
        Suggestion::NoSuggestion => Outcome::NoSuggestion,
        Suggestion::Failed(_) => Outcome::Error,
    }
}

/// Runs the programs over the cases and compares with the human resolutions.
///
/// Rows are named `program 1`, `program 2`, ...; see [`EvalReport::rename`].
pub fn evaluate(programs: &[Program], cases: &[CorpusCase], config: &SynthConfig) -> EvalReport {
    let mut rows: Vec<ProgramRow> = programs
        .iter()
        .enumerate()
        .map(|(i, p)| ProgramRow {
            name: format!("program {}", i + 1),
            program: p.clone(),
            tally: Tally::default(),
        })
        .collect();
    let mut combined = Tally::default();
    let mut by_label: BTreeMap<String, Tally> = BTreeMap::new();
    for case in cases {
        let mut first = Outcome::NoSuggestion;
        for row in &mut rows {
            let o = outcome(&row.program, case, config);
            row.tally.record(o);
            if matches!(first, Outcome::NoSuggestion | Outcome::Error) && o != Outcome::NoSuggestion {
                first = o;
            }
        }
        combined.record(first);
        let label = case.label.map_or("unlabeled".to_string(), |l| l.to_string());
        by_label.entry(label).or_default().record(first);
    }
    EvalReport {
        programs: rows,
        combined,
        by_label,
    }
}

fn percent(x: Option<f64>) -> String {
    x.map_or("N/A".to_string(), |v| format!("{:.1}%", v * 100.0))
}

impl EvalReport {
    pub fn rename<I: IntoIterator<Item = String>>(&mut self, names: I) {
        for (row, name) in self.programs.iter_mut().zip(names) {
            row.name = name;
        }
    }

    pub fn to_json(&self) -> Value {
        let programs: Vec<Value> = self
            .programs
            .iter()
            .map(|r| {
                let mut v = json!({ "name": r.name, "program": r.program.to_string() });
                if let (Value::Object(obj), Value::Object(t)) = (&mut v, r.tally.to_json()) {
                    obj.extend(t);
                }
                v
            })
            .collect();
        let labels: serde_json::Map<String, Value> =
            self.by_label.iter().map(|(k, t)| (k.clone(), t.to_json())).collect();
        json!({
            "programs": programs,
            "combined": self.combined.to_json(),
            "by_label": labels,
        })
    }

    /// Aligned text table, one row per program plus the combined row.
    pub fn to_table(&self) -> String {
        let mut rows: Vec<[String; 7]> = vec![[
            "program".into(),
            "total".into(),
            "suggested".into(),
            "matched".into(),
            "mismatched".into(),
            "accuracy".into(),
            "coverage".into(),
        ]];
        let row = |name: &str, t: &Tally| {
            [
                name.to_string(),
                t.total.to_string(),
                t.suggested().to_string(),
                t.matched.to_string(),
                t.mismatched.to_string(),
                percent(t.accuracy()),
                percent(t.coverage()),
            ]
        };
        for r in &self.programs {
            rows.push(row(&r.name, &r.tally));
        }
        rows.push(row("combined", &self.combined));
        for (label, t) in &self.by_label {
            rows.push(row(&format!("label {label}"), t));
        }
        render_table(&rows)
    }
}

pub(crate) fn render_table<const N: usize>(rows: &[[String; N]]) -> String {
    let mut widths = [0usize; N];
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for r in rows {
        let mut line = String::new();
        for (i, cell) in r.iter().enumerate() {
            if i == 0 {
                let _ = write!(line, "{cell:<w$}", w = widths[i]);
            } else {
                let _ = write!(line, "  {cell:>w$}", w = widths[i]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
