//! Shared fixtures, generators and a brute-force oracle for integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use mergepbe::conflict::{parse_conflict_file, tokenize_text, ConflictInput, Node, RegionKind, SideOrder};
use mergepbe::dsl::{
    build_pattern_dictionary, eval_transformation, Condition, KeywordConfig, Predicate, PredicateTag, Program,
    Selection, Transformation,
};
use rand::seq::SliceRandom;
use rand::Rng;

/// One conflicted file from the sample examples, with its resolution.
pub struct SampleCase {
    pub name: &'static str,
    pub file_path: &'static str,
    pub fork: &'static [&'static str],
    pub main: &'static [&'static str],
    pub resolution: &'static [&'static str],
    pub head: &'static str,
    pub tail: &'static str,
}

impl SampleCase {
    /// Conflict text, fork section first.
    pub fn conflict_text(&self) -> String {
        format!(
            "{}<<<<<<< fork\n{}\n=======\n{}\n>>>>>>> main\n{}",
            self.head,
            self.fork.join("\n"),
            self.main.join("\n"),
            self.tail
        )
    }

    pub fn resolution_text(&self) -> String {
        let mut s = self.resolution.join("\n");
        if !s.is_empty() {
            s.push('\n');
        }
        s
    }

    pub fn resolved_file(&self) -> String {
        format!("{}{}{}", self.head, self.resolution_text(), self.tail)
    }

    pub fn input(&self) -> ConflictInput {
        parse_conflict_file(&self.conflict_text(), self.file_path, SideOrder::ForkFirst)
            .unwrap()
            .remove(0)
    }

    pub fn output(&self) -> Vec<Node> {
        tokenize_text(&self.resolution_text(), RegionKind::Outside)
    }

    pub fn example(&self) -> (ConflictInput, Vec<Node>) {
        (self.input(), self.output())
    }
}

pub const CURSOR_SHARED: SampleCase = SampleCase {
    name: "a",
    file_path: "ui/base/cursor/cursor.cc",
    fork: &[
        "#include \"ui/base/anonymous_ui_base_features.h\"",
        "#include \"ui/base/mojom/cursor_type.mojom-shared.h\"",
    ],
    main: &["#include \"ui/base/cursor/mojom/cursor_type.mojom-shared.h\""],
    resolution: &[
        "#include \"ui/base/anonymous_ui_base_features.h\"",
        "#include \"ui/base/mojom/cursor_type.mojom-shared.h\"",
    ],
    head: "#include \"ui/base/cursor/cursor.h\"\n\n",
    tail: "\nnamespace ui {\n",
};

pub const CURSOR_BLINK: SampleCase = SampleCase {
    name: "b",
    file_path: "ui/base/cursor/cursor_factory.cc",
    fork: &[
        "#include \"ui/base/anonymous_ui_base_features.h\"",
        "#include \"ui/base/mojom/cursor_type.mojom-blink.h\"",
    ],
    main: &["#include \"ui/base/cursor/mojom/cursor_type.mojom-blink.h\""],
    resolution: &[
        "#include \"ui/base/anonymous_ui_base_features.h\"",
        "#include \"ui/base/mojom/cursor_type.mojom-blink.h\"",
    ],
    head: "#include \"ui/base/cursor/cursor_factory.h\"\n\n",
    tail: "\nnamespace ui {\n",
};

pub const NATIVE_LIBRARY: SampleCase = SampleCase {
    name: "c",
    file_path: "base/native_library_win.cc",
    fork: &[
        "#include \"base/logging.h\"",
        "#include \"base/scoped_native_library.h\"",
    ],
    main: &["#include \"base/notreached.h\""],
    resolution: &[
        "#include \"base/notreached.h\"",
        "#include \"base/scoped_native_library.h\"",
    ],
    head: "#include \"base/native_library.h\"\n\n",
    tail: "\nnamespace base {\n",
};

pub const COMMAND_LINE: SampleCase = SampleCase {
    name: "d",
    file_path: "base/command_line_util.cc",
    fork: &["#include \"base/command_line.h\"", "#include \"base/logging.h\""],
    main: &["#include \"base/check_op.h\""],
    resolution: &["#include \"base/check_op.h\"", "#include \"base/command_line.h\""],
    head: "#include \"base/command_line_util.h\"\n\n",
    tail: "\nnamespace base {\n",
};

pub const SAMPLES: [&SampleCase; 4] = [&CURSOR_SHARED, &CURSOR_BLINK, &NATIVE_LIBRARY, &COMMAND_LINE];

pub const FB_TEXT: &str = r#"Apply(FrequentPattern(x, "base/logging.h"), Concat(Main(x), Remove(Fork(x), ForkByPath(x, "base/logging.h"))))"#;
pub const DMF_TEXT: &str =
    r#"Apply(DuplicateMainFork(x), Concat(Fork(x), Remove(Main(x), Pattern(x, "DuplicateMainFork"))))"#;

/// The logging-removal program, built by hand.
pub fn fb_program() -> Program {
    Program::new(
        Condition::single(Predicate::FrequentPattern("base/logging.h".into())),
        Transformation::concat(
            Transformation::Select(Selection::Main),
            Transformation::Remove(Selection::Fork, Selection::ForkByPath("base/logging.h".into())),
        ),
    )
}

/// The duplicate-header program, built by hand.
pub fn dmf_program() -> Program {
    Program::new(
        Condition::single(Predicate::DuplicateMainFork),
        Transformation::concat(
            Transformation::Select(Selection::Fork),
            Transformation::Remove(Selection::Main, Selection::Pattern(PredicateTag::DuplicateMainFork)),
        ),
    )
}

/// Writes the four sample cases as a corpus.
pub fn write_sample_corpus(root: &Path) {
    for sample in SAMPLES {
        let dir = root.join(format!("merge-{}", sample.name)).join("0001");
        fs::create_dir_all(&dir).unwrap();
        fs::write(dir.join("conflict.txt"), sample.conflict_text()).unwrap();
        fs::write(dir.join("resolved.txt"), sample.resolved_file()).unwrap();
        let meta = serde_json::json!({ "file_path": sample.file_path, "label": if sample.name < "c" { "RD" } else { "FB" } });
        fs::write(dir.join("meta.json"), meta.to_string()).unwrap();
    }
}

/// Lines random conflicts are drawn from. Several share basenames, mention
/// branch keywords or form rename pairs so that every predicate fires now
/// and then.
pub const LINE_POOL: &[&str] = &[
    "#include \"base/logging.h\"",
    "#include \"base/a.h\"",
    "#include \"ui/a.h\"",
    "#include \"base/b.h\"",
    "#include \"net/c.h\"",
    "#include \"base/c.h\"",
    "#include <base/d_util.h>",
    "#include \"base/anonymous_e.h\"",
    "DCHECK(ready);",
    "BASE_FEATURE(kFoo, \"Foo\", DISABLED);",
    "RENAMED_FEATURE(kFoo);",
    "IN_PROC_BROWSER_TEST_F(FooTest, Bar) {",
    "int count = 0;",
    "d_util::Run();",
    "",
    "// note",
];

/// Lines that never mention the logging header.
pub const LOGGING_FREE_POOL: &[&str] = &[
    "#include \"base/a.h\"",
    "#include \"ui/a.h\"",
    "#include \"base/logging_internal.h\"",
    "#include \"third_party/base/logging.h\"",
    "#include \"base/logging.hh\"",
    "#include \"base/b.h\"",
    "// base/logging.h is not needed",
    "LOG(INFO) << \"base/logging.h\";",
    "DCHECK(ready);",
    "int count = 0;",
    "",
];

fn pick<'a, R: Rng>(rng: &mut R, pool: &[&'a str], max: usize) -> Vec<&'a str> {
    let n = rng.gen_range(0..=max);
    (0..n).map(|_| *pool.choose(rng).unwrap()).collect()
}

/// A random conflicted file with one or two chunks; returns one of its chunks.
pub fn random_input<R: Rng>(rng: &mut R, pool: &[&str], max_main: usize, max_fork: usize) -> ConflictInput {
    let chunks = rng.gen_range(1..=2);
    let mut text = String::new();
    for _ in 0..chunks {
        for l in pick(rng, pool, 2) {
            text.push_str(l);
            text.push('\n');
        }
        text.push_str("<<<<<<< fork\n");
        for l in pick(rng, pool, max_fork) {
            text.push_str(l);
            text.push('\n');
        }
        text.push_str("=======\n");
        for l in pick(rng, pool, max_main) {
            text.push_str(l);
            text.push('\n');
        }
        text.push_str(">>>>>>> main\n");
    }
    text.push_str("}\n");
    let mut inputs = parse_conflict_file(&text, "gen/file.cc", SideOrder::ForkFirst).unwrap();
    let k = rng.gen_range(0..inputs.len());
    inputs.swap_remove(k)
}

/// Selections over the literals of `inputs`, without the frequent-pattern key.
pub fn selection_universe(inputs: &[&ConflictInput]) -> Vec<Selection> {
    let paths: BTreeSet<String> = inputs.iter().flat_map(|i| i.include_paths()).collect();
    let max_main = inputs.iter().map(|i| i.main_nodes.len()).max().unwrap_or(0);
    let max_fork = inputs.iter().map(|i| i.fork_nodes.len()).max().unwrap_or(0);
    let mut u = vec![Selection::Main, Selection::Fork];
    u.extend((0..max_main).map(Selection::MainByIndex));
    u.extend((0..max_fork).map(Selection::ForkByIndex));
    u.extend(paths.iter().cloned().map(Selection::MainByPath));
    u.extend(paths.iter().cloned().map(Selection::ForkByPath));
    u.extend(PredicateTag::PLAIN.into_iter().map(Selection::Pattern));
    u
}

pub fn random_transformation<R: Rng>(rng: &mut R, universe: &[Selection], depth: usize) -> Transformation {
    let choice = if depth == 0 { rng.gen_range(0..2) } else { rng.gen_range(0..3) };
    match choice {
        0 => Transformation::Select(universe.choose(rng).unwrap().clone()),
        1 => Transformation::Remove(universe.choose(rng).unwrap().clone(), universe.choose(rng).unwrap().clone()),
        _ => Transformation::concat(
            random_transformation(rng, universe, depth - 1),
            random_transformation(rng, universe, depth - 1),
        ),
    }
}

/// Every predicate that holds on all inputs, computed independently of the learner.
pub fn common_predicates(inputs: &[&ConflictInput], keywords: &KeywordConfig) -> Vec<Predicate> {
    let mut out: Option<Vec<Predicate>> = None;
    for input in inputs {
        let dict = build_pattern_dictionary(input, keywords);
        let mut holds: Vec<Predicate> = PredicateTag::PLAIN
            .into_iter()
            .filter_map(Predicate::plain)
            .filter(|p| !dict.entry(p).is_empty())
            .collect();
        holds.extend(
            input
                .include_paths()
                .into_iter()
                .map(Predicate::FrequentPattern),
        );
        out = Some(match out {
            None => holds,
            Some(prev) => prev.into_iter().filter(|p| holds.contains(p)).collect(),
        });
    }
    out.unwrap_or_default()
}

type Outputs = Vec<Vec<Node>>;

/// Number of transformations with concat depth at most `depth` that map every
/// input to its output, by enumerating the grammar over `selection_universe`
/// and grouping programs by the outputs they produce.
pub fn oracle_count(cases: &[(ConflictInput, Vec<Node>)], depth: usize, keywords: &KeywordConfig) -> u128 {
    let inputs: Vec<&ConflictInput> = cases.iter().map(|(i, _)| i).collect();
    let dicts: Vec<_> = inputs.iter().map(|i| build_pattern_dictionary(i, keywords)).collect();
    let universe = selection_universe(&inputs);
    let run = |t: &Transformation| -> Option<Outputs> {
        inputs
            .iter()
            .zip(&dicts)
            .map(|(i, d)| eval_transformation(t, i, d).ok())
            .collect()
    };
    let mut leaves: HashMap<Outputs, u128> = HashMap::new();
    for s in &universe {
        if let Some(out) = run(&Transformation::Select(s.clone())) {
            *leaves.entry(out).or_default() += 1;
        }
        for s2 in &universe {
            if let Some(out) = run(&Transformation::Remove(s.clone(), s2.clone())) {
                *leaves.entry(out).or_default() += 1;
            }
        }
    }
    let target: Outputs = cases.iter().map(|(_, o)| o.clone()).collect();
    // levels[d]: output tuple -> number of programs of depth <= d.
    let mut level = leaves.clone();
    for d in 1..=depth {
        if d == depth {
            // Only the target matters at the last level: split it after
            // each prefix produced at the level below.
            let mut count = leaves.get(&target).copied().unwrap_or(0);
            for (a, ca) in &level {
                let fits = a.iter().zip(&target).all(|(x, t)| t.starts_with(x));
                if !fits {
                    continue;
                }
                let rest: Outputs = a.iter().zip(&target).map(|(x, t)| t[x.len()..].to_vec()).collect();
                if let Some(cb) = level.get(&rest) {
                    count += ca * cb;
                }
            }
            return count;
        }
        let mut next = leaves.clone();
        for (a, ca) in &level {
            for (b, cb) in &level {
                let joined: Outputs = a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| x.iter().chain(y).cloned().collect())
                    .collect();
                *next.entry(joined).or_default() += ca * cb;
            }
        }
        level = next;
    }
    level.get(&target).copied().unwrap_or(0)
}

/// Random conflicted file text with known structure.
pub struct SyntheticFile {
    pub text: String,
    pub chunks: usize,
    /// Lines outside every chunk, in order, without terminators.
    pub outside: Vec<String>,
    /// `(first, second)` section lines per chunk.
    pub sections: Vec<(Vec<String>, Vec<String>)>,
    pub trailing_eol: bool,
}

pub fn synthetic_file<R: Rng>(rng: &mut R) -> SyntheticFile {
    const CONTENT: &[&str] = &[
        "#include \"base/a.h\"",
        "#include <vector>",
        "  int x = 0;",
        "\tDCHECK(x);",
        "",
        "// <<<<<<<< not a marker",
        "=======x",
        ">>>>>>>>",
        "a ======= b",
        "FOO_BAR(1, 2)",
    ];
    let crlf = rng.gen_bool(0.3);
    let eol = if crlf { "\r\n" } else { "\n" };
    let mut lines: Vec<String> = Vec::new();
    let mut outside = Vec::new();
    let mut sections = Vec::new();
    let chunks = rng.gen_range(0..=4);
    let section = |rng: &mut R| -> Vec<String> {
        (0..rng.gen_range(0..=3))
            .map(|_| CONTENT.choose(rng).unwrap().to_string())
            .collect()
    };
    for _ in 0..chunks {
        // Zero context lines makes adjacent chunks.
        for _ in 0..rng.gen_range(0..=2) {
            let l = CONTENT.choose(rng).unwrap().to_string();
            outside.push(l.clone());
            lines.push(l);
        }
        let first = section(rng);
        let second = section(rng);
        lines.push(format!("<<<<<<< {}", if rng.gen_bool(0.5) { "HEAD" } else { "fork" }));
        lines.extend(first.iter().cloned());
        if rng.gen_bool(0.3) {
            lines.push("||||||| base".to_string());
            lines.extend(section(rng));
        }
        lines.push("=======".to_string());
        lines.extend(second.iter().cloned());
        lines.push(">>>>>>> main".to_string());
        sections.push((first, second));
    }
    for _ in 0..rng.gen_range(0..=2) {
        let l = CONTENT.choose(rng).unwrap().to_string();
        outside.push(l.clone());
        lines.push(l);
    }
    let mut text = lines.join(eol);
    let trailing_eol = !lines.is_empty() && rng.gen_bool(0.8);
    if trailing_eol {
        text.push_str(eol);
    }
    SyntheticFile {
        text,
        chunks,
        outside,
        sections,
        trailing_eol,
    }
}
