//! The `mergepbe` command line.
//!
//! Exit codes: 0 on success (including "no suggestion"), 1 on operational
//! failures such as unreadable files or an unsatisfiable example set, 2 on
//! usage errors. Set `MERGEPBE_KEYWORDS` to a JSON file of the form
//! `{"fork": [...], "main": [...]}` to override the branch-specific keywords.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::conflict::{tokenize_text, ConflictFile, RegionKind, SideOrder};
use crate::corpus::{evaluate, load_corpus, report, Corpus};
use crate::dsl::{deserialize_program, program_json, run_program_with, KeywordConfig, Program, Suggestion};
use crate::synth::{learn, ExampleSpec, SynthConfig};

pub const KEYWORDS_ENV: &str = "MERGEPBE_KEYWORDS";

#[derive(Debug, Parser)]
#[command(name = "mergepbe", version, about = "Learn and apply merge-conflict resolution programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Learn a program from example resolutions.
    Learn(LearnArgs),
    /// Resolve the conflicts of a file with learned programs.
    Apply(ApplyArgs),
    /// Classify the conflicts of a corpus.
    Classify(ClassifyArgs),
    /// Measure programs against the resolutions in a corpus.
    Eval(EvalArgs),
}

fn side_order(s: &str) -> Result<SideOrder, String> {
    SideOrder::from_str(s)
}

fn at_least_one(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("expected a positive integer, got `{s}`")),
    }
}

#[derive(Debug, Args)]
struct LearnArgs {
    /// JSON array of {"conflict", "resolution", "file_path", "chunk"?}.
    #[arg(long)]
    examples: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Number of ranked programs to keep (the best plus alternates).
    #[arg(long, default_value = "1", value_parser = at_least_one)]
    top: usize,
    #[arg(long, value_parser = at_least_one)]
    max_depth: Option<usize>,
    #[arg(long, value_parser = at_least_one)]
    max_programs: Option<usize>,
    /// Which side git wrote first. fork-first: fork, then main.
    #[arg(long, default_value = "fork-first", value_parser = side_order)]
    side_order: SideOrder,
}

#[derive(Debug, Args)]
#[group(skip)]
#[command(group(clap::ArgGroup::new("mode").required(true).multiple(false)))]
struct ApplyArgs {
    /// Program file; repeat to try several in order.
    #[arg(long = "program", required = true)]
    programs: Vec<PathBuf>,
    file: PathBuf,
    /// Write the resolved file to standard output.
    #[arg(long, group = "mode")]
    print: bool,
    /// Rewrite the file when every chunk was resolved.
    #[arg(long, group = "mode")]
    in_place: bool,
    /// With --in-place, also write when some chunks keep their markers.
    #[arg(long, conflicts_with_all = ["print", "diff"])]
    partial: bool,
    /// Show a unified diff of the changes.
    #[arg(long, group = "mode")]
    diff: bool,
    #[arg(long, default_value = "fork-first", value_parser = side_order)]
    side_order: SideOrder,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    root: PathBuf,
    /// JSON report path, or `-` for a table on standard output.
    #[arg(long)]
    report: String,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long = "program", required = true)]
    programs: Vec<PathBuf>,
    root: PathBuf,
    /// Compare include-only resolutions as multisets.
    #[arg(long)]
    order_insensitive_includes: bool,
    /// JSON report path, or `-` for a table on standard output.
    #[arg(long)]
    report: String,
}

/// Failure with exit code 1.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = base_config().and_then(|config| match cli.command {
        Command::Learn(a) => cmd_learn(a, config, stdout),
        Command::Apply(a) => cmd_apply(a, config, stdout, stderr),
        Command::Classify(a) => cmd_classify(a, stdout, stderr),
        Command::Eval(a) => cmd_eval(a, config, stdout, stderr),
    });
    match result {
        Ok(()) => 0,
        Err(Failure(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
    }
}

fn base_config() -> Result<SynthConfig, Failure> {
    let mut config = SynthConfig::default();
    if let Some(path) = std::env::var_os(KEYWORDS_ENV) {
        let path = PathBuf::from(path);
        let text = read(&path)?;
        config.keywords = serde_json::from_str::<KeywordConfig>(&text)
            .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    }
    Ok(config)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

#[derive(Debug, Deserialize)]
struct SpecEntry {
    conflict: PathBuf,
    resolution: PathBuf,
    file_path: String,
    #[serde(default)]
    chunk: usize,
}

fn load_spec(path: &Path, order: SideOrder) -> Result<(ExampleSpec, String), Failure> {
    let entries: Vec<SpecEntry> =
        serde_json::from_str(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut cases = Vec::new();
    let mut hasher = Sha256::new();
    for entry in entries {
        let conflict_text = read(&base.join(&entry.conflict))?;
        let resolution_text = read(&base.join(&entry.resolution))?;
        let file = ConflictFile::parse(&conflict_text)
            .map_err(|e| Failure(format!("{}: {e}", entry.conflict.display())))?;
        let mut inputs = file.to_inputs(&entry.file_path, order);
        if entry.chunk >= inputs.len() {
            return Err(Failure(format!(
                "{}: chunk {} requested but the file has {} chunk(s)",
                entry.conflict.display(),
                entry.chunk,
                inputs.len()
            )));
        }
        let input = inputs.swap_remove(entry.chunk);
        hasher.update(
            json!([entry.file_path, entry.chunk, conflict_text, resolution_text])
                .to_string()
                .as_bytes(),
        );
        cases.push((input, tokenize_text(&resolution_text, RegionKind::Outside)));
    }
    let spec = ExampleSpec::new(cases)?;
    Ok((spec, hex::encode(hasher.finalize())))
}

fn cmd_learn(a: LearnArgs, mut config: SynthConfig, stdout: &mut dyn Write) -> CmdResult {
    if let Some(d) = a.max_depth {
        config.max_concat_depth = d;
    }
    if let Some(m) = a.max_programs {
        config.max_programs = m;
    }
    config.validate()?;
    let (spec, spec_hash) = load_spec(&a.examples, a.side_order)?;
    let ranked = learn(&spec, &config);
    let Some(top) = ranked.top() else {
        return Err(Failure(format!(
            "no consistent program for the {} example(s) in {}",
            spec.len(),
            a.examples.display()
        )));
    };
    let mut doc = program_json(&top.program);
    doc["meta"] = json!({
        "spec_hash": spec_hash,
        "examples": spec.len(),
        "config": config,
        "features": top.features,
        "score": top.score,
        "candidates": ranked.len(),
        "truncated": ranked.truncated,
    });
    let alternates: Vec<Value> = ranked.entries.iter().skip(1).take(a.top - 1).map(|e| e.to_json()).collect();
    doc["alternates"] = Value::Array(alternates);
    write_file(&a.out, &pretty(&doc))?;

    writeln!(stdout, "program: {}", top.program)?;
    writeln!(stdout, "score: {}", top.score)?;
    writeln!(stdout, "features: {}", serde_json::to_string(&top.features)?)?;
    for (rank, e) in ranked.entries.iter().enumerate().skip(1).take(a.top - 1) {
        writeln!(stdout, "alternate {}: {} (score {})", rank + 1, e.program, e.score)?;
    }
    Ok(())
}

fn load_programs(paths: &[PathBuf]) -> Result<Vec<Program>, Failure> {
    paths
        .iter()
        .map(|p| deserialize_program(&read(p)?).map_err(|e| Failure(format!("{}: {e}", p.display()))))
        .collect()
}

fn cmd_apply(a: ApplyArgs, config: SynthConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let programs = load_programs(&a.programs)?;
    let text = read(&a.file)?;
    let file = ConflictFile::parse(&text).map_err(|e| Failure(format!("{}: {e}", a.file.display())))?;
    let file_path = a.file.to_string_lossy().into_owned();
    let inputs = file.to_inputs(&file_path, a.side_order);

    let mut errors = 0;
    let resolutions: Vec<Option<Vec<String>>> = inputs
        .iter()
        .map(|input| {
            for (program, path) in programs.iter().zip(&a.programs) {
                match run_program_with(program, input, &config.keywords) {
                    Suggestion::Resolved(nodes) => {
                        return Some(nodes.iter().map(|n| n.original().to_string()).collect());
                    }
                    Suggestion::NoSuggestion => {}
                    Suggestion::Failed(e) => {
                        errors += 1;
                        let _ = writeln!(
                            stderr,
                            "warning: chunk {}: {} failed: {e}",
                            input.chunk_index,
                            path.display()
                        );
                    }
                }
            }
            None
        })
        .collect();
    let total = resolutions.len();
    let suggested = resolutions.iter().filter(|r| r.is_some()).count();
    let rendered = file.render_with(&resolutions);

    let mut written = false;
    if a.print {
        stdout.write_all(rendered.as_bytes())?;
    } else if a.diff {
        let diff = similar::TextDiff::from_lines(&text, &rendered);
        write!(
            stdout,
            "{}",
            diff.unified_diff().header(&file_path, &file_path)
        )?;
    } else if a.in_place && suggested > 0 && (suggested == total || a.partial) {
        write_file(&a.file, &rendered)?;
        written = true;
    }

    writeln!(
        stderr,
        "{}: {suggested} suggestions for {total} chunks{}",
        a.file.display(),
        if written { ", file updated" } else { "" }
    )?;
    let summary = json!({
        "file": file_path,
        "chunks": total,
        "suggested": suggested,
        "errors": errors,
        "written": written,
    });
    writeln!(stderr, "{summary}")?;
    Ok(())
}

fn load(root: &Path, stderr: &mut dyn Write) -> Result<Corpus, Failure> {
    let corpus = load_corpus(root)?;
    for d in &corpus.diagnostics {
        writeln!(stderr, "warning: {}: {}", d.path.display(), d.message)?;
    }
    Ok(corpus)
}

fn emit_report(target: &str, json_value: &Value, table: &str, stdout: &mut dyn Write) -> CmdResult {
    if target == "-" {
        stdout.write_all(table.as_bytes())?;
    } else {
        write_file(Path::new(target), &pretty(json_value))?;
        stdout.write_all(table.as_bytes())?;
    }
    Ok(())
}

fn cmd_classify(a: ClassifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    let corpus = load(&a.root, stderr)?;
    let r = report(&corpus.cases);
    emit_report(&a.report, &r.to_json(), &r.to_table(), stdout)
}

fn cmd_eval(a: EvalArgs, mut config: SynthConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CmdResult {
    config.order_insensitive_includes = a.order_insensitive_includes;
    let programs = load_programs(&a.programs)?;
    let corpus = load(&a.root, stderr)?;
    let mut r = evaluate(&programs, &corpus.cases, &config);
    r.rename(a.programs.iter().map(|p| p.display().to_string()));
    emit_report(&a.report, &r.to_json(), &r.to_table(), stdout)
}
