//! JSON form of programs.
//!
//! ```text
//! {"dslv": 1, "apply": {"condition": [pred, ...], "transform": t}}
//! pred := {"tag": name, "path"?: str}
//! t    := {"concat": [t, t]} | {"remove": [s, s]} | {"select": s}
//! s    := {"tag": name, "k"?: int, "path"?: str, "key"?: str}
//! ```
//!
//! Keys are written in the order above, so equal programs serialize to equal text.

use serde_json::{json, Map, Value};
use thiserror::Error;

use super::ast::{Condition, Predicate, PredicateTag, Program, Selection, Transformation};

pub const DSL_VERSION: u64 = 1;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ProgramParseError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid program at {path}: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: &str, message: impl Into<String>) -> ProgramParseError {
    ProgramParseError::Invalid {
        path: if path.is_empty() { "/".into() } else { path.into() },
        message: message.into(),
    }
}

fn predicate_json(p: &Predicate) -> Value {
    let mut m = Map::new();
    m.insert("tag".into(), json!(p.tag().name()));
    if let Some(path) = p.path() {
        m.insert("path".into(), json!(path));
    }
    Value::Object(m)
}

fn selection_json(s: &Selection) -> Value {
    let mut m = Map::new();
    m.insert("tag".into(), json!(s.tag_name()));
    match s {
        Selection::MainByIndex(k) | Selection::ForkByIndex(k) => {
            m.insert("k".into(), json!(k));
        }
        Selection::MainByPath(p) | Selection::ForkByPath(p) => {
            m.insert("path".into(), json!(p));
        }
        Selection::Pattern(key) => {
            m.insert("key".into(), json!(key.name()));
        }
        Selection::Main | Selection::Fork => {}
    }
    Value::Object(m)
}

pub fn transformation_json(t: &Transformation) -> Value {
    match t {
        Transformation::Concat(l, r) => {
            json!({ "concat": [transformation_json(l), transformation_json(r)] })
        }
        Transformation::Remove(a, b) => json!({ "remove": [selection_json(a), selection_json(b)] }),
        Transformation::Select(s) => json!({ "select": selection_json(s) }),
    }
}

pub fn program_json(prog: &Program) -> Value {
    let condition: Vec<Value> = prog.condition.predicates().iter().map(predicate_json).collect();
    json!({
        "dslv": DSL_VERSION,
        "apply": {
            "condition": condition,
            "transform": transformation_json(&prog.transformation),
        }
    })
}

/// Compact canonical JSON.
pub fn serialize_program(prog: &Program) -> String {
    program_json(prog).to_string()
}

pub fn deserialize_program(text: &str) -> Result<Program, ProgramParseError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ProgramParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    program_from_json(&value)
}

/// Reads a program from an already parsed document. Unknown top-level keys
/// (metadata, alternates) are ignored.
pub fn program_from_json(value: &Value) -> Result<Program, ProgramParseError> {
    let root = value.as_object().ok_or_else(|| invalid("", "expected an object"))?;
    match root.get("dslv").and_then(Value::as_u64) {
        Some(DSL_VERSION) => {}
        Some(v) => return Err(invalid("/dslv", format!("unsupported version {v}"))),
        None => return Err(invalid("/dslv", "missing version")),
    }
    let apply = root
        .get("apply")
        .and_then(Value::as_object)
        .ok_or_else(|| invalid("/apply", "expected an object"))?;
    let preds = apply
        .get("condition")
        .and_then(Value::as_array)
        .ok_or_else(|| invalid("/apply/condition", "expected an array"))?;
    let predicates = preds
        .iter()
        .enumerate()
        .map(|(i, p)| parse_predicate(p, &format!("/apply/condition/{i}")))
        .collect::<Result<Vec<_>, _>>()?;
    let condition =
        Condition::new(predicates).map_err(|e| invalid("/apply/condition", e.to_string()))?;
    let transform = apply
        .get("transform")
        .ok_or_else(|| invalid("/apply/transform", "missing"))?;
    let transformation = parse_transformation(transform, "/apply/transform")?;
    Ok(Program::new(condition, transformation))
}

fn object<'a>(v: &'a Value, path: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>, ProgramParseError> {
    let m = v.as_object().ok_or_else(|| invalid(path, "expected an object"))?;
    if let Some(extra) = m.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(invalid(path, format!("unexpected key `{extra}`")));
    }
    Ok(m)
}

fn string_field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a str, ProgramParseError> {
    m.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| invalid(&format!("{path}/{key}"), "expected a string"))
}

fn nonempty_path(m: &Map<String, Value>, path: &str) -> Result<String, ProgramParseError> {
    let p = string_field(m, "path", path)?;
    if p.is_empty() {
        return Err(invalid(&format!("{path}/path"), "empty path"));
    }
    Ok(p.to_string())
}

fn parse_predicate(v: &Value, path: &str) -> Result<Predicate, ProgramParseError> {
    let m = object(v, path, &["tag", "path"])?;
    let name = string_field(m, "tag", path)?;
    let tag = PredicateTag::from_name(name)
        .ok_or_else(|| invalid(&format!("{path}/tag"), format!("unknown predicate `{name}`")))?;
    match Predicate::plain(tag) {
        Some(p) => {
            if m.contains_key("path") {
                return Err(invalid(path, format!("{name} takes no path")));
            }
            Ok(p)
        }
        None => Ok(Predicate::FrequentPattern(nonempty_path(m, path)?)),
    }
}

fn parse_selection(v: &Value, path: &str) -> Result<Selection, ProgramParseError> {
    let m = object(v, path, &["tag", "k", "path", "key"])?;
    let name = string_field(m, "tag", path)?;
    let expect_only = |allowed: &[&str]| -> Result<(), ProgramParseError> {
        match m.keys().find(|k| *k != "tag" && !allowed.contains(&k.as_str())) {
            Some(k) => Err(invalid(path, format!("{name} does not take `{k}`"))),
            None => Ok(()),
        }
    };
    let index = || -> Result<usize, ProgramParseError> {
        m.get("k")
            .and_then(Value::as_u64)
            .map(|k| k as usize)
            .ok_or_else(|| invalid(&format!("{path}/k"), "expected a non-negative integer"))
    };
    let sel = match name {
        "Main" | "Fork" => {
            expect_only(&[])?;
            if name == "Main" {
                Selection::Main
            } else {
                Selection::Fork
            }
        }
        "MainByIndex" => {
            expect_only(&["k"])?;
            Selection::MainByIndex(index()?)
        }
        "ForkByIndex" => {
            expect_only(&["k"])?;
            Selection::ForkByIndex(index()?)
        }
        "MainByPath" => {
            expect_only(&["path"])?;
            Selection::MainByPath(nonempty_path(m, path)?)
        }
        "ForkByPath" => {
            expect_only(&["path"])?;
            Selection::ForkByPath(nonempty_path(m, path)?)
        }
        "Pattern" => {
            expect_only(&["key"])?;
            let key = string_field(m, "key", path)?;
            Selection::Pattern(
                PredicateTag::from_name(key)
                    .ok_or_else(|| invalid(&format!("{path}/key"), format!("unknown pattern key `{key}`")))?,
            )
        }
        other => return Err(invalid(&format!("{path}/tag"), format!("unknown selection `{other}`"))),
    };
    Ok(sel)
}

fn pair<'a>(v: &'a Value, path: &str) -> Result<(&'a Value, &'a Value), ProgramParseError> {
    match v.as_array().map(Vec::as_slice) {
        Some([a, b]) => Ok((a, b)),
        _ => Err(invalid(path, "expected a two-element array")),
    }
}

fn parse_transformation(v: &Value, path: &str) -> Result<Transformation, ProgramParseError> {
    let m = v.as_object().ok_or_else(|| invalid(path, "expected an object"))?;
    if m.len() != 1 {
        return Err(invalid(path, "expected exactly one of concat, remove, select"));
    }
    let (key, body) = m.iter().next().unwrap();
    let here = format!("{path}/{key}");
    match key.as_str() {
        "concat" => {
            let (l, r) = pair(body, &here)?;
            Ok(Transformation::concat(
                parse_transformation(l, &format!("{here}/0"))?,
                parse_transformation(r, &format!("{here}/1"))?,
            ))
        }
        "remove" => {
            let (a, b) = pair(body, &here)?;
            Ok(Transformation::Remove(
                parse_selection(a, &format!("{here}/0"))?,
                parse_selection(b, &format!("{here}/1"))?,
            ))
        }
        "select" => Ok(Transformation::Select(parse_selection(body, &here)?)),
        other => Err(invalid(path, format!("unknown transformation `{other}`"))),
    }
}
