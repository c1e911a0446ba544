//! Writes a small corpus to a temporary directory and prints its taxonomy.

use std::fs;
use std::path::Path;

use mergepbe::corpus::{load_corpus, report};

fn entry(root: &Path, merge: &str, hash: &str, file_path: &str, conflict: &str, resolved: &str) {
    let dir = root.join(merge).join(hash);
    fs::create_dir_all(&dir).unwrap();
    fs::write(dir.join("conflict.txt"), conflict).unwrap();
    fs::write(dir.join("resolved.txt"), resolved).unwrap();
    fs::write(dir.join("meta.json"), format!(r#"{{"file_path": "{file_path}"}}"#)).unwrap();
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let root = dir.path();
    entry(
        root,
        "m1",
        "a1",
        "chrome/browser/x.cc",
        "#include \"x.h\"\n<<<<<<< fork\n#include \"base/logging.h\"\n=======\n#include \"base/check.h\"\n>>>>>>> main\n",
        "#include \"x.h\"\n#include \"base/check.h\"\n",
    );
    entry(
        root,
        "m1",
        "b2",
        "chrome/browser/BUILD.gn",
        "deps = [\n<<<<<<< fork\n  \"//edge:x\",\n=======\n  \"//chrome:y\",\n>>>>>>> main\n]\n",
        "deps = [\n  \"//edge:x\",\n  \"//chrome:y\",\n]\n",
    );
    entry(
        root,
        "m2",
        "c3",
        "chrome/browser/y.h",
        "class Y {\n<<<<<<< fork\n  void Run();\n  void Stop();\n  int count_;\n=======\n  void Run() override;\n>>>>>>> main\n};\n",
        "class Y {\n  void Run() override;\n  void Stop();\n  int count_;\n};\n",
    );

    let corpus = load_corpus(root)?;
    print!("{}", report(&corpus.cases).to_table());
    Ok(())
}

