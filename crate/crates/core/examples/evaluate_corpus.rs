//! Learns two programs and scores them against a corpus of human resolutions.

use std::fs;

use mergepbe::conflict::{parse_conflict_file, tokenize_text, RegionKind, SideOrder};
use mergepbe::corpus::{evaluate, load_corpus};
use mergepbe::synth::{learn, ExampleSpec, SynthConfig};

struct Case {
    path: &'static str,
    fork: &'static str,
    main: &'static str,
    kept: &'static str,
}

const CASES: [Case; 4] = [
    Case {
        path: "base/native_library_win.cc",
        fork: "#include \"base/logging.h\"\n#include \"base/scoped_native_library.h\"\n",
        main: "#include \"base/notreached.h\"\n",
        kept: "#include \"base/notreached.h\"\n#include \"base/scoped_native_library.h\"\n",
    },
    Case {
        path: "base/command_line_util.cc",
        fork: "#include \"base/command_line.h\"\n#include \"base/logging.h\"\n",
        main: "#include \"base/check_op.h\"\n",
        kept: "#include \"base/check_op.h\"\n#include \"base/command_line.h\"\n",
    },
    Case {
        path: "ui/base/cursor/cursor.cc",
        fork: "#include \"ui/base/anonymous_ui_base_features.h\"\n#include \"ui/base/mojom/cursor_type.mojom-shared.h\"\n",
        main: "#include \"ui/base/cursor/mojom/cursor_type.mojom-shared.h\"\n",
        kept: "#include \"ui/base/anonymous_ui_base_features.h\"\n#include \"ui/base/mojom/cursor_type.mojom-shared.h\"\n",
    },
    Case {
        path: "net/socket/socket.cc",
        fork: "int kPort = 1;\n",
        main: "int kPort = 2;\n",
        kept: "int kPort = 3;\n",
    },
];

fn conflict(c: &Case) -> String {
    format!("// {}\n<<<<<<< fork\n{}=======\n{}>>>>>>> main\n", c.path, c.fork, c.main)
}

fn resolved(c: &Case) -> String {
    format!("// {}\n{}", c.path, c.kept)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = SynthConfig::default();
    let example = |c: &Case| {
        let input = parse_conflict_file(&conflict(c), c.path, SideOrder::ForkFirst).unwrap().remove(0);
        (input, tokenize_text(c.kept, RegionKind::Outside))
    };
    let fb = learn(&ExampleSpec::new(vec![example(&CASES[0]), example(&CASES[1])])?, &config);
    let dmf = learn(&ExampleSpec::new(vec![example(&CASES[2])])?, &config);
    let programs: Vec<_> = [fb, dmf]
        .iter()
        .filter_map(|r| r.top().map(|t| t.program.clone()))
        .collect();

    let dir = tempfile::tempdir()?;
    let root = dir.path();
    for (i, c) in CASES.iter().enumerate() {
        let dir = root.join("merge").join(format!("case{i}"));
        fs::create_dir_all(&dir)?;
        fs::write(dir.join("conflict.txt"), conflict(c))?;
        fs::write(dir.join("resolved.txt"), resolved(c))?;
        fs::write(dir.join("meta.json"), format!(r#"{{"file_path": "{}"}}"#, c.path))?;
    }
    let corpus = load_corpus(root)?;
    let mut report = evaluate(&programs, &corpus.cases, &config);
    report.rename(programs.iter().map(ToString::to_string));
    print!("{}", report.to_table());
    Ok(())
}
