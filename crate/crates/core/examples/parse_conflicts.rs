//! Splits a diff3-style conflicted file into chunks and prints the node view.

use mergepbe::conflict::{conflict_kind, parse_conflict_file, SideOrder};

const FILE: &str = "#include \"chrome/browser/ui/browser.h\"\r\n\
<<<<<<< HEAD\r\n\
IN_PROC_BROWSER_TEST_F(BrowserTest, Title) {\r\n\
||||||| merged common ancestors\r\n\
IN_PROC_BROWSER_TEST_F(BrowserTest, OldTitle) {\r\n\
=======\r\n\
IN_PROC_BROWSER_TEST_P(BrowserTest, Title) {\r\n\
>>>>>>> upstream\r\n\
<<<<<<< HEAD\r\n\
#include   \"base/logging.h\"\r\n\
=======\r\n\
>>>>>>> upstream\r\n";

fn main() {
    // git writes "ours" first; here ours is the fork.
    let inputs = parse_conflict_file(FILE, "chrome/browser/ui/browser_browsertest.cc", SideOrder::OursFirst)
        .expect("markers are balanced");
    for input in &inputs {
        println!("chunk {} ({:?})", input.chunk_index, conflict_kind(input));
        for n in &input.main_nodes {
            println!("  main {:?}: {n}", n.kind());
        }
        for n in &input.fork_nodes {
            println!("  fork {:?}: {n}", n.kind());
        }
        println!("  siblings: {}, outside lines: {}", input.sibling_chunks.len(), input.outside_content.len());
    }
}
