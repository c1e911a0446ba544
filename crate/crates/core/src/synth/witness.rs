//! Witness functions and the per-example transformation learner.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use super::config::SynthConfig;
use super::vsa::{leaf, union, ProgramSet, Vsa};
use crate::conflict::{ConflictInput, Node};
use crate::dsl::{
    build_pattern_dictionary, eval_selection, remove_nodes, PredicateTag, Selection,
    Transformation,
};

/// Every split of `o` into two non-empty contiguous parts.
pub fn wf_concat(o: &[Node]) -> Vec<(Vec<Node>, Vec<Node>)> {
    (1..o.len())
        .map(|k| (o[..k].to_vec(), o[k..].to_vec()))
        .collect()
}

/// For each whole-branch source that contains `o` as an ordered sublist,
/// the nodes that have to be removed from it.
pub fn wf_remove(input: &ConflictInput, o: &[Node]) -> Vec<(Selection, Vec<Node>)> {
    [(Selection::Main, &input.main_nodes), (Selection::Fork, &input.fork_nodes)]
        .into_iter()
        .filter_map(|(sel, source)| {
            let removed = subsequence_complement(source, o)?;
            (!removed.is_empty()).then_some((sel, removed))
        })
        .collect()
}

/// `source` minus the leftmost embedding of `o`, or `None` if `o` is not a
/// subsequence of `source`.
fn subsequence_complement(source: &[Node], o: &[Node]) -> Option<Vec<Node>> {
    let mut rest = Vec::new();
    let mut want = o.iter().peekable();
    for n in source {
        if want.peek().is_some_and(|w| *w == n) {
            want.next();
        } else {
            rest.push(n.clone());
        }
    }
    want.peek().is_none().then_some(rest)
}

pub(crate) fn same_multiset(a: &[Node], b: &[Node]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut counts: HashMap<&Node, isize> = HashMap::new();
    for n in a {
        *counts.entry(n).or_default() += 1;
    }
    for n in b {
        *counts.entry(n).or_default() -= 1;
    }
    counts.values().all(|&c| c == 0)
}

/// Selections a learner may use, together with their values on one input.
pub(crate) struct CaseContext {
    values: Vec<(Selection, Vec<Node>)>,
}

impl CaseContext {
    /// `paths` is the path-literal universe; indices come from the input.
    pub(crate) fn new(input: &ConflictInput, paths: &BTreeSet<String>, config: &SynthConfig) -> Self {
        let dict = build_pattern_dictionary(input, &config.keywords);
        let mut selections = vec![Selection::Main, Selection::Fork];
        selections.extend((0..input.main_nodes.len()).map(Selection::MainByIndex));
        selections.extend((0..input.fork_nodes.len()).map(Selection::ForkByIndex));
        selections.extend(paths.iter().cloned().map(Selection::MainByPath));
        selections.extend(paths.iter().cloned().map(Selection::ForkByPath));
        selections.extend(PredicateTag::PLAIN.into_iter().map(Selection::Pattern));
        let values = selections
            .into_iter()
            .filter_map(|s| {
                let v = eval_selection(&s, input, &dict).ok()?;
                Some((s, v))
            })
            .collect();
        CaseContext { values }
    }

    fn selections_equal_to<'s>(&'s self, o: &'s [Node]) -> impl Iterator<Item = &'s Selection> + 's {
        self.values
            .iter()
            .filter(move |(_, v)| v.as_slice() == o)
            .map(|(s, _)| s)
    }

    /// Non-`Concat` transformations producing exactly `o`.
    ///
    /// Removal is tried from every selection, not only the whole branches
    /// [`wf_remove`] considers, and an empty removal is allowed.
    fn leaves(&self, o: &[Node]) -> Vec<Transformation> {
        let mut out: Vec<Transformation> = self
            .selections_equal_to(o)
            .cloned()
            .map(Transformation::Select)
            .collect();
        for (s1, v1) in &self.values {
            let Some(removed) = subsequence_complement(v1, o) else {
                continue;
            };
            for (s2, v2) in &self.values {
                if same_multiset(v2, &removed) && remove_nodes(v1, v2).is_ok_and(|r| r == o) {
                    out.push(Transformation::Remove(s1.clone(), s2.clone()));
                }
            }
        }
        out
    }
}

/// Selections producing `o`, using the input's own include paths as literals.
pub fn learn_selection(input: &ConflictInput, o: &[Node], config: &SynthConfig) -> ProgramSet {
    let paths = input.include_paths().into_iter().collect();
    let ctx = CaseContext::new(input, &paths, config);
    ProgramSet::from_programs(ctx.selections_equal_to(o).cloned().map(Transformation::Select))
}

/// All transformations of concat depth at most `depth` that map `input` to `o`.
pub fn learn_transformation(
    input: &ConflictInput,
    o: &[Node],
    depth: usize,
    config: &SynthConfig,
) -> ProgramSet {
    let paths = input.include_paths().into_iter().collect();
    let ctx = CaseContext::new(input, &paths, config);
    learn_in_context(&ctx, o, depth)
}

pub(crate) fn learn_in_context(ctx: &CaseContext, o: &[Node], depth: usize) -> ProgramSet {
    let mut builder = Builder {
        ctx,
        o,
        memo: HashMap::new(),
    };
    ProgramSet::from_root(builder.build(0, o.len(), depth))
}

struct Builder<'c> {
    ctx: &'c CaseContext,
    o: &'c [Node],
    memo: HashMap<(usize, usize, usize), Option<Rc<Vsa>>>,
}

impl Builder<'_> {
    fn build(&mut self, i: usize, j: usize, depth: usize) -> Option<Rc<Vsa>> {
        if let Some(hit) = self.memo.get(&(i, j, depth)) {
            return hit.clone();
        }
        let mut members = Vec::new();
        if let Some(l) = leaf(self.ctx.leaves(&self.o[i..j])) {
            members.push(l);
        }
        if depth > 0 {
            // Interior splits are the concat witnesses; the two boundary
            // splits let one operand produce the empty list.
            for k in i..=j {
                let Some(left) = self.build(i, k, depth - 1) else { continue };
                let Some(right) = self.build(k, j, depth - 1) else { continue };
                members.push(Rc::new(Vsa::Join(left, right)));
            }
        }
        let node = union(members);
        self.memo.insert((i, j, depth), node.clone());
        node
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(path: &str) -> Node {
        Node::include(path)
    }

    fn native_library_case() -> ConflictInput {
        ConflictInput::from_regions(
            "base/native_library.cc",
            &[r#"#include "base/notreached.h""#],
            &[
                r#"#include "base/logging.h""#,
                r#"#include "base/scoped_native_library.h""#,
            ],
        )
    }

    #[test]
    fn concat_witness() {
        let (a, b, c) = (n("a.h"), n("b.h"), n("c.h"));
        assert_eq!(wf_concat(&[a.clone(), b.clone()]), vec![(vec![a.clone()], vec![b.clone()])]);
        assert_eq!(
            wf_concat(&[a.clone(), b.clone(), c.clone()]),
            vec![
                (vec![a.clone()], vec![b.clone(), c.clone()]),
                (vec![a.clone(), b.clone()], vec![c.clone()])
            ]
        );
        assert!(wf_concat(&[a]).is_empty());
        assert!(wf_concat(&[]).is_empty());
    }

    #[test]
    fn remove_witness() {
        let input = native_library_case();
        let got = wf_remove(&input, &[n("base/scoped_native_library.h")]);
        assert_eq!(got, vec![(Selection::Fork, vec![n("base/logging.h")])]);
        assert!(wf_remove(&input, &input.fork_nodes).is_empty());
        assert!(wf_remove(&input, &[n("other.h")]).is_empty());
        let reversed = [n("base/scoped_native_library.h"), n("base/logging.h")];
        assert!(wf_remove(&input, &reversed).is_empty());
    }

    #[test]
    fn selection_learning() {
        let input = native_library_case();
        let config = SynthConfig::default();
        let mut got = learn_selection(&input, &[n("base/notreached.h")], &config).to_vec();
        got.sort();
        let mut want = vec![
            Transformation::Select(Selection::Main),
            Transformation::Select(Selection::MainByIndex(0)),
            Transformation::Select(Selection::MainByPath("base/notreached.h".into())),
        ];
        want.sort();
        assert_eq!(got, want);
        assert!(learn_selection(&input, &[n("nope.h")], &config).is_empty());
    }

    #[test]
    fn transformation_learning_on_fig_c() {
        let input = native_library_case();
        let o = [n("base/notreached.h"), n("base/scoped_native_library.h")];
        let set = learn_transformation(&input, &o, 1, &SynthConfig::default());
        let by_index = Transformation::concat(
            Transformation::Select(Selection::MainByIndex(0)),
            Transformation::Select(Selection::ForkByIndex(1)),
        );
        let by_remove = Transformation::concat(
            Transformation::Select(Selection::Main),
            Transformation::Remove(Selection::Fork, Selection::ForkByPath("base/logging.h".into())),
        );
        assert!(set.contains(&by_index));
        assert!(set.contains(&by_remove));
        assert!(!set.contains(&Transformation::Select(Selection::Fork)));
    }

    #[test]
    fn empty_output_learns_self_removal() {
        let input = native_library_case();
        let set = learn_transformation(&input, &[], 1, &SynthConfig::default());
        assert!(set.contains(&Transformation::Remove(Selection::Main, Selection::Main)));
        assert!(set.contains(&Transformation::Remove(Selection::Fork, Selection::Fork)));
    }

    #[test]
    fn removal_from_any_selection() {
        let input = native_library_case();
        let o = [n("base/scoped_native_library.h")];
        let set = learn_transformation(&input, &o, 0, &SynthConfig::default());
        assert!(set.contains(&Transformation::Remove(Selection::Fork, Selection::ForkByIndex(0))));
        assert!(set.contains(&Transformation::Remove(
            Selection::ForkByIndex(1),
            Selection::MainByPath("base/logging.h".into())
        )));
    }

    #[test]
    fn whole_branch_copy() {
        let input = native_library_case();
        let set = learn_transformation(&input, &input.main_nodes, 2, &SynthConfig::default());
        assert!(set.contains(&Transformation::Select(Selection::Main)));
    }
}
