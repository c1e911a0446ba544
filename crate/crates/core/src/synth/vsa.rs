//! Version-space representation of transformation sets.
//!
//! A set is a DAG of unions, concatenation joins and explicit leaves. Joins
//! stand for every `Concat(l, r)` with `l` from the left set and `r` from the
//! right set, so the number of programs can grow far beyond what is ever
//! materialized. Every node denotes a non-empty set; the members of a union
//! are pairwise disjoint.

use std::cmp::Ordering;
use std::collections::{BTreeSet, BinaryHeap, HashMap};
use std::rc::Rc;

use crate::dsl::Transformation;

#[derive(Debug)]
pub(crate) enum Vsa {
    /// Sorted, de-duplicated non-`Concat` transformations.
    Leaf(Vec<Transformation>),
    Union(Vec<Rc<Vsa>>),
    Join(Rc<Vsa>, Rc<Vsa>),
}

fn key(node: &Rc<Vsa>) -> usize {
    Rc::as_ptr(node) as usize
}

/// A finite set of transformations.
#[derive(Debug, Clone, Default)]
pub struct ProgramSet {
    root: Option<Rc<Vsa>>,
}

impl ProgramSet {
    pub fn empty() -> ProgramSet {
        ProgramSet { root: None }
    }

    pub(crate) fn from_root(root: Option<Rc<Vsa>>) -> ProgramSet {
        ProgramSet { root }
    }

    /// An explicit set. `Concat` members are split into joins.
    pub fn from_programs<I: IntoIterator<Item = Transformation>>(programs: I) -> ProgramSet {
        let mut leaves = BTreeSet::new();
        let mut concats = Vec::new();
        for t in programs {
            match t {
                Transformation::Concat(l, r) => concats.push((*l, *r)),
                other => {
                    leaves.insert(other);
                }
            }
        }
        let mut members = Vec::new();
        if !leaves.is_empty() {
            members.push(Rc::new(Vsa::Leaf(leaves.into_iter().collect())));
        }
        concats.sort();
        concats.dedup();
        for (l, r) in concats {
            let left = ProgramSet::from_programs([l]).root.unwrap();
            let right = ProgramSet::from_programs([r]).root.unwrap();
            members.push(Rc::new(Vsa::Join(left, right)));
        }
        ProgramSet {
            root: union(members),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    /// Number of distinct programs (saturating).
    pub fn len(&self) -> u128 {
        match &self.root {
            None => 0,
            Some(root) => count(root, &mut HashMap::new()),
        }
    }

    pub fn contains(&self, t: &Transformation) -> bool {
        self.root.as_ref().is_some_and(|r| contains(r, t))
    }

    /// Every program, in no particular order. Intended for small sets.
    pub fn to_vec(&self) -> Vec<Transformation> {
        match &self.root {
            None => Vec::new(),
            Some(root) => enumerate(root),
        }
    }

    /// Structural intersection.
    pub fn intersect(&self, other: &ProgramSet) -> ProgramSet {
        match (&self.root, &other.root) {
            (Some(a), Some(b)) => ProgramSet {
                root: intersect(a, b, &mut HashMap::new()),
            },
            _ => ProgramSet::empty(),
        }
    }

    /// The `k` members with the smallest additive cost, cheapest first.
    ///
    /// `leaf_cost` prices a non-`Concat` transformation and `join_cost` is
    /// added once per `Concat`.
    pub fn cheapest<F>(&self, k: usize, leaf_cost: F, join_cost: f64) -> Vec<(f64, Transformation)>
    where
        F: Fn(&Transformation) -> f64,
    {
        let Some(root) = &self.root else {
            return Vec::new();
        };
        if k == 0 {
            return Vec::new();
        }
        let mut ranker = Ranker {
            k,
            leaf_cost: &leaf_cost,
            join_cost,
            lists: HashMap::new(),
        };
        let list = ranker.ranked(root);
        list.iter()
            .map(|entry| (entry.cost, ranker.materialize(root, entry.pick)))
            .collect()
    }
}

pub(crate) fn union(mut members: Vec<Rc<Vsa>>) -> Option<Rc<Vsa>> {
    match members.len() {
        0 => None,
        1 => members.pop(),
        _ => Some(Rc::new(Vsa::Union(members))),
    }
}

pub(crate) fn leaf(mut programs: Vec<Transformation>) -> Option<Rc<Vsa>> {
    programs.sort();
    programs.dedup();
    if programs.is_empty() {
        None
    } else {
        Some(Rc::new(Vsa::Leaf(programs)))
    }
}

fn count(node: &Rc<Vsa>, memo: &mut HashMap<usize, u128>) -> u128 {
    if let Some(&c) = memo.get(&key(node)) {
        return c;
    }
    let c = match node.as_ref() {
        Vsa::Leaf(ts) => ts.len() as u128,
        Vsa::Union(ms) => ms
            .iter()
            .fold(0u128, |acc, m| acc.saturating_add(count(m, memo))),
        Vsa::Join(l, r) => count(l, memo).saturating_mul(count(r, memo)),
    };
    memo.insert(key(node), c);
    c
}

fn contains(node: &Vsa, t: &Transformation) -> bool {
    match (node, t) {
        (Vsa::Leaf(ts), _) => ts.binary_search(t).is_ok(),
        (Vsa::Union(ms), _) => ms.iter().any(|m| contains(m, t)),
        (Vsa::Join(l, r), Transformation::Concat(tl, tr)) => contains(l, tl) && contains(r, tr),
        (Vsa::Join(..), _) => false,
    }
}

fn enumerate(node: &Vsa) -> Vec<Transformation> {
    match node {
        Vsa::Leaf(ts) => ts.clone(),
        Vsa::Union(ms) => ms.iter().flat_map(|m| enumerate(m)).collect(),
        Vsa::Join(l, r) => {
            let rights = enumerate(r);
            enumerate(l)
                .into_iter()
                .flat_map(|lt| {
                    rights
                        .iter()
                        .map(move |rt| Transformation::concat(lt.clone(), rt.clone()))
                })
                .collect()
        }
    }
}

fn intersect(
    a: &Rc<Vsa>,
    b: &Rc<Vsa>,
    memo: &mut HashMap<(usize, usize), Option<Rc<Vsa>>>,
) -> Option<Rc<Vsa>> {
    if let Some(hit) = memo.get(&(key(a), key(b))) {
        return hit.clone();
    }
    let result = match (a.as_ref(), b.as_ref()) {
        (Vsa::Union(ms), _) => union(ms.iter().filter_map(|m| intersect(m, b, memo)).collect()),
        (_, Vsa::Union(ms)) => union(ms.iter().filter_map(|m| intersect(a, m, memo)).collect()),
        (Vsa::Leaf(xs), Vsa::Leaf(ys)) => {
            let mut common = Vec::new();
            let (mut i, mut j) = (0, 0);
            while i < xs.len() && j < ys.len() {
                match xs[i].cmp(&ys[j]) {
                    Ordering::Less => i += 1,
                    Ordering::Greater => j += 1,
                    Ordering::Equal => {
                        common.push(xs[i].clone());
                        i += 1;
                        j += 1;
                    }
                }
            }
            leaf(common)
        }
        (Vsa::Join(al, ar), Vsa::Join(bl, br)) => {
            match (intersect(al, bl, memo), intersect(ar, br, memo)) {
                (Some(l), Some(r)) => Some(Rc::new(Vsa::Join(l, r))),
                _ => None,
            }
        }
        (Vsa::Leaf(_), Vsa::Join(..)) | (Vsa::Join(..), Vsa::Leaf(_)) => None,
    };
    memo.insert((key(a), key(b)), result.clone());
    result
}

#[derive(Debug, Clone, Copy)]
enum Pick {
    Leaf(usize),
    Member(usize, usize),
    Join(usize, usize),
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    cost: f64,
    pick: Pick,
}

/// Min-heap item ordered by cost, then by insertion sequence.
struct HeapItem {
    cost: f64,
    seq: usize,
    a: usize,
    b: usize,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapItem {}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

struct Ranker<'f, F> {
    k: usize,
    leaf_cost: &'f F,
    join_cost: f64,
    lists: HashMap<usize, Rc<Vec<Entry>>>,
}

impl<F: Fn(&Transformation) -> f64> Ranker<'_, F> {
    fn ranked(&mut self, node: &Rc<Vsa>) -> Rc<Vec<Entry>> {
        if let Some(list) = self.lists.get(&key(node)) {
            return Rc::clone(list);
        }
        let list = match node.as_ref() {
            Vsa::Leaf(ts) => {
                let mut entries: Vec<Entry> = ts
                    .iter()
                    .enumerate()
                    .map(|(i, t)| Entry {
                        cost: (self.leaf_cost)(t),
                        pick: Pick::Leaf(i),
                    })
                    .collect();
                entries.sort_by(|x, y| x.cost.total_cmp(&y.cost));
                entries.truncate(self.k);
                entries
            }
            Vsa::Union(ms) => {
                let lists: Vec<Rc<Vec<Entry>>> = ms.iter().map(|m| self.ranked(m)).collect();
                let mut heap = BinaryHeap::new();
                for (mi, list) in lists.iter().enumerate() {
                    if let Some(first) = list.first() {
                        heap.push(HeapItem {
                            cost: first.cost,
                            seq: mi,
                            a: mi,
                            b: 0,
                        });
                    }
                }
                let mut out = Vec::new();
                while out.len() < self.k {
                    let Some(item) = heap.pop() else { break };
                    out.push(Entry {
                        cost: item.cost,
                        pick: Pick::Member(item.a, item.b),
                    });
                    if let Some(next) = lists[item.a].get(item.b + 1) {
                        heap.push(HeapItem {
                            cost: next.cost,
                            seq: item.a,
                            a: item.a,
                            b: item.b + 1,
                        });
                    }
                }
                out
            }
            Vsa::Join(l, r) => {
                let left = self.ranked(l);
                let right = self.ranked(r);
                let mut heap = BinaryHeap::new();
                let mut seen = std::collections::HashSet::new();
                let mut seq = 0;
                let mut push = |heap: &mut BinaryHeap<HeapItem>, i: usize, j: usize| {
                    if i < left.len() && j < right.len() && seen.insert((i, j)) {
                        heap.push(HeapItem {
                            cost: left[i].cost + right[j].cost + self.join_cost,
                            seq,
                            a: i,
                            b: j,
                        });
                        seq += 1;
                    }
                };
                push(&mut heap, 0, 0);
                let mut out = Vec::new();
                while out.len() < self.k {
                    let Some(item) = heap.pop() else { break };
                    out.push(Entry {
                        cost: item.cost,
                        pick: Pick::Join(item.a, item.b),
                    });
                    push(&mut heap, item.a + 1, item.b);
                    push(&mut heap, item.a, item.b + 1);
                }
                out
            }
        };
        let list = Rc::new(list);
        self.lists.insert(key(node), Rc::clone(&list));
        list
    }

    fn materialize(&self, node: &Rc<Vsa>, pick: Pick) -> Transformation {
        match (node.as_ref(), pick) {
            (Vsa::Leaf(ts), Pick::Leaf(i)) => ts[i].clone(),
            (Vsa::Union(ms), Pick::Member(m, rank)) => {
                let child = &ms[m];
                let entry = self.lists[&key(child)][rank];
                self.materialize(child, entry.pick)
            }
            (Vsa::Join(l, r), Pick::Join(i, j)) => {
                let le = self.lists[&key(l)][i];
                let re = self.lists[&key(r)][j];
                Transformation::concat(self.materialize(l, le.pick), self.materialize(r, re.pick))
            }
            _ => unreachable!("pick does not match node shape"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::Selection;

    fn sel(s: Selection) -> Transformation {
        Transformation::Select(s)
    }

    #[test]
    fn explicit_sets_intersect() {
        let a = ProgramSet::from_programs([sel(Selection::Main), sel(Selection::Fork)]);
        let b = ProgramSet::from_programs([sel(Selection::Fork), sel(Selection::MainByIndex(0))]);
        let both = a.intersect(&b);
        assert_eq!(both.to_vec(), vec![sel(Selection::Fork)]);
        assert_eq!(a.intersect(&a).len(), 2);
        assert!(a.intersect(&ProgramSet::empty()).is_empty());
    }

    #[test]
    fn joins_count_and_contain() {
        let l = leaf(vec![sel(Selection::Main), sel(Selection::MainByIndex(0))]).unwrap();
        let r = leaf(vec![sel(Selection::Fork), sel(Selection::ForkByIndex(1)), sel(Selection::ForkByIndex(2))]).unwrap();
        let set = ProgramSet::from_root(Some(Rc::new(Vsa::Join(l, r))));
        assert_eq!(set.len(), 6);
        assert_eq!(set.to_vec().len(), 6);
        assert!(set.contains(&Transformation::concat(sel(Selection::Main), sel(Selection::ForkByIndex(2)))));
        assert!(!set.contains(&sel(Selection::Main)));
    }

    #[test]
    fn cheapest_is_sorted_and_bounded() {
        let l = leaf(vec![sel(Selection::Main), sel(Selection::MainByIndex(0))]).unwrap();
        let r = leaf(vec![sel(Selection::Fork), sel(Selection::ForkByIndex(1))]).unwrap();
        let join = Rc::new(Vsa::Join(l, r));
        let plain = leaf(vec![sel(Selection::Fork)]).unwrap();
        let set = ProgramSet::from_root(union(vec![plain, join]));
        let cost = |t: &Transformation| if t.selections()[0].is_index() { 3.0 } else { 1.0 };
        let ranked = set.cheapest(10, cost, 1.0);
        assert_eq!(ranked.len(), 5);
        assert!(ranked.windows(2).all(|w| w[0].0 <= w[1].0));
        assert_eq!(ranked[0].1, sel(Selection::Fork));
        assert_eq!(ranked[4].0, 7.0);
        assert_eq!(set.cheapest(2, cost, 1.0).len(), 2);
    }

    #[test]
    fn from_programs_round_trips() {
        let programs = vec![
            sel(Selection::Main),
            Transformation::concat(sel(Selection::Main), sel(Selection::Fork)),
            Transformation::Remove(Selection::Fork, Selection::ForkByIndex(0)),
        ];
        let set = ProgramSet::from_programs(programs.clone());
        let mut got = set.to_vec();
        got.sort();
        let mut want = programs;
        want.sort();
        assert_eq!(got, want);
    }
}
