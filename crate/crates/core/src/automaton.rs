//! Non-deterministic navigation automaton stored as a laminar split tree.
//!
//! Each node holds a set of resources and a per-tag count summary of them.
//! A node may be split once, on a pivot tag, into the members carrying the
//! pivot and the members that don't. Children therefore partition their
//! parent, the node sets form a laminar family and a tree over `n`
//! resources never exceeds `2n - 1` nodes.
//!
//! Splits are created lazily, the first time a selection needs one, and are
//! kept for every later query. A browsing state is a [`Frontier`]: a set of
//! disjoint nodes whose union is exactly the current selection.
//!
//! The automaton reads annotations from the [`Collection`] it mirrors when it
//! has to split a node; callers keep the two in sync (see
//! [`crate::Library`]).

use std::fmt::Write as _;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::model::{CloudEntry, Collection, DocId, TagCloud, TagCounter, TagId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(u32);

impl NodeId {
    fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Split {
    pub pivot: TagId,
    /// Members carrying the pivot.
    pub inside: NodeId,
    /// Members without it.
    pub outside: NodeId,
}

/// Nodes at least this large (and at least an eighth of the vocabulary)
/// count their tags in a dense array instead of a hash map.
const DENSE_MIN: usize = 64;

fn wants_dense(size: usize, vocabulary: usize) -> bool {
    size >= DENSE_MIN.max(vocabulary / 8)
}

/// Per-tag member counts of a node.
#[derive(Debug, Clone)]
enum Summary {
    Sparse(FxHashMap<TagId, u32>),
    Dense(Vec<u32>),
}

impl Default for Summary {
    fn default() -> Self {
        Summary::Sparse(FxHashMap::default())
    }
}

impl Summary {
    #[inline]
    fn count(&self, tag: TagId) -> u32 {
        match self {
            Summary::Sparse(m) => m.get(&tag).copied().unwrap_or(0),
            Summary::Dense(v) => v.get(tag.index()).copied().unwrap_or(0),
        }
    }

    #[inline]
    fn add(&mut self, tag: TagId, by: u32) {
        match self {
            Summary::Sparse(m) => *m.entry(tag).or_insert(0) += by,
            Summary::Dense(v) => {
                if tag.index() >= v.len() {
                    v.resize(tag.index() + 1, 0);
                }
                v[tag.index()] += by;
            }
        }
    }

    #[inline]
    fn decrement(&mut self, tag: TagId) {
        match self {
            Summary::Sparse(m) => {
                if let Some(n) = m.get_mut(&tag) {
                    *n -= 1;
                    if *n == 0 {
                        m.remove(&tag);
                    }
                }
            }
            Summary::Dense(v) => {
                if let Some(n) = v.get_mut(tag.index()) {
                    *n -= 1;
                }
            }
        }
    }

    /// Nonzero entries in unspecified order.
    fn for_each(&self, mut f: impl FnMut(TagId, u32)) {
        match self {
            Summary::Sparse(m) => m.iter().for_each(|(&t, &n)| f(t, n)),
            Summary::Dense(v) => v
                .iter()
                .enumerate()
                .filter(|(_, &n)| n > 0)
                .for_each(|(i, &n)| f(TagId(i as u32), n)),
        }
    }

    fn to_dense(&self, vocabulary: usize) -> Summary {
        let mut v = vec![0; vocabulary];
        self.for_each(|t, n| {
            if t.index() >= v.len() {
                v.resize(t.index() + 1, 0);
            }
            v[t.index()] = n;
        });
        Summary::Dense(v)
    }

    /// `self - other`, represented as requested.
    fn minus(&self, other: &Summary, dense: bool, vocabulary: usize) -> Summary {
        let mut out = match (self, dense) {
            (Summary::Dense(v), true) => Summary::Dense(v.clone()),
            (_, true) => self.to_dense(vocabulary),
            (_, false) => {
                let mut m = FxHashMap::default();
                self.for_each(|t, n| {
                    let rest = n - other.count(t);
                    if rest > 0 {
                        m.insert(t, rest);
                    }
                });
                return Summary::Sparse(m);
            }
        };
        other.for_each(|t, n| {
            if let Summary::Dense(v) = &mut out {
                v[t.index()] -= n;
            }
        });
        out
    }

    fn sorted(&self) -> Vec<(TagId, u32)> {
        let mut v = Vec::new();
        self.for_each(|t, n| v.push((t, n)));
        v.sort_unstable();
        v
    }
}

#[derive(Debug, Clone, Default)]
struct SplitNode {
    members: Vec<DocId>,
    summary: Summary,
    split: Option<Split>,
}

impl SplitNode {
    #[inline]
    fn count(&self, tag: TagId) -> u32 {
        self.summary.count(tag)
    }
}

/// Active states of a browsing run. Node member sets are pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frontier {
    nodes: Vec<NodeId>,
    size: usize,
}

impl Frontier {
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// Number of selected resources.
    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }
}

#[derive(Debug, Clone)]
pub struct NdAutomaton {
    nodes: Vec<Option<SplitNode>>,
    free: Vec<NodeId>,
    root: NodeId,
    live: usize,
    vocabulary: usize,
}

impl Default for NdAutomaton {
    fn default() -> Self {
        Self::new()
    }
}

impl NdAutomaton {
    /// An automaton over no resources: a single empty root.
    pub fn new() -> Self {
        NdAutomaton {
            nodes: vec![Some(SplitNode::default())],
            free: Vec::new(),
            root: NodeId(0),
            live: 1,
            vocabulary: 0,
        }
    }

    /// Unsplit automaton over every resource of `collection`.
    pub fn from_collection(collection: &Collection) -> Self {
        let mut a = NdAutomaton::new();
        let vocabulary = collection.vocabulary_size();
        a.vocabulary = vocabulary;
        let root = a.node_mut(a.root);
        if wants_dense(collection.len(), vocabulary) {
            root.summary = Summary::Dense(vec![0; vocabulary]);
        }
        for (doc, r) in collection.resources() {
            root.members.push(doc);
            for &t in r.tags() {
                root.summary.add(t, 1);
            }
        }
        a
    }

    /// Builds the automaton and its initial frontier `[root]`.
    pub fn init(collection: &Collection) -> Result<(Self, Frontier)> {
        if collection.is_empty() {
            return Err(Error::EmptyCollection);
        }
        let a = Self::from_collection(collection);
        let f = a.initial_frontier();
        Ok((a, f))
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn initial_frontier(&self) -> Frontier {
        let size = self.node(self.root).members.len();
        Frontier {
            nodes: if size == 0 { Vec::new() } else { vec![self.root] },
            size,
        }
    }

    pub fn node_count(&self) -> usize {
        self.live
    }

    /// Sorted members of a node.
    pub fn members_of(&self, id: NodeId) -> &[DocId] {
        &self.node(id).members
    }

    pub fn summary_of(&self, id: NodeId, tag: TagId) -> u32 {
        self.node(id).count(tag)
    }

    pub fn split_of(&self, id: NodeId) -> Option<Split> {
        self.node(id).split
    }

    #[inline]
    fn node(&self, id: NodeId) -> &SplitNode {
        self.nodes[id.index()]
            .as_ref()
            .expect("node ids handed out are live")
    }

    #[inline]
    fn node_mut(&mut self, id: NodeId) -> &mut SplitNode {
        self.nodes[id.index()]
            .as_mut()
            .expect("node ids handed out are live")
    }

    fn alloc(&mut self, node: SplitNode) -> NodeId {
        self.live += 1;
        match self.free.pop() {
            Some(id) => {
                self.nodes[id.index()] = Some(node);
                id
            }
            None => {
                self.nodes.push(Some(node));
                NodeId((self.nodes.len() - 1) as u32)
            }
        }
    }

    fn release(&mut self, id: NodeId) -> SplitNode {
        self.live -= 1;
        self.free.push(id);
        self.nodes[id.index()].take().expect("released node is live")
    }

    /// Narrows `frontier` to the resources carrying `tag`.
    ///
    /// Fully covered nodes are kept whole, untouched nodes are dropped and
    /// mixed nodes are descended, splitting unsplit ones on `tag`.
    pub fn select(
        &mut self,
        collection: &Collection,
        frontier: &Frontier,
        tag: TagId,
    ) -> Result<Frontier> {
        let total: usize = frontier
            .nodes
            .iter()
            .map(|&n| self.node(n).count(tag) as usize)
            .sum();
        if total == 0 || total == frontier.size {
            let label = if tag.index() < collection.vocabulary_size() {
                collection.tag(tag).to_string()
            } else {
                format!("{tag:?}")
            };
            return Err(Error::InfeasibleTag(label));
        }

        let mut out = Vec::new();
        let mut stack: Vec<NodeId> = frontier.nodes.iter().rev().copied().collect();
        while let Some(id) = stack.pop() {
            let node = self.node(id);
            let hits = node.count(tag) as usize;
            if hits == 0 {
                continue;
            }
            if hits == node.members.len() {
                out.push(id);
                continue;
            }
            let s = match node.split {
                Some(s) => s,
                None => self.split(collection, id, tag),
            };
            if s.pivot == tag {
                out.push(s.inside);
            } else {
                stack.push(s.outside);
                stack.push(s.inside);
            }
        }
        Ok(Frontier {
            nodes: out,
            size: total,
        })
    }

    /// Splits an unsplit node that is mixed on `pivot`.
    fn split(&mut self, collection: &Collection, id: NodeId, pivot: TagId) -> Split {
        let parent = self.node(id);
        let (inside, outside): (Vec<DocId>, Vec<DocId>) = parent
            .members
            .iter()
            .partition(|&&d| collection.has_tag(d, pivot));
        debug_assert!(!inside.is_empty() && !outside.is_empty());

        // Count the smaller side explicitly, derive the other by difference.
        let vocabulary = self.vocabulary;
        let small_is_inside = inside.len() <= outside.len();
        let (small, large) = if small_is_inside {
            (&inside, &outside)
        } else {
            (&outside, &inside)
        };
        let mut small_summary = if wants_dense(small.len(), vocabulary) {
            Summary::Dense(vec![0; vocabulary])
        } else {
            Summary::default()
        };
        for &d in small {
            for &t in collection.tags_of(d) {
                small_summary.add(t, 1);
            }
        }
        let large_summary =
            parent
                .summary
                .minus(&small_summary, wants_dense(large.len(), vocabulary), vocabulary);
        let (in_summary, out_summary) = if small_is_inside {
            (small_summary, large_summary)
        } else {
            (large_summary, small_summary)
        };

        let inside = self.alloc(SplitNode {
            members: inside,
            summary: in_summary,
            split: None,
        });
        let outside = self.alloc(SplitNode {
            members: outside,
            summary: out_summary,
            split: None,
        });
        let split = Split {
            pivot,
            inside,
            outside,
        };
        self.node_mut(id).split = Some(split);
        split
    }

    /// Tags that strictly narrow the frontier, with their counts.
    pub fn cloud(&self, frontier: &Frontier) -> TagCloud {
        if let [only] = frontier.nodes[..] {
            let node = self.node(only);
            let size = node.members.len() as u32;
            let mut entries = Vec::new();
            node.summary.for_each(|tag, count| {
                if count < size {
                    entries.push(CloudEntry { tag, count });
                }
            });
            return TagCloud::from_entries(entries);
        }
        let mut counter = TagCounter::new(self.vocabulary);
        for &id in &frontier.nodes {
            self.node(id).summary.for_each(|t, n| counter.add(t, n));
        }
        counter.into_strict_cloud(frontier.size)
    }

    /// Selected resources in insertion order.
    pub fn members(&self, frontier: &Frontier) -> Vec<DocId> {
        if let [only] = frontier.nodes[..] {
            return self.node(only).members.clone();
        }
        let mut out = Vec::with_capacity(frontier.size);
        for &id in &frontier.nodes {
            out.extend_from_slice(&self.node(id).members);
        }
        out.sort_unstable();
        out
    }

    /// Routes a new resource from the root down the existing splits.
    ///
    /// `tags` must be sorted and duplicate-free, as handed out by
    /// [`Collection`].
    pub fn insert(&mut self, doc: DocId, tags: &[TagId]) -> Result<()> {
        if self.node(self.root).members.binary_search(&doc).is_ok() {
            return Err(Error::DuplicateResource(doc.to_string()));
        }
        if let Some(max) = tags.iter().max() {
            self.vocabulary = self.vocabulary.max(max.index() + 1);
        }
        let vocabulary = self.vocabulary;
        let mut cur = self.root;
        loop {
            let node = self.node_mut(cur);
            insert_sorted(&mut node.members, doc);
            if matches!(node.summary, Summary::Sparse(_))
                && wants_dense(node.members.len(), vocabulary)
            {
                node.summary = node.summary.to_dense(vocabulary);
            }
            for &t in tags {
                node.summary.add(t, 1);
            }
            match node.split {
                Some(s) => {
                    cur = if tags.binary_search(&s.pivot).is_ok() {
                        s.inside
                    } else {
                        s.outside
                    }
                }
                None => return Ok(()),
            }
        }
    }

    /// Removes a resource along its root-to-node path and collapses any
    /// split left with an empty side.
    pub fn remove(&mut self, doc: DocId, tags: &[TagId]) -> Result<()> {
        if self.node(self.root).members.binary_search(&doc).is_err() {
            return Err(Error::UnknownResource(doc.to_string()));
        }
        let mut path = Vec::new();
        let mut cur = self.root;
        loop {
            path.push(cur);
            let node = self.node_mut(cur);
            if let Ok(at) = node.members.binary_search(&doc) {
                node.members.remove(at);
            }
            for &t in tags {
                node.summary.decrement(t);
            }
            match node.split {
                Some(s) => {
                    cur = if tags.binary_search(&s.pivot).is_ok() {
                        s.inside
                    } else {
                        s.outside
                    }
                }
                None => break,
            }
        }

        for &id in path.iter().rev() {
            let Some(s) = self.node(id).split else {
                continue;
            };
            let in_empty = self.node(s.inside).members.is_empty();
            let out_empty = self.node(s.outside).members.is_empty();
            if !in_empty && !out_empty {
                continue;
            }
            let (survivor, dead) = if in_empty {
                (s.outside, s.inside)
            } else {
                (s.inside, s.outside)
            };
            let dead = self.release(dead);
            debug_assert!(dead.split.is_none());
            let survivor = self.release(survivor);
            self.node_mut(id).split = survivor.split;
        }
        Ok(())
    }

    /// Structural self-check: disjoint-partition law at every split, exact
    /// summaries against `collection`, node accounting and the laminar bound.
    pub fn validate(&self, collection: &Collection) -> std::result::Result<(), String> {
        let mut seen = 0usize;
        let mut stack = vec![self.root];
        while let Some(id) = stack.pop() {
            seen += 1;
            let node = self.node(id);
            if !node.members.windows(2).all(|w| w[0] < w[1]) {
                return Err(format!("{id:?}: members not strictly sorted"));
            }
            let mut expect = Summary::default();
            for &d in &node.members {
                for &t in collection.tags_of(d) {
                    expect.add(t, 1);
                }
            }
            if expect.sorted() != node.summary.sorted() {
                return Err(format!("{id:?}: summary out of sync"));
            }
            if let Some(s) = node.split {
                let inside = self.node(s.inside);
                let outside = self.node(s.outside);
                if inside.members.is_empty() || outside.members.is_empty() {
                    return Err(format!("{id:?}: split with an empty side"));
                }
                let hits = node.count(s.pivot) as usize;
                if hits == 0 || hits >= node.members.len() {
                    return Err(format!("{id:?}: degenerate pivot"));
                }
                if !inside.members.iter().all(|&d| collection.has_tag(d, s.pivot))
                    || outside.members.iter().any(|&d| collection.has_tag(d, s.pivot))
                {
                    return Err(format!("{id:?}: children do not follow the pivot"));
                }
                let mut union = inside.members.clone();
                union.extend_from_slice(&outside.members);
                union.sort_unstable();
                if union != node.members {
                    return Err(format!("{id:?}: children do not partition the node"));
                }
                stack.push(s.inside);
                stack.push(s.outside);
            }
        }
        if seen != self.live {
            return Err(format!("{} live nodes but {seen} reachable", self.live));
        }
        let n = self.node(self.root).members.len();
        if n > 0 && self.live > 2 * n - 1 {
            return Err(format!("{} nodes exceed 2n - 1 for n = {n}", self.live));
        }
        if n != collection.len() {
            return Err(format!("root holds {n} of {} resources", collection.len()));
        }
        Ok(())
    }

    /// Indented dump, one node per line: member count, then `/pivot` when
    /// split. Inside children are marked `+`, outside children `-`.
    pub fn export_tree(&self, collection: &Collection) -> String {
        let mut out = String::new();
        let mut stack = vec![(self.root, 0usize, ' ')];
        while let Some((id, depth, side)) = stack.pop() {
            let node = self.node(id);
            let indent = "  ".repeat(depth);
            let mark = if depth == 0 { String::new() } else { format!("{side} ") };
            match node.split {
                Some(s) => {
                    let _ = writeln!(
                        out,
                        "{indent}{mark}{} /{}",
                        node.members.len(),
                        collection.tag(s.pivot)
                    );
                    stack.push((s.outside, depth + 1, '-'));
                    stack.push((s.inside, depth + 1, '+'));
                }
                None => {
                    let _ = writeln!(out, "{indent}{mark}{}", node.members.len());
                }
            }
        }
        out
    }
}

fn insert_sorted(v: &mut Vec<DocId>, doc: DocId) {
    match v.last() {
        Some(&last) if last > doc => {
            let at = v.binary_search(&doc).unwrap_or_else(|e| e);
            v.insert(at, doc);
        }
        _ => v.push(doc),
    }
}
