//! Explicit deterministic navigation automaton.
//!
//! Every state is labelled by the resource set it selects and has one
//! outgoing transition per tag of the cloud that set induces. States with
//! equal labels are shared. The construction is exhaustive and can reach
//! `2^n - 1` states, so it serves as a ground-truth oracle on small
//! collections rather than as a browsing engine.
//!
//! Transitions are derived by scanning annotations directly; this module
//! deliberately does not go through [`Collection::induced_cloud`] or the
//! inverted index, so it can check both.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::model::{Collection, DocId, TagId};

pub const DEFAULT_STATE_LIMIT: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(usize);

impl StateId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone)]
pub struct NavState {
    resources: Vec<DocId>,
    out: BTreeMap<TagId, StateId>,
}

impl NavState {
    /// Sorted label of this state.
    pub fn resources(&self) -> &[DocId] {
        &self.resources
    }

    pub fn transitions(&self) -> impl Iterator<Item = (TagId, StateId)> + '_ {
        self.out.iter().map(|(&t, &s)| (t, s))
    }
}

#[derive(Debug, Clone)]
pub struct Dfa {
    states: Vec<NavState>,
    by_label: HashMap<Vec<DocId>, StateId>,
}

impl Dfa {
    /// Breadth-first closure from the state labelled by every resource.
    pub fn build(collection: &Collection, state_limit: usize) -> Result<Dfa> {
        if collection.is_empty() {
            return Err(Error::EmptyCollection);
        }
        let mut dfa = Dfa {
            states: Vec::new(),
            by_label: HashMap::new(),
        };
        let mut queue = VecDeque::new();
        let initial = dfa.intern(collection.docs(), state_limit)?.0;
        queue.push_back(initial);

        while let Some(id) = queue.pop_front() {
            let label = dfa.states[id.0].resources.clone();
            let mut split: BTreeMap<TagId, Vec<DocId>> = BTreeMap::new();
            for &doc in &label {
                for &t in collection.tags_of(doc) {
                    split.entry(t).or_default().push(doc);
                }
            }
            for (tag, target) in split {
                if target.len() == label.len() {
                    continue;
                }
                let (sid, fresh) = dfa.intern(target, state_limit)?;
                dfa.states[id.0].out.insert(tag, sid);
                if fresh {
                    queue.push_back(sid);
                }
            }
        }
        Ok(dfa)
    }

    fn intern(&mut self, label: Vec<DocId>, limit: usize) -> Result<(StateId, bool)> {
        if let Some(&id) = self.by_label.get(&label) {
            return Ok((id, false));
        }
        if self.states.len() >= limit {
            return Err(Error::StateLimitExceeded { limit });
        }
        let id = StateId(self.states.len());
        self.by_label.insert(label.clone(), id);
        self.states.push(NavState {
            resources: label,
            out: BTreeMap::new(),
        });
        Ok((id, true))
    }

    pub fn initial(&self) -> StateId {
        StateId(0)
    }

    pub fn state(&self, id: StateId) -> &NavState {
        &self.states[id.0]
    }

    pub fn states(&self) -> impl Iterator<Item = (StateId, &NavState)> {
        self.states.iter().enumerate().map(|(i, s)| (StateId(i), s))
    }

    /// Looks a state up by its (sorted) label.
    pub fn find(&self, label: &[DocId]) -> Option<StateId> {
        self.by_label.get(label).copied()
    }

    pub fn select(&self, from: StateId, tag: TagId) -> Option<StateId> {
        self.states[from.0].out.get(&tag).copied()
    }

    /// Like [`Dfa::select`] but reports the offending label.
    pub fn select_labeled(
        &self,
        collection: &Collection,
        from: StateId,
        tag: TagId,
    ) -> Result<StateId> {
        self.select(from, tag)
            .ok_or_else(|| Error::InfeasibleTag(collection.tag(tag).to_string()))
    }

    pub fn count_states(&self) -> usize {
        self.states.len()
    }

    pub fn count_transitions(&self) -> usize {
        self.states.iter().map(|s| s.out.len()).sum()
    }

    /// One `state TAB tag TAB state` line per transition.
    pub fn export_tsv<W: Write>(&self, collection: &Collection, mut out: W) -> io::Result<()> {
        for (id, state) in self.states() {
            for (tag, target) in state.transitions() {
                writeln!(out, "{}\t{}\t{}", id.0, collection.tag(tag), target.0)?;
            }
        }
        Ok(())
    }
}

/// Worst-case family: `n` resources and `n` tags where tag `i` annotates
/// every resource except resource `i`. Every nonempty subset of resources
/// is reachable, giving `2^n - 1` states.
///
/// Panics if `n < 2`.
pub fn adversarial(n: usize) -> Collection {
    assert!(n >= 2, "adversarial collections need at least two resources");
    let mut c = Collection::new();
    for i in 1..=n {
        let tags = (1..=n).filter(|&j| j != i).map(|j| format!("t{j}"));
        c.add_resource(&format!("r{i}"), tags)
            .expect("generated ids are unique");
    }
    c
}
