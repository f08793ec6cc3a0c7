//! One-level inverted index with a conjunctive evaluator: the baseline engine.

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::model::{Collection, DocId, TagCloud, TagId};

/// Tag → sorted extent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InvertedIndex {
    postings: FxHashMap<TagId, Vec<DocId>>,
    docs: Vec<DocId>,
}

impl InvertedIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn build(collection: &Collection) -> Self {
        let mut ix = InvertedIndex::new();
        for (doc, r) in collection.resources() {
            ix.insert(doc, r.tags())
                .expect("collection slots are unique");
        }
        ix
    }

    pub fn doc_count(&self) -> usize {
        self.docs.len()
    }

    pub fn posting_count(&self) -> usize {
        self.postings.len()
    }

    pub fn extent(&self, tag: TagId) -> &[DocId] {
        self.postings.get(&tag).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn all(&self) -> &[DocId] {
        &self.docs
    }

    pub fn insert(&mut self, doc: DocId, tags: &[TagId]) -> Result<()> {
        let pos = match self.docs.binary_search(&doc) {
            Ok(_) => return Err(Error::DuplicateResource(doc.to_string())),
            Err(pos) => pos,
        };
        self.docs.insert(pos, doc);
        for &t in tags {
            let list = self.postings.entry(t).or_default();
            match list.last() {
                Some(&last) if last > doc => {
                    let at = list.binary_search(&doc).unwrap_err();
                    list.insert(at, doc);
                }
                Some(&last) if last == doc => {}
                _ => list.push(doc),
            }
        }
        Ok(())
    }

    pub fn remove(&mut self, doc: DocId, tags: &[TagId]) -> Result<()> {
        let pos = self
            .docs
            .binary_search(&doc)
            .map_err(|_| Error::UnknownResource(doc.to_string()))?;
        self.docs.remove(pos);
        for t in tags {
            if let Some(list) = self.postings.get_mut(t) {
                if let Ok(at) = list.binary_search(&doc) {
                    list.remove(at);
                }
                if list.is_empty() {
                    self.postings.remove(t);
                }
            }
        }
        Ok(())
    }

    /// Resources carrying every tag in `tags`. The empty conjunction is the
    /// whole collection; an unknown tag yields nothing.
    pub fn conjunctive(&self, tags: &[TagId]) -> Vec<DocId> {
        let mut lists = Vec::with_capacity(tags.len());
        for t in tags {
            match self.postings.get(t) {
                Some(list) => lists.push(list.as_slice()),
                None => return Vec::new(),
            }
        }
        if lists.is_empty() {
            return self.docs.clone();
        }
        lists.sort_unstable_by_key(|l| l.len());
        let mut acc = lists[0].to_vec();
        for list in &lists[1..] {
            if acc.is_empty() {
                break;
            }
            acc = intersect(&acc, list);
        }
        acc
    }

    /// One multilevel step computed from scratch: resources for the
    /// selection and the cloud they induce.
    pub fn browse_step(
        &self,
        collection: &Collection,
        selected: &[TagId],
    ) -> Result<(Vec<DocId>, TagCloud)> {
        let resources = self.conjunctive(selected);
        let cloud = collection.induced_cloud(&resources)?;
        Ok((resources, cloud))
    }
}

/// Intersects two sorted lists by galloping through the longer one.
pub fn intersect(small: &[DocId], large: &[DocId]) -> Vec<DocId> {
    let (small, large) = if small.len() <= large.len() {
        (small, large)
    } else {
        (large, small)
    };
    let mut out = Vec::with_capacity(small.len());
    let mut base = 0;
    for &x in small {
        let rest = &large[base..];
        if rest.is_empty() {
            break;
        }
        let mut bound = 1;
        while bound < rest.len() && rest[bound] < x {
            bound *= 2;
        }
        let lo = bound / 2;
        let hi = (bound + 1).min(rest.len());
        match rest[lo..hi].binary_search(&x) {
            Ok(i) => {
                out.push(x);
                base += lo + i + 1;
            }
            Err(i) => base += lo + i,
        }
    }
    out
}
