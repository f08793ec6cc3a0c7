//! Browsing engines and the [`Library`] that keeps one in sync with its
//! collection.

use crate::automaton::{Frontier, NdAutomaton};
use crate::category::CategoryId;
use crate::error::{Error, Result};
use crate::inverted::InvertedIndex;
use crate::model::{Collection, DocId, Metadata, Resource, TagCloud, TagId};

/// A multilevel browsing backend.
///
/// `State` describes one interaction state; callers only ever pass back
/// states the engine produced for the current collection content.
pub trait Engine {
    type State: Clone;

    fn name(&self) -> &'static str;

    fn build(collection: &Collection) -> Self
    where
        Self: Sized;

    fn initial(&self, collection: &Collection) -> Self::State;

    fn select(
        &mut self,
        collection: &Collection,
        state: &Self::State,
        tag: TagId,
    ) -> Result<Self::State>;

    fn cloud(&self, collection: &Collection, state: &Self::State) -> TagCloud;

    /// Selected resources in insertion order.
    fn resources(&self, state: &Self::State) -> Vec<DocId>;

    fn size(&self, state: &Self::State) -> usize;

    fn insert(&mut self, doc: DocId, tags: &[TagId]) -> Result<()>;

    fn remove(&mut self, doc: DocId, tags: &[TagId]) -> Result<()>;

    /// Structural self-check against the mirrored collection.
    fn validate(&self, _collection: &Collection) -> std::result::Result<(), String> {
        Ok(())
    }
}

impl Engine for NdAutomaton {
    type State = Frontier;

    fn name(&self) -> &'static str {
        "automaton"
    }

    fn build(collection: &Collection) -> Self {
        NdAutomaton::from_collection(collection)
    }

    fn initial(&self, _: &Collection) -> Frontier {
        self.initial_frontier()
    }

    fn select(&mut self, c: &Collection, state: &Frontier, tag: TagId) -> Result<Frontier> {
        NdAutomaton::select(self, c, state, tag)
    }

    fn cloud(&self, _: &Collection, state: &Frontier) -> TagCloud {
        NdAutomaton::cloud(self, state)
    }

    fn resources(&self, state: &Frontier) -> Vec<DocId> {
        self.members(state)
    }

    fn size(&self, state: &Frontier) -> usize {
        state.len()
    }

    fn insert(&mut self, doc: DocId, tags: &[TagId]) -> Result<()> {
        NdAutomaton::insert(self, doc, tags)
    }

    fn remove(&mut self, doc: DocId, tags: &[TagId]) -> Result<()> {
        NdAutomaton::remove(self, doc, tags)
    }

    fn validate(&self, collection: &Collection) -> std::result::Result<(), String> {
        NdAutomaton::validate(self, collection)
    }
}

/// Baseline state: the breadcrumb so far and the resources it selects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    pub tags: Vec<TagId>,
    pub resources: Vec<DocId>,
}

impl Engine for InvertedIndex {
    type State = Selection;

    fn name(&self) -> &'static str {
        "inverted"
    }

    fn build(collection: &Collection) -> Self {
        InvertedIndex::build(collection)
    }

    fn initial(&self, _: &Collection) -> Selection {
        Selection {
            tags: Vec::new(),
            resources: self.all().to_vec(),
        }
    }

    /// Re-evaluates the whole conjunction for the extended breadcrumb.
    fn select(&mut self, c: &Collection, state: &Selection, tag: TagId) -> Result<Selection> {
        let mut tags = state.tags.clone();
        tags.push(tag);
        let resources = self.conjunctive(&tags);
        if resources.is_empty() || resources.len() == state.resources.len() {
            return Err(Error::InfeasibleTag(c.tag(tag).to_string()));
        }
        Ok(Selection { tags, resources })
    }

    /// Counting pass over the selected resources.
    fn cloud(&self, c: &Collection, state: &Selection) -> TagCloud {
        c.induced_cloud(&state.resources).unwrap_or_default()
    }

    fn resources(&self, state: &Selection) -> Vec<DocId> {
        state.resources.clone()
    }

    fn size(&self, state: &Selection) -> usize {
        state.resources.len()
    }

    fn insert(&mut self, doc: DocId, tags: &[TagId]) -> Result<()> {
        InvertedIndex::insert(self, doc, tags)
    }

    fn remove(&mut self, doc: DocId, tags: &[TagId]) -> Result<()> {
        InvertedIndex::remove(self, doc, tags)
    }
}

/// A collection together with an engine kept in lockstep with it.
#[derive(Debug, Clone)]
pub struct Library<E> {
    collection: Collection,
    engine: E,
}

impl<E: Engine> Library<E> {
    pub fn new() -> Self {
        Self::from_collection(Collection::new())
    }

    pub fn from_collection(collection: Collection) -> Self {
        let engine = E::build(&collection);
        Library { collection, engine }
    }

    pub fn collection(&self) -> &Collection {
        &self.collection
    }

    pub fn engine(&self) -> &E {
        &self.engine
    }

    pub(crate) fn parts_mut(&mut self) -> (&Collection, &mut E) {
        (&self.collection, &mut self.engine)
    }

    pub fn into_parts(self) -> (Collection, E) {
        (self.collection, self.engine)
    }

    pub fn add_resource<I, S>(&mut self, id: &str, tags: I) -> Result<DocId>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.add_resource_with(id, tags, Metadata::default())
    }

    pub fn add_resource_with<I, S>(&mut self, id: &str, tags: I, meta: Metadata) -> Result<DocId>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let doc = self.collection.add_resource_with(id, tags, meta)?;
        self.engine.insert(doc, self.collection.tags_of(doc))?;
        Ok(doc)
    }

    pub fn remove_resource(&mut self, id: &str) -> Result<Resource> {
        let doc = self
            .collection
            .doc(id)
            .ok_or_else(|| Error::UnknownResource(id.to_string()))?;
        self.engine.remove(doc, self.collection.tags_of(doc))?;
        self.collection.remove_resource(id)
    }

    pub fn add_category(&mut self, parent: CategoryId, name: &str) -> Result<CategoryId> {
        self.collection.add_category(parent, name)
    }

    pub fn assign_category(&mut self, category: CategoryId, label: &str) -> Result<TagId> {
        self.collection.assign_category(category, label)
    }

    pub fn move_category(&mut self, node: CategoryId, new_parent: CategoryId) -> Result<()> {
        self.collection.move_category(node, new_parent)
    }
}

impl<E: Engine> Default for Library<E> {
    fn default() -> Self {
        Self::new()
    }
}
