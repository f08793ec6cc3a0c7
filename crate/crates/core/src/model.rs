//! Folksonomy collections: resources, their tag annotations, the emergent
//! tag cloud and the induced-cloud rule every browsing engine agrees on.

use std::borrow::Borrow;
use std::collections::HashMap;
use std::fmt;

use unicode_normalization::UnicodeNormalization;

use crate::category::{CategoryId, CategoryTree};
use crate::error::{Error, Result};

/// Dense slot of a resource inside a [`Collection`].
///
/// Slots are handed out in insertion order and never reused, so ordering by
/// `DocId` is ordering by insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DocId(pub u32);

impl DocId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for DocId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Interned tag handle, valid for the collection that issued it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TagId(pub u32);

impl TagId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// External, user-facing resource identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ResourceId(String);

impl ResourceId {
    pub fn new(id: impl Into<String>) -> Result<Self> {
        let id = id.into();
        if id.trim().is_empty() {
            return Err(Error::EmptyId);
        }
        Ok(ResourceId(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for ResourceId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ResourceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A tag label, NFC-normalized and compared case-sensitively.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tag(String);

impl Tag {
    pub fn new(label: &str) -> Result<Self> {
        if label.trim().is_empty() {
            return Err(Error::EmptyTag);
        }
        Ok(Tag(label.nfc().collect()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Tag {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone)]
pub struct Resource {
    pub id: ResourceId,
    pub title: Option<String>,
    pub uri: Option<String>,
    tags: Vec<TagId>,
}

impl Resource {
    /// Tags of this resource, sorted by id and duplicate-free.
    pub fn tags(&self) -> &[TagId] {
        &self.tags
    }
}

/// Optional descriptive fields carried alongside an annotation.
#[derive(Debug, Clone, Default)]
pub struct Metadata {
    pub title: Option<String>,
    pub uri: Option<String>,
}

#[derive(Debug, Clone, Default)]
struct TagDict {
    labels: Vec<Tag>,
    ids: HashMap<Tag, TagId>,
}

impl TagDict {
    fn intern(&mut self, tag: Tag) -> TagId {
        if let Some(&id) = self.ids.get(&tag) {
            return id;
        }
        let id = TagId(self.labels.len() as u32);
        self.labels.push(tag.clone());
        self.ids.insert(tag, id);
        id
    }
}

/// One entry of a [`TagCloud`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CloudEntry {
    pub tag: TagId,
    pub count: u32,
}

/// Tags in scope with their presence counts, ordered by [`TagId`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TagCloud {
    entries: Vec<CloudEntry>,
}

impl TagCloud {
    /// Builds a cloud from arbitrary entries; zero counts are dropped.
    pub fn from_entries(mut entries: Vec<CloudEntry>) -> Self {
        entries.retain(|e| e.count > 0);
        entries.sort_unstable_by_key(|e| e.tag);
        TagCloud { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CloudEntry] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = &CloudEntry> {
        self.entries.iter()
    }

    pub fn count(&self, tag: TagId) -> Option<u32> {
        self.entries
            .binary_search_by_key(&tag, |e| e.tag)
            .ok()
            .map(|i| self.entries[i].count)
    }

    pub fn contains(&self, tag: TagId) -> bool {
        self.count(tag).is_some()
    }

    /// Display order: presence descending, then label ascending.
    pub fn ranked<'a>(&self, collection: &'a Collection) -> Vec<(&'a Tag, u32)> {
        let mut out: Vec<_> = self
            .entries
            .iter()
            .map(|e| (collection.tag(e.tag), e.count))
            .collect();
        out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        out
    }
}

/// Dense per-tag counter sized to a collection's vocabulary.
pub(crate) struct TagCounter {
    counts: Vec<u32>,
    touched: Vec<TagId>,
}

impl TagCounter {
    pub(crate) fn new(vocabulary: usize) -> Self {
        TagCounter {
            counts: vec![0; vocabulary],
            touched: Vec::new(),
        }
    }

    #[inline]
    pub(crate) fn add(&mut self, tag: TagId, by: u32) {
        let slot = &mut self.counts[tag.index()];
        if *slot == 0 {
            self.touched.push(tag);
        }
        *slot += by;
    }

    /// Entries with `0 < count < total`.
    pub(crate) fn into_strict_cloud(self, total: usize) -> TagCloud {
        let counts = self.counts;
        let mut entries: Vec<CloudEntry> = self
            .touched
            .into_iter()
            .map(|tag| CloudEntry {
                tag,
                count: counts[tag.index()],
            })
            .filter(|e| (e.count as usize) < total)
            .collect();
        entries.sort_unstable_by_key(|e| e.tag);
        TagCloud { entries }
    }
}

/// A folksonomy-annotated collection plus its tag-category hierarchy.
///
/// `revision` moves on every mutation. `content_revision` moves only when the
/// annotated resource set changes; browsing sessions pin it.
#[derive(Debug, Clone, Default)]
pub struct Collection {
    dict: TagDict,
    extent_sizes: Vec<u32>,
    slots: Vec<Option<Resource>>,
    by_id: HashMap<ResourceId, DocId>,
    live: usize,
    categories: CategoryTree,
    revision: u64,
    content_revision: u64,
}

impl Collection {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn content_revision(&self) -> u64 {
        self.content_revision
    }

    /// Number of interned tags, including ones whose extent is now empty.
    pub fn vocabulary_size(&self) -> usize {
        self.dict.labels.len()
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
        let id = ResourceId::new(id)?;
        if self.by_id.contains_key(&id) {
            return Err(Error::DuplicateResource(id.to_string()));
        }
        let labels = tags
            .into_iter()
            .map(|t| Tag::new(t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let mut ids: Vec<TagId> = labels.into_iter().map(|t| self.intern(t)).collect();
        ids.sort_unstable();
        ids.dedup();
        for t in &ids {
            self.extent_sizes[t.index()] += 1;
        }

        let doc = DocId(self.slots.len() as u32);
        self.by_id.insert(id.clone(), doc);
        self.slots.push(Some(Resource {
            id,
            title: meta.title,
            uri: meta.uri,
            tags: ids,
        }));
        self.live += 1;
        self.bump_content();
        Ok(doc)
    }

    pub fn remove_resource(&mut self, id: &str) -> Result<Resource> {
        let doc = self
            .by_id
            .remove(id)
            .ok_or_else(|| Error::UnknownResource(id.to_string()))?;
        let resource = self.slots[doc.index()]
            .take()
            .expect("id map points at a live slot");
        for t in &resource.tags {
            self.extent_sizes[t.index()] -= 1;
        }
        self.live -= 1;
        self.bump_content();
        Ok(resource)
    }

    fn bump_content(&mut self) {
        self.revision += 1;
        self.content_revision += 1;
    }

    pub(crate) fn intern(&mut self, tag: Tag) -> TagId {
        let id = self.dict.intern(tag);
        if id.index() >= self.extent_sizes.len() {
            self.extent_sizes.push(0);
        }
        id
    }

    pub fn doc(&self, id: &str) -> Option<DocId> {
        self.by_id.get(id).copied()
    }

    pub fn resource(&self, doc: DocId) -> Option<&Resource> {
        self.slots.get(doc.index()).and_then(Option::as_ref)
    }

    /// Live resources in insertion order.
    pub fn resources(&self) -> impl Iterator<Item = (DocId, &Resource)> {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.as_ref().map(|r| (DocId(i as u32), r)))
    }

    pub fn docs(&self) -> Vec<DocId> {
        self.resources().map(|(d, _)| d).collect()
    }

    /// Tags of a live resource; empty for unknown slots.
    #[inline]
    pub fn tags_of(&self, doc: DocId) -> &[TagId] {
        match self.slots.get(doc.index()) {
            Some(Some(r)) => &r.tags,
            _ => &[],
        }
    }

    #[inline]
    pub fn has_tag(&self, doc: DocId, tag: TagId) -> bool {
        self.tags_of(doc).binary_search(&tag).is_ok()
    }

    /// Looks a label up after normalization.
    pub fn tag_id(&self, label: &str) -> Option<TagId> {
        let tag = Tag::new(label).ok()?;
        self.dict.ids.get(&tag).copied()
    }

    pub fn tag(&self, id: TagId) -> &Tag {
        &self.dict.labels[id.index()]
    }

    pub fn extent_size(&self, tag: TagId) -> usize {
        self.extent_sizes.get(tag.index()).copied().unwrap_or(0) as usize
    }

    /// Every tag annotating at least one resource, with its presence.
    pub fn cloud(&self) -> TagCloud {
        let entries = self
            .extent_sizes
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(i, &n)| CloudEntry {
                tag: TagId(i as u32),
                count: n,
            })
            .collect();
        TagCloud { entries }
    }

    /// Tags annotating some but not all resources of `scope`.
    ///
    /// `scope` must hold distinct live resources.
    pub fn induced_cloud(&self, scope: &[DocId]) -> Result<TagCloud> {
        if scope.is_empty() {
            return Err(Error::EmptyScope);
        }
        let mut counter = TagCounter::new(self.vocabulary_size());
        for &doc in scope {
            for &t in self.tags_of(doc) {
                counter.add(t, 1);
            }
        }
        Ok(counter.into_strict_cloud(scope.len()))
    }

    pub fn categories(&self) -> &CategoryTree {
        &self.categories
    }

    pub fn add_category(&mut self, parent: CategoryId, name: &str) -> Result<CategoryId> {
        let id = self.categories.add(parent, name)?;
        self.revision += 1;
        Ok(id)
    }

    /// Assigns `label` to `category`, moving it out of any previous one.
    pub fn assign_category(&mut self, category: CategoryId, label: &str) -> Result<TagId> {
        self.categories.check(category)?;
        let tag = self.intern(Tag::new(label)?);
        self.categories.assign(category, tag)?;
        self.revision += 1;
        Ok(tag)
    }

    pub fn move_category(&mut self, node: CategoryId, new_parent: CategoryId) -> Result<()> {
        self.categories.move_node(node, new_parent)?;
        self.revision += 1;
        Ok(())
    }

    pub(crate) fn set_categories(&mut self, tree: CategoryTree) {
        self.categories = tree;
        self.revision += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fig1;

    fn label_cloud(c: &Collection, cloud: &TagCloud) -> Vec<(String, u32)> {
        let mut v: Vec<_> = cloud
            .iter()
            .map(|e| (c.tag(e.tag).to_string(), e.count))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn first_resource_contributes_three_tags() {
        let mut c = Collection::new();
        c.add_resource("Resource 1", ["Cave-Painting", "Cantabrian", "Prehistoric"])
            .unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.cloud().len(), 3);
    }

    #[test]
    fn untagged_resource_leaves_cloud_alone() {
        let mut c = fig1();
        let before = c.cloud();
        c.add_resource("bare", Vec::<&str>::new()).unwrap();
        assert_eq!(c.len(), 7);
        assert_eq!(c.cloud(), before);
    }

    #[test]
    fn fig1_has_eleven_tags() {
        assert_eq!(fig1().cloud().len(), 11);
    }

    #[test]
    fn blank_and_duplicate_ids_rejected() {
        let mut c = fig1();
        assert!(matches!(c.add_resource("  ", ["x"]), Err(Error::EmptyId)));
        assert!(matches!(
            c.add_resource("R1", ["x"]),
            Err(Error::DuplicateResource(id)) if id == "R1"
        ));
        assert!(matches!(c.add_resource("R9", [""]), Err(Error::EmptyTag)));
    }

    #[test]
    fn duplicate_tags_collapse() {
        let mut c = Collection::new();
        let d = c.add_resource("a", ["x", "x", "y"]).unwrap();
        assert_eq!(c.tags_of(d).len(), 2);
        assert_eq!(c.extent_size(c.tag_id("x").unwrap()), 1);
    }

    #[test]
    fn tags_compare_after_nfc() {
        let mut c = Collection::new();
        // precomposed vs combining acute
        c.add_resource("a", ["caf\u{e9}"]).unwrap();
        c.add_resource("b", ["cafe\u{301}"]).unwrap();
        c.add_resource("c", ["Caf\u{e9}"]).unwrap();
        assert_eq!(c.cloud().len(), 2);
        assert_eq!(c.extent_size(c.tag_id("cafe\u{301}").unwrap()), 2);
    }

    #[test]
    fn removing_r3_drops_megalithic() {
        let mut c = fig1();
        let mega = c.tag_id("Megalithic").unwrap();
        assert!(c.cloud().contains(mega));
        c.remove_resource("R3").unwrap();
        assert!(!c.cloud().contains(mega));
        assert_eq!(c.cloud().len(), 10);
    }

    #[test]
    fn remove_then_readd_restores_cloud() {
        let mut c = fig1();
        let before = label_cloud(&c, &c.cloud());
        let r = c.remove_resource("R5").unwrap();
        let labels: Vec<String> = r.tags().iter().map(|&t| c.tag(t).to_string()).collect();
        c.add_resource("R5", labels).unwrap();
        assert_eq!(label_cloud(&c, &c.cloud()), before);
    }

    #[test]
    fn remove_unknown_fails() {
        let mut c = Collection::new();
        assert!(matches!(
            c.remove_resource("R1"),
            Err(Error::UnknownResource(_))
        ));
    }

    #[test]
    fn induced_cloud_examples() {
        let c = fig1();
        let all = c.docs();
        assert_eq!(c.induced_cloud(&all).unwrap().len(), 11);

        let scope: Vec<_> = ["R1", "R2", "R3"].iter().map(|r| c.doc(r).unwrap()).collect();
        let cloud = c.induced_cloud(&scope).unwrap();
        assert_eq!(
            label_cloud(&c, &cloud),
            vec![
                ("Cantabrian".into(), 2),
                ("Cave-Painting".into(), 2),
                ("Levant".into(), 1),
                ("Megalithic".into(), 1),
            ]
        );

        let single = [c.doc("R1").unwrap()];
        assert!(c.induced_cloud(&single).unwrap().is_empty());
        assert!(matches!(c.induced_cloud(&[]), Err(Error::EmptyScope)));
    }

    #[test]
    fn tag_on_every_resource_is_not_selectable() {
        let mut c = Collection::new();
        c.add_resource("a", ["all", "x"]).unwrap();
        c.add_resource("b", ["all"]).unwrap();
        let cloud = c.induced_cloud(&c.docs()).unwrap();
        assert!(!cloud.contains(c.tag_id("all").unwrap()));
        assert!(cloud.contains(c.tag_id("x").unwrap()));
        // the flat cloud still lists it
        assert!(c.cloud().contains(c.tag_id("all").unwrap()));
    }

    #[test]
    fn ranked_orders_by_count_then_label() {
        let c = fig1();
        let ranked = c.cloud().ranked(&c);
        let head: Vec<_> = ranked.iter().take(4).map(|(t, n)| (t.as_str(), *n)).collect();
        assert_eq!(
            head,
            vec![
                ("Prehistoric", 3),
                ("Protohistoric", 3),
                ("Cantabrian", 2),
                ("Cave-Painting", 2)
            ]
        );
    }

    #[test]
    fn revision_strictly_increases() {
        let mut c = Collection::new();
        let mut last = c.revision();
        c.add_resource("a", ["x"]).unwrap();
        assert!(c.revision() > last);
        last = c.revision();
        let root = c.categories().root();
        let cat = c.add_category(root, "Period").unwrap();
        assert!(c.revision() > last);
        last = c.revision();
        c.assign_category(cat, "x").unwrap();
        assert!(c.revision() > last);
        last = c.revision();
        c.remove_resource("a").unwrap();
        assert!(c.revision() > last);
    }
}
