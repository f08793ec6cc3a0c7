//! The collection interchange format.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "resources": [
//!     { "id": "R1", "title": "Resource 1", "tags": ["Cantabrian", "Prehistoric"] }
//!   ],
//!   "categories": { "name": "root", "tags": [], "children": [] }
//! }
//! ```
//!
//! Loading adds resources in file order, which fixes insertion order.
//! Saving is canonical: insertion order, lexicographically sorted tag lists,
//! two-space indentation.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bench::WorkloadDocument;
use crate::category::{CategoryId, CategoryTree};
use crate::error::{Error, Result};
use crate::model::{Collection, Metadata};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CollectionDocument {
    pub format_version: u32,
    pub resources: Vec<ResourceDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub categories: Option<CategoryDocument>,
    /// Benchmark parameters; ignored when loading a plain collection.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workload: Option<WorkloadDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourceDocument {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uri: Option<String>,
    #[serde(default)]
    pub tags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDocument {
    pub name: String,
    #[serde(default)]
    pub tags: Vec<String>,
    #[serde(default)]
    pub children: Vec<CategoryDocument>,
}

impl CollectionDocument {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Canonical document for `collection`.
    pub fn from_collection(collection: &Collection) -> Self {
        let resources = collection
            .resources()
            .map(|(_, r)| {
                let mut tags: Vec<String> =
                    r.tags().iter().map(|&t| collection.tag(t).to_string()).collect();
                tags.sort();
                ResourceDocument {
                    id: r.id.to_string(),
                    title: r.title.clone(),
                    uri: r.uri.clone(),
                    tags,
                }
            })
            .collect();
        let tree = collection.categories();
        let categories =
            (!tree.is_trivial()).then(|| category_document(collection, tree, tree.root()));
        CollectionDocument {
            format_version: FORMAT_VERSION,
            resources,
            categories,
            workload: None,
        }
    }

    /// Builds the collection, rejecting the whole document on any error.
    pub fn to_collection(&self) -> Result<Collection> {
        if self.format_version != FORMAT_VERSION {
            return Err(Error::UnsupportedVersion(self.format_version));
        }
        let mut c = Collection::new();
        for r in &self.resources {
            let meta = Metadata {
                title: r.title.clone(),
                uri: r.uri.clone(),
            };
            c.add_resource_with(&r.id, &r.tags, meta)?;
        }
        if let Some(root) = &self.categories {
            let mut tree = CategoryTree::new(&root.name);
            let mut seen = HashSet::new();
            let root_id = tree.root();
            build_categories(&c, &mut tree, root_id, root, &mut seen)?;
            c.set_categories(tree);
        }
        Ok(c)
    }

    /// Canonical JSON text with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }
}

fn category_document(c: &Collection, tree: &CategoryTree, id: CategoryId) -> CategoryDocument {
    let mut tags: Vec<String> = tree
        .tags(id)
        .filter(|&t| c.extent_size(t) > 0)
        .map(|t| c.tag(t).to_string())
        .collect();
    tags.sort();
    CategoryDocument {
        name: tree.name(id).to_string(),
        tags,
        children: tree
            .children(id)
            .iter()
            .map(|&child| category_document(c, tree, child))
            .collect(),
    }
}

fn build_categories(
    c: &Collection,
    tree: &mut CategoryTree,
    at: CategoryId,
    doc: &CategoryDocument,
    seen: &mut HashSet<String>,
) -> Result<()> {
    for label in &doc.tags {
        let tag = c
            .tag_id(label)
            .filter(|&t| c.extent_size(t) > 0)
            .ok_or_else(|| Error::UnknownCategoryTag(label.clone()))?;
        if !seen.insert(c.tag(tag).to_string()) {
            return Err(Error::DuplicateCategoryTag(label.clone()));
        }
        tree.assign(at, tag)?;
    }
    for child in &doc.children {
        let id = tree.add(at, &child.name)?;
        build_categories(c, tree, id, child, seen)?;
    }
    Ok(())
}

pub fn load(path: impl AsRef<Path>) -> Result<Collection> {
    CollectionDocument::read(path)?.to_collection()
}

pub fn load_str(text: &str) -> Result<Collection> {
    CollectionDocument::parse(text)?.to_collection()
}

pub fn save(collection: &Collection, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, to_json(collection))?;
    Ok(())
}

pub fn to_json(collection: &Collection) -> String {
    CollectionDocument::from_collection(collection).to_json()
}
