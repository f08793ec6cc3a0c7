//! Tag-category hierarchy. Purely presentational: it groups cloud entries
//! but never affects which resources a selection reaches.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::model::{CloudEntry, TagCloud, TagId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CategoryId(pub(crate) usize);

impl CategoryId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone)]
struct CategoryNode {
    name: String,
    parent: Option<CategoryId>,
    children: Vec<CategoryId>,
    tags: BTreeSet<TagId>,
}

/// Rooted ordered tree of categories. Tags without an explicit category
/// belong to the root, which doubles as the "uncategorized" bucket.
#[derive(Debug, Clone)]
pub struct CategoryTree {
    nodes: Vec<CategoryNode>,
    assignment: HashMap<TagId, CategoryId>,
}

impl Default for CategoryTree {
    fn default() -> Self {
        Self::new("root")
    }
}

impl CategoryTree {
    pub fn new(root_name: &str) -> Self {
        CategoryTree {
            nodes: vec![CategoryNode {
                name: root_name.to_string(),
                parent: None,
                children: Vec::new(),
                tags: BTreeSet::new(),
            }],
            assignment: HashMap::new(),
        }
    }

    pub fn root(&self) -> CategoryId {
        CategoryId(0)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// True when the tree carries no information beyond the default root.
    pub fn is_trivial(&self) -> bool {
        self.nodes.len() == 1 && self.assignment.is_empty() && self.nodes[0].name == "root"
    }

    pub fn ids(&self) -> impl Iterator<Item = CategoryId> {
        (0..self.nodes.len()).map(CategoryId)
    }

    pub(crate) fn check(&self, id: CategoryId) -> Result<()> {
        if id.0 < self.nodes.len() {
            Ok(())
        } else {
            Err(Error::UnknownNode(id.0))
        }
    }

    pub fn get(&self, index: usize) -> Result<CategoryId> {
        self.check(CategoryId(index))?;
        Ok(CategoryId(index))
    }

    pub fn name(&self, id: CategoryId) -> &str {
        &self.nodes[id.0].name
    }

    pub fn parent(&self, id: CategoryId) -> Option<CategoryId> {
        self.nodes[id.0].parent
    }

    pub fn children(&self, id: CategoryId) -> &[CategoryId] {
        &self.nodes[id.0].children
    }

    /// Tags explicitly assigned to `id`.
    pub fn tags(&self, id: CategoryId) -> impl Iterator<Item = TagId> + '_ {
        self.nodes[id.0].tags.iter().copied()
    }

    pub fn category_of(&self, tag: TagId) -> CategoryId {
        self.assignment.get(&tag).copied().unwrap_or(self.root())
    }

    pub fn find(&self, name: &str) -> Option<CategoryId> {
        self.nodes.iter().position(|n| n.name == name).map(CategoryId)
    }

    pub(crate) fn add(&mut self, parent: CategoryId, name: &str) -> Result<CategoryId> {
        self.check(parent)?;
        let id = CategoryId(self.nodes.len());
        self.nodes.push(CategoryNode {
            name: name.to_string(),
            parent: Some(parent),
            children: Vec::new(),
            tags: BTreeSet::new(),
        });
        self.nodes[parent.0].children.push(id);
        Ok(id)
    }

    pub(crate) fn assign(&mut self, category: CategoryId, tag: TagId) -> Result<()> {
        self.check(category)?;
        if let Some(prev) = self.assignment.insert(tag, category) {
            self.nodes[prev.0].tags.remove(&tag);
        }
        self.nodes[category.0].tags.insert(tag);
        Ok(())
    }

    /// True if `node` lies in the subtree rooted at `ancestor` (inclusive).
    pub fn is_within(&self, node: CategoryId, ancestor: CategoryId) -> bool {
        let mut cur = Some(node);
        while let Some(c) = cur {
            if c == ancestor {
                return true;
            }
            cur = self.nodes[c.0].parent;
        }
        false
    }

    pub(crate) fn move_node(&mut self, node: CategoryId, new_parent: CategoryId) -> Result<()> {
        self.check(node)?;
        self.check(new_parent)?;
        if self.is_within(new_parent, node) {
            return Err(Error::CycleError {
                node: node.0,
                new_parent: new_parent.0,
            });
        }
        let old = self.nodes[node.0].parent.expect("only the root has no parent");
        self.nodes[old.0].children.retain(|&c| c != node);
        self.nodes[new_parent.0].children.push(node);
        self.nodes[node.0].parent = Some(new_parent);
        Ok(())
    }

    /// Preorder traversal from the root.
    pub fn preorder(&self) -> Vec<CategoryId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root()];
        while let Some(id) = stack.pop() {
            out.push(id);
            stack.extend(self.nodes[id.0].children.iter().rev());
        }
        out
    }

    /// Names from the root down to `id`.
    pub fn path(&self, id: CategoryId) -> Vec<&str> {
        let mut names = Vec::new();
        let mut cur = Some(id);
        while let Some(c) = cur {
            names.push(self.nodes[c.0].name.as_str());
            cur = self.nodes[c.0].parent;
        }
        names.reverse();
        names
    }

    /// Groups cloud entries by category in preorder, skipping empty groups.
    pub fn group(&self, cloud: &TagCloud) -> Vec<(CategoryId, Vec<CloudEntry>)> {
        let mut buckets: HashMap<CategoryId, Vec<CloudEntry>> = HashMap::new();
        for e in cloud.iter() {
            buckets.entry(self.category_of(e.tag)).or_default().push(*e);
        }
        self.preorder()
            .into_iter()
            .filter_map(|id| buckets.remove(&id).map(|v| (id, v)))
            .collect()
    }
}
