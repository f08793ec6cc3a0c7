//! Multilevel browsing sessions: a breadcrumb of selected tags over any
//! [`Engine`], with back and reset.

use crate::engine::{Engine, Library};
use crate::error::{Error, Result};
use crate::model::{DocId, Tag, TagCloud, TagId};

#[derive(Debug, Clone)]
struct Level<S> {
    state: S,
    cloud: TagCloud,
}

/// One user's interaction state. Holds no reference to its library; every
/// call takes the library it was opened on and fails with
/// [`Error::StaleSession`] once the library's resources changed.
#[derive(Debug, Clone)]
pub struct Session<S> {
    breadcrumb: Vec<TagId>,
    stack: Vec<Level<S>>,
    revision: u64,
}

impl<S: Clone> Session<S> {
    pub fn open<E>(lib: &Library<E>) -> Result<Self>
    where
        E: Engine<State = S>,
    {
        let c = lib.collection();
        if c.is_empty() {
            return Err(Error::EmptyCollection);
        }
        let state = lib.engine().initial(c);
        let cloud = lib.engine().cloud(c, &state);
        Ok(Session {
            breadcrumb: Vec::new(),
            stack: vec![Level { state, cloud }],
            revision: c.content_revision(),
        })
    }

    fn check<E: Engine<State = S>>(&self, lib: &Library<E>) -> Result<()> {
        let current = lib.collection().content_revision();
        if current != self.revision {
            return Err(Error::StaleSession {
                opened: self.revision,
                current,
            });
        }
        Ok(())
    }

    fn top(&self) -> &Level<S> {
        self.stack.last().expect("stack always holds the initial level")
    }

    /// Selects a tag by label.
    pub fn select<E>(&mut self, lib: &mut Library<E>, label: &str) -> Result<()>
    where
        E: Engine<State = S>,
    {
        self.check(lib)?;
        let tag = lib
            .collection()
            .tag_id(label)
            .ok_or_else(|| Error::InfeasibleTag(label.to_string()))?;
        self.select_id(lib, tag)
    }

    pub fn select_id<E>(&mut self, lib: &mut Library<E>, tag: TagId) -> Result<()>
    where
        E: Engine<State = S>,
    {
        self.check(lib)?;
        let (c, engine) = lib.parts_mut();
        let top = self.top();
        if !top.cloud.contains(tag) {
            return Err(Error::InfeasibleTag(c.tag(tag).to_string()));
        }
        let state = engine.select(c, &top.state, tag)?;
        let cloud = engine.cloud(c, &state);
        self.breadcrumb.push(tag);
        self.stack.push(Level { state, cloud });
        Ok(())
    }

    pub fn back<E: Engine<State = S>>(&mut self, lib: &Library<E>) -> Result<()> {
        self.check(lib)?;
        if self.breadcrumb.pop().is_none() {
            return Err(Error::AtRoot);
        }
        self.stack.pop();
        Ok(())
    }

    pub fn reset<E: Engine<State = S>>(&mut self, lib: &Library<E>) -> Result<()> {
        self.check(lib)?;
        self.breadcrumb.clear();
        self.stack.truncate(1);
        Ok(())
    }

    /// Current resources in insertion order.
    pub fn visit_all<E: Engine<State = S>>(&self, lib: &Library<E>) -> Result<Vec<DocId>> {
        self.check(lib)?;
        Ok(lib.engine().resources(&self.top().state))
    }

    pub fn breadcrumb(&self) -> &[TagId] {
        &self.breadcrumb
    }

    pub fn breadcrumb_labels<'a, E: Engine>(&self, lib: &'a Library<E>) -> Vec<&'a Tag> {
        self.breadcrumb
            .iter()
            .map(|&t| lib.collection().tag(t))
            .collect()
    }

    pub fn depth(&self) -> usize {
        self.breadcrumb.len()
    }

    pub fn state(&self) -> &S {
        &self.top().state
    }

    /// Induced cloud of the current resources, ordered by tag id. Use
    /// [`TagCloud::ranked`] for display order.
    pub fn cloud(&self) -> &TagCloud {
        &self.top().cloud
    }

    pub fn is_terminal(&self) -> bool {
        self.top().cloud.is_empty()
    }

    pub fn opened_at(&self) -> u64 {
        self.revision
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::NdAutomaton;
    use crate::fixtures::fig1;
    use crate::inverted::InvertedIndex;
    use crate::model::Collection;

    fn names<E: Engine>(lib: &Library<E>, docs: &[DocId]) -> Vec<String> {
        docs.iter()
            .map(|&d| lib.collection().resource(d).unwrap().id.to_string())
            .collect()
    }

    fn cloud_names<E: Engine>(lib: &Library<E>, cloud: &TagCloud) -> Vec<String> {
        cloud
            .ranked(lib.collection())
            .into_iter()
            .map(|(t, _)| t.to_string())
            .collect()
    }

    fn walkthrough<E: Engine>() {
        let mut lib = Library::<E>::from_collection(fig1());
        let mut s = Session::open(&lib).unwrap();
        assert_eq!(s.visit_all(&lib).unwrap().len(), 6);
        assert_eq!(s.cloud().len(), 11);

        s.select(&mut lib, "Prehistoric").unwrap();
        assert_eq!(names(&lib, &s.visit_all(&lib).unwrap()), ["R1", "R2", "R3"]);
        assert_eq!(
            cloud_names(&lib, s.cloud()),
            ["Cantabrian", "Cave-Painting", "Levant", "Megalithic"]
        );

        s.select(&mut lib, "Cantabrian").unwrap();
        assert_eq!(names(&lib, &s.visit_all(&lib).unwrap()), ["R1", "R3"]);
        assert_eq!(cloud_names(&lib, s.cloud()), ["Cave-Painting", "Megalithic"]);

        s.select(&mut lib, "Cave-Painting").unwrap();
        assert_eq!(names(&lib, &s.visit_all(&lib).unwrap()), ["R1"]);
        assert!(s.is_terminal());
        assert_eq!(
            s.breadcrumb_labels(&lib)
                .iter()
                .map(|t| t.as_str())
                .collect::<Vec<_>>(),
            ["Prehistoric", "Cantabrian", "Cave-Painting"]
        );
    }

    #[test]
    fn walkthrough_automaton() {
        walkthrough::<NdAutomaton>();
    }

    #[test]
    fn walkthrough_inverted() {
        walkthrough::<InvertedIndex>();
    }

    #[test]
    fn singleton_is_terminal_immediately() {
        let mut c = Collection::new();
        c.add_resource("only", ["a"]).unwrap();
        let lib = Library::<NdAutomaton>::from_collection(c);
        let s = Session::open(&lib).unwrap();
        assert!(s.is_terminal());
        assert_eq!(s.visit_all(&lib).unwrap().len(), 1);
    }

    #[test]
    fn empty_library_cannot_open() {
        let lib = Library::<NdAutomaton>::new();
        assert!(matches!(Session::open(&lib), Err(Error::EmptyCollection)));
    }

    #[test]
    fn back_restores_and_reset_returns_home() {
        let mut lib = Library::<NdAutomaton>::from_collection(fig1());
        let fresh = Session::open(&lib).unwrap();
        let mut s = fresh.clone();
        assert!(matches!(s.back(&lib), Err(Error::AtRoot)));
        s.select(&mut lib, "Prehistoric").unwrap();
        s.back(&lib).unwrap();
        assert_eq!(s.cloud(), fresh.cloud());
        assert_eq!(s.state(), fresh.state());
        assert_eq!(s.depth(), 0);

        s.select(&mut lib, "Protohistoric").unwrap();
        s.select(&mut lib, "Levant").unwrap();
        s.reset(&lib).unwrap();
        assert_eq!(s.cloud(), fresh.cloud());
        assert_eq!(s.visit_all(&lib).unwrap(), fresh.visit_all(&lib).unwrap());
        s.reset(&lib).unwrap();
        assert_eq!(s.depth(), 0);
    }

    #[test]
    fn back_then_other_tag_equals_direct_path() {
        let mut lib = Library::<InvertedIndex>::from_collection(fig1());
        let mut a = Session::open(&lib).unwrap();
        a.select(&mut lib, "Prehistoric").unwrap();
        a.select(&mut lib, "Cantabrian").unwrap();
        a.back(&lib).unwrap();
        a.select(&mut lib, "Levant").unwrap();
        let mut b = Session::open(&lib).unwrap();
        b.select(&mut lib, "Prehistoric").unwrap();
        b.select(&mut lib, "Levant").unwrap();
        assert_eq!(a.visit_all(&lib).unwrap(), b.visit_all(&lib).unwrap());
        assert_eq!(a.cloud(), b.cloud());
    }

    #[test]
    fn infeasible_and_unknown_tags() {
        let mut lib = Library::<NdAutomaton>::from_collection(fig1());
        let mut s = Session::open(&lib).unwrap();
        s.select(&mut lib, "Prehistoric").unwrap();
        assert!(matches!(
            s.select(&mut lib, "Prehistoric"),
            Err(Error::InfeasibleTag(_))
        ));
        assert!(matches!(
            s.select(&mut lib, "Punic"),
            Err(Error::InfeasibleTag(_))
        ));
        assert!(matches!(
            s.select(&mut lib, "Nope"),
            Err(Error::InfeasibleTag(_))
        ));
        assert_eq!(s.depth(), 1);
    }

    #[test]
    fn mutation_makes_session_stale() {
        let mut lib = Library::<NdAutomaton>::from_collection(fig1());
        let mut s = Session::open(&lib).unwrap();
        lib.add_resource("R7", ["Prehistoric"]).unwrap();
        assert!(matches!(
            s.select(&mut lib, "Prehistoric"),
            Err(Error::StaleSession { .. })
        ));
        assert!(matches!(s.visit_all(&lib), Err(Error::StaleSession { .. })));
    }

    #[test]
    fn category_edit_does_not_stale_session() {
        let mut lib = Library::<NdAutomaton>::from_collection(fig1());
        let mut s = Session::open(&lib).unwrap();
        let root = lib.collection().categories().root();
        let cat = lib.add_category(root, "Period").unwrap();
        lib.assign_category(cat, "Prehistoric").unwrap();
        s.select(&mut lib, "Prehistoric").unwrap();
        assert_eq!(s.visit_all(&lib).unwrap().len(), 3);
    }
}
