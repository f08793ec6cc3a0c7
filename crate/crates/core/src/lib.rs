//! Multilevel tag browsing for folksonomy-annotated collections.
//!
//! Selecting a tag narrows both the resource set and the tag cloud: the new
//! cloud holds every tag annotating some, but not all, of the selected
//! resources. Browsing ends when that cloud is empty.
//!
//! Two engines answer each step:
//!
//! * [`NdAutomaton`] keeps a lazily split partition tree of the resources
//!   and memoizes every split it makes, so repeated navigation is answered
//!   from stored per-node tag summaries.
//! * [`InvertedIndex`] re-evaluates a conjunctive query and recounts the
//!   cloud at every step.
//!
//! [`Dfa`] builds the explicit deterministic automaton and is used as an
//! oracle for both.
//!
//! ```
//! use tagnav::{fixtures, Library, NdAutomaton, Session};
//!
//! let mut lib = Library::<NdAutomaton>::from_collection(fixtures::fig1());
//! let mut session = Session::open(&lib)?;
//! session.select(&mut lib, "Prehistoric")?;
//! session.select(&mut lib, "Cantabrian")?;
//! assert_eq!(session.visit_all(&lib)?.len(), 2);
//! # Ok::<(), tagnav::Error>(())
//! ```

pub mod automaton;
pub mod bench;
pub mod category;
pub mod dfa;
mod engine;
mod error;
pub mod fixtures;
pub mod ingest;
pub mod inverted;
mod model;
mod session;

pub use automaton::{Frontier, NdAutomaton, NodeId};
pub use category::{CategoryId, CategoryTree};
pub use dfa::{adversarial, Dfa};
pub use engine::{Engine, Library, Selection};
pub use error::{Error, Result};
pub use ingest::CollectionDocument;
pub use inverted::InvertedIndex;
pub use model::{
    CloudEntry, Collection, DocId, Metadata, Resource, ResourceId, Tag, TagCloud, TagId,
};
pub use session::Session;
