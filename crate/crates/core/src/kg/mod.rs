//! Triples, graphs, entity kinds and N-Triples I/O.

mod graph;
pub mod namespace;
pub mod ntriples;
mod term;

pub use graph::KnowledgeGraph;
pub use namespace::{entity_kind, EntityKind, Namespace};
pub use ntriples::{parse_ntriples, read_ntriples, serialize_ntriples, write_ntriples};
pub use term::{Iri, Literal, Object, Triple};
