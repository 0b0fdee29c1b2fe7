use std::collections::{BTreeSet, HashMap};
use std::ops::Range;

use super::namespace::{EntityKind, Namespace, RDFS_LABEL};
use super::term::{Iri, Object, Triple};

/// An immutable, duplicate-free set of triples belonging to one wiki (or a
/// union of wikis). Triples are kept sorted by (subject, predicate, object
/// serialization), so each subject owns a contiguous run.
#[derive(Clone, Debug)]
pub struct KnowledgeGraph {
    id: String,
    triples: Vec<Triple>,
    by_subject: HashMap<Iri, Range<usize>>,
    by_predicate: HashMap<Iri, Vec<usize>>,
}

impl KnowledgeGraph {
    pub fn new(id: impl Into<String>, triples: impl IntoIterator<Item = Triple>) -> Self {
        let mut triples: Vec<Triple> = triples.into_iter().collect();
        triples.sort_unstable();
        triples.dedup();
        Self::from_sorted(id.into(), triples)
    }

    pub fn empty(id: impl Into<String>) -> Self {
        Self::from_sorted(id.into(), Vec::new())
    }

    fn from_sorted(id: String, triples: Vec<Triple>) -> Self {
        let mut by_subject: HashMap<Iri, Range<usize>> = HashMap::new();
        let mut by_predicate: HashMap<Iri, Vec<usize>> = HashMap::new();
        let mut start = 0;
        for (i, t) in triples.iter().enumerate() {
            if i + 1 == triples.len() || triples[i + 1].subject != t.subject {
                by_subject.insert(t.subject.clone(), start..i + 1);
                start = i + 1;
            }
            by_predicate.entry(t.predicate.clone()).or_default().push(i);
        }
        KnowledgeGraph { id, triples, by_subject, by_predicate }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn with_id(self, id: impl Into<String>) -> Self {
        KnowledgeGraph { id: id.into(), ..self }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Triples in canonical sorted order.
    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.with_subject(&triple.subject).binary_search(triple).is_ok()
    }

    pub fn with_subject(&self, subject: &Iri) -> &[Triple] {
        match self.by_subject.get(subject) {
            Some(range) => &self.triples[range.clone()],
            None => &[],
        }
    }

    pub fn with_predicate<'a>(&'a self, predicate: &Iri) -> impl Iterator<Item = &'a Triple> + 'a {
        self.by_predicate.get(predicate).map(|v| v.as_slice()).unwrap_or(&[]).iter().map(move |&i| &self.triples[i])
    }

    pub fn subjects(&self) -> impl Iterator<Item = &Iri> {
        let mut prev: Option<&Iri> = None;
        self.triples.iter().filter_map(move |t| {
            if prev == Some(&t.subject) {
                None
            } else {
                prev = Some(&t.subject);
                Some(&t.subject)
            }
        })
    }

    /// Every distinct IRI in any position, sorted.
    pub fn iris(&self) -> BTreeSet<&Iri> {
        self.triples.iter().flat_map(Triple::iris).collect()
    }

    pub fn entities(&self, ns: &Namespace, kind: EntityKind) -> BTreeSet<&Iri> {
        self.triples.iter().flat_map(Triple::iris).filter(|iri| ns.entity_kind(iri) == kind).collect()
    }

    /// Lexical forms of the `rdfs:label` literals attached to `subject`.
    pub fn labels<'a>(&'a self, subject: &Iri) -> impl Iterator<Item = &'a str> + 'a {
        self.with_subject(subject).iter().filter_map(|t| match &t.object {
            Object::Literal(lit) if t.predicate.as_str() == RDFS_LABEL => Some(lit.lexical()),
            _ => None,
        })
    }
}

impl PartialEq for KnowledgeGraph {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.triples == other.triples
    }
}

impl Eq for KnowledgeGraph {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::term::Literal;

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://x/{s}")).unwrap()
    }

    #[test]
    fn duplicates_collapse_and_indices_agree() {
        let t1 = Triple::new(iri("b"), iri("p"), Literal::plain("1"));
        let t2 = Triple::new(iri("a"), iri("p"), iri("b"));
        let t3 = Triple::new(iri("a"), iri("q"), Literal::plain("2"));
        let kg = KnowledgeGraph::new("g", vec![t1.clone(), t2.clone(), t1.clone(), t3.clone()]);
        assert_eq!(kg.len(), 3);
        assert_eq!(kg.with_subject(&iri("a")), &[t2.clone(), t3.clone()]);
        assert_eq!(kg.with_subject(&iri("b")), std::slice::from_ref(&t1));
        assert_eq!(kg.with_predicate(&iri("p")).count(), 2);
        assert!(kg.contains(&t3));
        assert!(!kg.contains(&Triple::new(iri("a"), iri("q"), Literal::plain("3"))));
        assert_eq!(kg.subjects().count(), 2);
        assert_eq!(kg.iris().len(), 4);
    }
}
