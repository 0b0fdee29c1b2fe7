use std::collections::{BTreeMap, HashMap};

use crate::kg::{EntityKind, Iri, Namespace};
use crate::matching::Alignment;

/// Disjoint sets over `0..n` with union by rank and path compression.
#[derive(Clone, Debug, Default)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Adds a singleton and returns its index.
    pub fn push(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.rank.push(0);
        self.parent.len() - 1
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut x = x;
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    /// Returns false if `a` and `b` were already in one set.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Equivalence class of at least two IRIs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentitySet {
    /// Sorted, distinct.
    pub members: Vec<Iri>,
    pub kind: EntityKind,
}

impl IdentitySet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Connected components of the correspondence graph, singletons dropped.
/// Sets are ordered by size descending, then by smallest member.
pub fn transitive_closure<'a>(alignments: impl IntoIterator<Item = &'a Alignment>, ns: &Namespace) -> Vec<IdentitySet> {
    let mut ids: HashMap<Iri, usize> = HashMap::new();
    let mut iris: Vec<Iri> = Vec::new();
    let mut uf = UnionFind::default();
    let mut intern = |iri: &Iri, uf: &mut UnionFind| {
        *ids.entry(iri.clone()).or_insert_with(|| {
            iris.push(iri.clone());
            uf.push()
        })
    };
    for al in alignments {
        for c in al {
            let (s, t) = (intern(&c.source, &mut uf), intern(&c.target, &mut uf));
            uf.union(s, t);
        }
    }
    let mut groups: HashMap<usize, Vec<Iri>> = HashMap::new();
    for (i, iri) in iris.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(iri.clone());
    }
    let mut sets: Vec<IdentitySet> = groups
        .into_values()
        .filter(|m| m.len() >= 2)
        .map(|mut members| {
            members.sort();
            let kind = majority_kind(&members, ns);
            IdentitySet { members, kind }
        })
        .collect();
    sort_sets(&mut sets);
    sets
}

fn set_order(a: &IdentitySet, b: &IdentitySet) -> std::cmp::Ordering {
    b.len().cmp(&a.len()).then_with(|| a.members[0].cmp(&b.members[0]))
}

fn sort_sets(sets: &mut [IdentitySet]) {
    sets.sort_by(set_order);
}

pub(crate) fn sort_sets_ref(sets: &mut [&IdentitySet]) {
    sets.sort_by(|a, b| set_order(a, b));
}

fn majority_kind(members: &[Iri], ns: &Namespace) -> EntityKind {
    let mut counts: BTreeMap<EntityKind, usize> = BTreeMap::new();
    for m in members {
        *counts.entry(ns.entity_kind(m)).or_default() += 1;
    }
    let (&kind, _) = counts.iter().max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0))).expect("non-empty set");
    if counts.len() > 1 {
        log::warn!("identity set containing {} mixes entity kinds {:?}; using {}", members[0], counts, kind.name());
    }
    kind
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::Correspondence;

    fn al(pairs: &[(&str, &str)]) -> Alignment {
        let ns = Namespace::default();
        pairs
            .iter()
            .map(|(s, t)| Correspondence::new(ns.resource("w", s).unwrap(), ns.resource("v", t).unwrap(), 1.0))
            .collect()
    }

    #[test]
    fn chains_join() {
        let sets = transitive_closure(&[al(&[("a", "b")]), al(&[("b", "c")])], &Namespace::default());
        assert_eq!(sets.len(), 2);
        let sets = transitive_closure(&[al(&[("a", "b"), ("a", "c")])], &Namespace::default());
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].len(), 3);
        assert_eq!(sets[0].kind, EntityKind::Instance);
    }

    #[test]
    fn union_find_basics() {
        let mut uf = UnionFind::new(4);
        assert!(uf.union(0, 1));
        assert!(uf.union(2, 3));
        assert!(!uf.union(1, 0));
        assert_ne!(uf.find(0), uf.find(2));
        uf.union(1, 3);
        assert_eq!(uf.find(0), uf.find(2));
    }

    #[test]
    fn mixed_kinds_use_majority() {
        let ns = Namespace::default();
        let c = |a: Iri, b: Iri| Correspondence::new(a, b, 1.0);
        let x = Alignment::new(vec![
            c(ns.class("w", "A").unwrap(), ns.class("v", "A").unwrap()),
            c(ns.class("v", "A").unwrap(), ns.resource("u", "A").unwrap()),
        ]);
        let sets = transitive_closure(&[x], &ns);
        assert_eq!(sets[0].kind, EntityKind::Class);
    }
}
