use std::collections::{BTreeMap, HashMap, HashSet};

use super::closure::IdentitySet;
use crate::kg::{EntityKind, Iri, Namespace};

/// Wiki segment of the fused namespace.
pub const FUSED_ID: &str = "fused";

/// Canonical IRI assignment for every IRI in the fused graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CanonicalMap {
    map: HashMap<Iri, Iri>,
}

impl CanonicalMap {
    /// Mapped IRI, or `iri` itself when it was never assigned.
    pub fn get<'a>(&'a self, iri: &'a Iri) -> &'a Iri {
        self.map.get(iri).unwrap_or(iri)
    }

    pub fn lookup(&self, iri: &Iri) -> Option<&Iri> {
        self.map.get(iri)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Most frequent fragment, ties to the lexicographically smallest.
pub fn majority_fragment<'a>(members: impl IntoIterator<Item = &'a Iri>) -> Option<&'a str> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for m in members {
        *counts.entry(m.fragment()).or_default() += 1;
    }
    counts
        .into_iter()
        .fold(None, |best: Option<(&str, usize)>, (f, n)| match best {
            Some((_, bn)) if bn >= n => best,
            _ => Some((f, n)),
        })
        .map(|(f, _)| f)
}

/// Assigns `<base>/fused/<kind>/<fragment>` IRIs. Identity sets go first in
/// the given order (descending size), then every remaining entity IRI in
/// `others` in lexicographic order. A fragment already taken within the
/// same kind gets `_1`, `_2`, ... appended. IRIs of kind `Other` keep their
/// identity.
pub fn canonical_uris<'a>(
    sets: &[IdentitySet],
    others: impl IntoIterator<Item = &'a Iri>,
    ns: &Namespace,
) -> CanonicalMap {
    let mut claimed: HashMap<EntityKind, HashSet<String>> = HashMap::new();
    let mut map = HashMap::new();
    let mut claim = |kind: EntityKind, fragment: &str| -> Iri {
        let taken = claimed.entry(kind).or_default();
        let mut candidate = fragment.to_string();
        let mut k = 0;
        while taken.contains(&candidate) {
            k += 1;
            candidate = format!("{fragment}_{k}");
        }
        taken.insert(candidate.clone());
        ns.entity(FUSED_ID, kind, &candidate).expect("fragment of a valid IRI stays valid")
    };
    let mut ordered: Vec<&IdentitySet> = sets.iter().collect();
    super::closure::sort_sets_ref(&mut ordered);
    for set in ordered {
        let canonical = if set.kind == EntityKind::Other {
            set.members[0].clone()
        } else {
            claim(set.kind, majority_fragment(&set.members).expect("non-empty set"))
        };
        for m in &set.members {
            map.insert(m.clone(), canonical.clone());
        }
    }
    let mut rest: Vec<&Iri> = others.into_iter().filter(|i| !map.contains_key(*i)).collect();
    rest.sort();
    rest.dedup();
    for iri in rest {
        let kind = ns.entity_kind(iri);
        let canonical = if kind == EntityKind::Other { iri.clone() } else { claim(kind, iri.fragment()) };
        map.insert(iri.clone(), canonical);
    }
    CanonicalMap { map }
}
