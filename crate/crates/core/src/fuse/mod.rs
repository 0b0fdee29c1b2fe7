//! Transitive closure of all task alignments, canonical IRIs, and the fused
//! graph with per-wiki provenance.

mod canonical;
mod closure;

use std::fmt::Write as _;

use rayon::prelude::*;

pub use canonical::{canonical_uris, majority_fragment, CanonicalMap, FUSED_ID};
pub use closure::{transitive_closure, IdentitySet, UnionFind};

use crate::extract::WikiMetadata;
use crate::kg::namespace::{rdf_type, xsd};
use crate::kg::{EntityKind, KnowledgeGraph, Literal, Namespace, Object, Triple};

/// Provenance vocabulary, local names under `<base>/meta/`.
pub mod vocab {
    pub const USED_IN: &str = "usedIn";
    pub const WIKI: &str = "Wiki";
    pub const WIKI_ID: &str = "wikiId";
    pub const NUM_PAGES: &str = "numPages";
    pub const NUM_ARTICLES: &str = "numArticles";
    pub const NUM_USERS: &str = "numUsers";
    pub const NUM_ACTIVE_USERS: &str = "numActiveUsers";
    pub const WAM_SCORE: &str = "wamScore";
}

/// Rewrites every source graph through `canon` and unions the results. Each
/// instance that is a subject in graph `g` gets `usedIn` pointing at `g`'s
/// wiki resource, which in turn carries the wiki's metadata when known.
pub fn fuse_kgs(
    kgs: &[KnowledgeGraph],
    canon: &CanonicalMap,
    metadata: &[WikiMetadata],
    ns: &Namespace,
) -> KnowledgeGraph {
    let used_in = ns.meta(vocab::USED_IN);
    let parts: Vec<Vec<Triple>> = kgs
        .par_iter()
        .map(|g| {
            let wiki = ns.wiki_resource(g.id());
            let mut out: Vec<Triple> = g
                .triples()
                .iter()
                .map(|t| {
                    let object = match &t.object {
                        Object::Iri(o) => Object::Iri(canon.get(o).clone()),
                        lit => lit.clone(),
                    };
                    Triple::new(canon.get(&t.subject).clone(), canon.get(&t.predicate).clone(), object)
                })
                .collect();
            let mut last = None;
            for s in g.subjects() {
                if ns.entity_kind(s) == EntityKind::Instance && last != Some(s) {
                    out.push(Triple::new(canon.get(s).clone(), used_in.clone(), wiki.clone()));
                    last = Some(s);
                }
            }
            out.extend(wiki_triples(g.id(), metadata.iter().find(|m| m.wiki_id == g.id()), ns));
            out
        })
        .collect();
    KnowledgeGraph::new(FUSED_ID, parts.into_iter().flatten())
}

fn wiki_triples(wiki_id: &str, meta: Option<&WikiMetadata>, ns: &Namespace) -> Vec<Triple> {
    let w = ns.wiki_resource(wiki_id);
    let mut out = vec![
        Triple::new(w.clone(), rdf_type(), ns.meta(vocab::WIKI)),
        Triple::new(w.clone(), ns.meta(vocab::WIKI_ID), Literal::plain(wiki_id)),
    ];
    let Some(m) = meta else {
        log::warn!("no metadata for wiki {wiki_id}");
        return out;
    };
    let int = |v: u64| Literal::typed(v.to_string(), xsd("integer"));
    for (name, value) in [
        (vocab::NUM_PAGES, m.pages),
        (vocab::NUM_ARTICLES, m.articles),
        (vocab::NUM_USERS, m.users),
        (vocab::NUM_ACTIVE_USERS, m.active_users),
    ] {
        if let Some(v) = value {
            out.push(Triple::new(w.clone(), ns.meta(name), int(v)));
        }
    }
    if let Some(wam) = m.wam_score {
        let dt = xsd("double");
        out.push(Triple::new(w.clone(), ns.meta(vocab::WAM_SCORE), Literal::typed(format!("{wam:?}"), dt)));
    }
    out
}

/// `canonical<TAB>member` per line, sets in their given order.
pub fn closure_to_tsv(sets: &[IdentitySet], canon: &CanonicalMap) -> String {
    let mut s = String::new();
    for set in sets {
        for m in &set.members {
            let _ = writeln!(s, "{}\t{}", canon.get(m), m);
        }
    }
    s
}
