use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extract::decode_fragment;
use crate::fuse::vocab::USED_IN;
use crate::kg::namespace::RDF_TYPE;
use crate::kg::{EntityKind, Iri, KnowledgeGraph, Namespace};

pub const OTHER: &str = "other";

/// Nested record for sunburst-style rendering.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistributionNode {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iri: Option<String>,
    pub value: usize,
    /// Fraction of the parent's value.
    pub share: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<DistributionNode>,
}

impl DistributionNode {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

/// Instances per class (counted as typing pairs) with a per-wiki breakdown
/// from `usedIn`. Classes whose share of all typing pairs is below
/// `min_share`, and wikis below `min_share` within their class, are folded
/// into an `other` entry.
pub fn class_distribution(kg: &KnowledgeGraph, min_share: f64, ns: &Namespace) -> Result<DistributionNode> {
    if !(0.0..1.0).contains(&min_share) {
        return Err(Error::InvalidInput(format!("minShare {min_share} outside [0,1)")));
    }
    let rdf_type = Iri::new(RDF_TYPE).expect("valid");
    let used_in = ns.meta(USED_IN);
    let mut members: BTreeMap<&Iri, BTreeSet<&Iri>> = BTreeMap::new();
    for t in kg.with_predicate(&rdf_type) {
        if let Some(class) = t.object.as_iri() {
            if ns.entity_kind(class) == EntityKind::Class {
                members.entry(class).or_default().insert(&t.subject);
            }
        }
    }
    let total: usize = members.values().map(BTreeSet::len).sum();
    let mut classes = Vec::new();
    let mut other = 0usize;
    for (class, instances) in &members {
        let value = instances.len();
        let share = value as f64 / total as f64;
        if share < min_share {
            other += value;
            continue;
        }
        let mut wikis: BTreeMap<String, usize> = BTreeMap::new();
        for inst in instances {
            for t in kg.with_subject(inst).iter().filter(|t| t.predicate == used_in) {
                if let Some(w) = t.object.as_iri() {
                    let id = w.as_str().rsplit('/').next().unwrap_or_default().to_string();
                    *wikis.entry(id).or_default() += 1;
                }
            }
        }
        let children = fold(wikis.into_iter().map(|(w, n)| (w, None, n)).collect(), min_share);
        classes.push((decode_fragment(class.fragment()), Some(class.to_string()), value, children));
    }
    if other > 0 {
        classes.push((OTHER.to_string(), None, other, Vec::new()));
    }
    let children = finish(classes, total);
    Ok(DistributionNode { name: "classes".into(), iri: None, value: total, share: 1.0, children })
}

type Entry = (String, Option<String>, usize, Vec<DistributionNode>);

fn fold(entries: Vec<(String, Option<String>, usize)>, min_share: f64) -> Vec<DistributionNode> {
    let total: usize = entries.iter().map(|e| e.2).sum();
    let mut kept: Vec<Entry> = Vec::new();
    let mut other = 0;
    for (name, iri, value) in entries {
        if (value as f64 / total as f64) < min_share {
            other += value;
        } else {
            kept.push((name, iri, value, Vec::new()));
        }
    }
    if other > 0 {
        kept.push((OTHER.to_string(), None, other, Vec::new()));
    }
    finish(kept, total)
}

/// Sorted by value descending then name, with `other` last.
fn finish(mut entries: Vec<Entry>, total: usize) -> Vec<DistributionNode> {
    entries.sort_by(|a, b| {
        (a.1.is_none() && a.0 == OTHER)
            .cmp(&(b.1.is_none() && b.0 == OTHER))
            .then_with(|| b.2.cmp(&a.2))
            .then_with(|| a.0.cmp(&b.0))
    });
    entries
        .into_iter()
        .map(|(name, iri, value, children)| DistributionNode {
            name,
            iri,
            value,
            share: value as f64 / total as f64,
            children,
        })
        .collect()
}
