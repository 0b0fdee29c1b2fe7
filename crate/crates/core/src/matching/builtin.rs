use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use super::alignment::{Alignment, Correspondence};
use crate::error::{Error, Result};
use crate::extract::decode_fragment;
use crate::featurize::{default_tokenizer, Tokenizer};
use crate::kg::{EntityKind, Iri, KnowledgeGraph, Namespace};

#[derive(Clone, Debug)]
pub struct MatcherConfig {
    pub jaccard_threshold: f64,
    pub kinds: Vec<EntityKind>,
    pub namespace: Namespace,
    pub tokenizer: Arc<Tokenizer>,
}

impl Default for MatcherConfig {
    fn default() -> Self {
        MatcherConfig {
            jaccard_threshold: 0.8,
            kinds: EntityKind::MATCHABLE.to_vec(),
            namespace: Namespace::default(),
            tokenizer: Arc::new(default_tokenizer().clone()),
        }
    }
}

impl MatcherConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.jaccard_threshold) {
            return Err(Error::Config(format!("jaccardThreshold {} outside [0,1]", self.jaccard_threshold)));
        }
        Ok(())
    }
}

/// Lowercased, underscores as spaces, whitespace collapsed.
pub fn normalize_label(label: &str) -> String {
    label.replace('_', " ").split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

/// `rdfs:label` values of `iri`, or its decoded fragment when it has none.
pub fn entity_labels(kg: &KnowledgeGraph, iri: &Iri) -> Vec<String> {
    let mut labels: Vec<String> = kg.labels(iri).map(str::to_string).collect();
    if labels.is_empty() {
        labels.push(decode_fragment(iri.fragment()));
    }
    labels
}

struct Side<'a> {
    entities: Vec<&'a Iri>,
    /// (entity index, normalized label, token set)
    labels: Vec<(usize, String, BTreeSet<String>)>,
}

fn side<'a>(kg: &'a KnowledgeGraph, kind: EntityKind, cfg: &MatcherConfig) -> Side<'a> {
    let entities: Vec<&Iri> = kg.entities(&cfg.namespace, kind).into_iter().collect();
    let mut labels = Vec::new();
    for (e, iri) in entities.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for raw in entity_labels(kg, iri) {
            let norm = normalize_label(&raw);
            if seen.insert(norm.clone()) {
                let tokens = cfg.tokenizer.tokenize(&raw).tokens.into_iter().collect();
                labels.push((e, norm, tokens));
            }
        }
    }
    Side { entities, labels }
}

fn jaccard(a: &BTreeSet<String>, b: &BTreeSet<String>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

/// Element-level matcher over labels. Entities of equal kind with an equal
/// normalized label get confidence 1; otherwise the best token-set Jaccard
/// over their label pairs is kept if it reaches the threshold. Candidate
/// pairs must share at least one token. The result is sorted by
/// `(source, target)` and is not yet 1:1.
pub fn match_pair(a: &KnowledgeGraph, b: &KnowledgeGraph, cfg: &MatcherConfig) -> Alignment {
    let mut al = Alignment::default();
    for &kind in &cfg.kinds {
        let (sa, sb) = (side(a, kind, cfg), side(b, kind, cfg));
        let mut by_label: HashMap<&str, Vec<usize>> = HashMap::new();
        let mut by_token: HashMap<&str, Vec<usize>> = HashMap::new();
        for (li, (_, norm, tokens)) in sb.labels.iter().enumerate() {
            by_label.entry(norm).or_default().push(li);
            for t in tokens {
                by_token.entry(t).or_default().push(li);
            }
        }
        let mut best: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (ea, norm, tokens) in &sa.labels {
            let mut record = |eb: usize, score: f64| {
                let slot = best.entry((*ea, eb)).or_insert(score);
                if score > *slot {
                    *slot = score;
                }
            };
            for &li in by_label.get(norm.as_str()).into_iter().flatten() {
                record(sb.labels[li].0, 1.0);
            }
            let mut candidates: Vec<usize> =
                tokens.iter().filter_map(|t| by_token.get(t.as_str())).flatten().copied().collect();
            candidates.sort_unstable();
            candidates.dedup();
            for li in candidates {
                let score = jaccard(tokens, &sb.labels[li].2);
                if score > 0.0 && score >= cfg.jaccard_threshold {
                    record(sb.labels[li].0, score);
                }
            }
        }
        for ((ea, eb), confidence) in best {
            al.push(Correspondence::new(sa.entities[ea].clone(), sb.entities[eb].clone(), confidence));
        }
    }
    al.sort();
    al
}
