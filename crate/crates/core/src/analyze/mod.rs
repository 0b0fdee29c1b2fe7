//! Statistics over identity sets, alignments and the fused graph.

mod distribution;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

pub use distribution::{class_distribution, DistributionNode};

use crate::extract::{decode_fragment, DERIVED_FROM};
use crate::fuse::IdentitySet;
use crate::kg::namespace::{RDFS_COMMENT, RDFS_LABEL};
use crate::kg::{EntityKind, Iri, KnowledgeGraph, Namespace, Object};
use crate::matching::{normalize_label, Alignment};

/// Service pages excluded from the most-matched rankings by default.
pub const DEFAULT_BLOCKLIST: [&str; 3] = ["Main Page", "Discussion", "Community Portal"];

#[derive(Clone, Debug, PartialEq)]
pub struct KindStats {
    pub kind: EntityKind,
    pub count: usize,
    pub min: usize,
    pub max: usize,
    pub total: usize,
    pub mean: f64,
    /// Population standard deviation.
    pub std_dev: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ClosureStats {
    pub rows: Vec<KindStats>,
}

impl ClosureStats {
    pub fn get(&self, kind: EntityKind) -> Option<&KindStats> {
        self.rows.iter().find(|r| r.kind == kind)
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::from("kind\tsets\tmin\tmax\tmean\tstddev\n");
        for r in &self.rows {
            let _ =
                writeln!(s, "{}\t{}\t{}\t{}\t{:.4}\t{:.4}", r.kind.name(), r.count, r.min, r.max, r.mean, r.std_dev);
        }
        s
    }
}

/// Size statistics of identity sets per entity kind. Kinds without sets
/// are left out.
pub fn closure_stats(sets: &[IdentitySet]) -> ClosureStats {
    let mut by_kind: BTreeMap<EntityKind, Vec<usize>> = BTreeMap::new();
    for s in sets {
        by_kind.entry(s.kind).or_default().push(s.len());
    }
    for kind in EntityKind::MATCHABLE {
        if !by_kind.contains_key(&kind) {
            log::info!("no identity sets of kind {}", kind.name());
        }
    }
    let rows = by_kind
        .into_iter()
        .map(|(kind, sizes)| {
            let count = sizes.len();
            let total: usize = sizes.iter().sum();
            let mean = total as f64 / count as f64;
            let var = sizes.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / count as f64;
            KindStats {
                kind,
                count,
                min: *sizes.iter().min().unwrap(),
                max: *sizes.iter().max().unwrap(),
                total,
                mean,
                std_dev: var.sqrt(),
            }
        })
        .collect();
    ClosureStats { rows }
}

/// Normalized labels per IRI collected from a set of graphs, falling back
/// to the decoded IRI fragment for IRIs without `rdfs:label`.
#[derive(Clone, Debug, Default)]
pub struct LabelIndex {
    labels: HashMap<Iri, BTreeSet<String>>,
}

impl LabelIndex {
    pub fn new<'a>(kgs: impl IntoIterator<Item = &'a KnowledgeGraph>) -> Self {
        let mut labels: HashMap<Iri, BTreeSet<String>> = HashMap::new();
        for kg in kgs {
            for t in kg.triples() {
                if let (true, Object::Literal(l)) = (t.predicate.as_str() == RDFS_LABEL, &t.object) {
                    labels.entry(t.subject.clone()).or_default().insert(normalize_label(l.lexical()));
                }
            }
        }
        LabelIndex { labels }
    }

    pub fn labels(&self, iri: &Iri) -> BTreeSet<String> {
        match self.labels.get(iri) {
            Some(l) => l.clone(),
            None => BTreeSet::from([normalize_label(&decode_fragment(iri.fragment()))]),
        }
    }

    /// Smallest normalized label.
    pub fn label(&self, iri: &Iri) -> String {
        self.labels(iri).into_iter().next().unwrap_or_default()
    }
}

/// Fraction of correspondences whose two sides share no normalized label.
/// Zero for an empty input.
pub fn same_label_fraction<'a>(alignments: impl IntoIterator<Item = &'a Alignment>, labels: &LabelIndex) -> f64 {
    let (mut total, mut differing) = (0usize, 0usize);
    for al in alignments {
        for c in al {
            total += 1;
            if labels.labels(&c.source).is_disjoint(&labels.labels(&c.target)) {
                differing += 1;
            }
        }
    }
    if total == 0 {
        0.0
    } else {
        differing as f64 / total as f64
    }
}

/// The `k` largest identity sets of `kind` with their most common label.
/// Members labelled like a blocklisted service page are dropped first.
pub fn top_matched(
    sets: &[IdentitySet],
    k: usize,
    kind: EntityKind,
    labels: &LabelIndex,
    blocklist: &[String],
) -> Vec<(String, usize)> {
    let blocked: HashSet<String> = blocklist.iter().map(|b| normalize_label(b)).collect();
    let mut ranked: Vec<(String, usize)> = sets
        .iter()
        .filter(|s| s.kind == kind)
        .filter_map(|s| {
            let mut counts: BTreeMap<String, usize> = BTreeMap::new();
            let mut size = 0;
            for m in &s.members {
                let label = labels.label(m);
                if blocked.contains(&label) {
                    continue;
                }
                size += 1;
                *counts.entry(label).or_default() += 1;
            }
            let (label, _) = counts.into_iter().fold(None, |best: Option<(String, usize)>, (l, n)| match best {
                Some((_, bn)) if bn >= n => best,
                _ => Some((l, n)),
            })?;
            Some((label, size))
        })
        .collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(k);
    ranked
}

pub fn top_matched_to_tsv(rows: &[(String, usize)]) -> String {
    let mut s = String::from("rank\tlabel\tsize\n");
    for (i, (label, size)) in rows.iter().enumerate() {
        let _ = writeln!(s, "{}\t{label}\t{size}", i + 1);
    }
    s
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalRow {
    /// `None` for the row over all kinds.
    pub kind: Option<EntityKind>,
    pub system: usize,
    pub reference: usize,
    pub correct: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl EvalRow {
    fn new(kind: Option<EntityKind>, system: usize, reference: usize, correct: usize) -> Self {
        let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        let (precision, recall) = (ratio(correct, system), ratio(correct, reference));
        let f1 = if precision > 0.0 && recall > 0.0 { 2.0 * precision * recall / (precision + recall) } else { 0.0 };
        EvalRow { kind, system, reference, correct, precision, recall, f1 }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvalResult {
    pub rows: Vec<EvalRow>,
}

impl EvalResult {
    pub fn overall(&self) -> &EvalRow {
        self.rows.iter().find(|r| r.kind.is_none()).expect("overall row")
    }

    pub fn get(&self, kind: EntityKind) -> Option<&EvalRow> {
        self.rows.iter().find(|r| r.kind == Some(kind))
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::from("kind\tsystem\treference\tcorrect\tprecision\trecall\tf1\n");
        for r in &self.rows {
            let kind = r.kind.map_or("all", EntityKind::name);
            let _ = writeln!(
                s,
                "{kind}\t{}\t{}\t{}\t{:.4}\t{:.4}\t{:.4}",
                r.system, r.reference, r.correct, r.precision, r.recall, r.f1
            );
        }
        s
    }
}

/// Precision, recall and F1 per entity kind of the source IRI, plus an
/// overall row. Correspondences are compared as unordered IRI pairs.
pub fn evaluate_alignment(system: &Alignment, reference: &Alignment, ns: &Namespace) -> EvalResult {
    let pairs = |al: &Alignment| -> BTreeMap<(Iri, Iri), EntityKind> {
        al.iter().map(|c| (c.key(), ns.entity_kind(&c.source))).collect()
    };
    let (sys, refs) = (pairs(system), pairs(reference));
    let mut tally: BTreeMap<EntityKind, [usize; 3]> = BTreeMap::new();
    for (pair, kind) in &sys {
        let t = tally.entry(*kind).or_default();
        t[0] += 1;
        if refs.contains_key(pair) {
            t[2] += 1;
        }
    }
    for kind in refs.values() {
        tally.entry(*kind).or_default()[1] += 1;
    }
    let correct = sys.keys().filter(|p| refs.contains_key(*p)).count();
    let mut rows: Vec<EvalRow> = tally.into_iter().map(|(k, [s, r, c])| EvalRow::new(Some(k), s, r, c)).collect();
    rows.push(EvalRow::new(None, sys.len(), refs.len(), correct));
    EvalResult { rows }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct KgProfile {
    pub instances: usize,
    pub classes: usize,
    pub infobox_classes: usize,
    pub properties: usize,
    pub assertions: usize,
}

impl KgProfile {
    pub fn to_tsv(&self) -> String {
        format!(
            "metric\tvalue\ninstances\t{}\nclasses\t{}\ninfoboxClasses\t{}\nproperties\t{}\nassertions\t{}\n",
            self.instances, self.classes, self.infobox_classes, self.properties, self.assertions
        )
    }
}

/// Distinct entities per kind over all IRIs in the graph. Assertions are
/// triples other than labels, comments and provenance statements.
pub fn kg_profile(kg: &KnowledgeGraph, ns: &Namespace) -> KgProfile {
    let mut p = KgProfile::default();
    for iri in kg.iris() {
        match ns.entity_kind(iri) {
            EntityKind::Instance => p.instances += 1,
            EntityKind::Class => p.classes += 1,
            EntityKind::Property => p.properties += 1,
            EntityKind::Other => {}
        }
    }
    let derived_from = ns.meta(DERIVED_FROM);
    p.infobox_classes = kg
        .with_predicate(&derived_from)
        .map(|t| &t.subject)
        .filter(|s| ns.entity_kind(s) == EntityKind::Class)
        .collect::<BTreeSet<_>>()
        .len();
    let meta = ns.meta_prefix();
    p.assertions = kg
        .triples()
        .iter()
        .filter(|t| {
            let pred = t.predicate.as_str();
            pred != RDFS_LABEL
                && pred != RDFS_COMMENT
                && !pred.starts_with(&meta)
                && !t.subject.as_str().starts_with(&meta)
        })
        .count();
    p
}
