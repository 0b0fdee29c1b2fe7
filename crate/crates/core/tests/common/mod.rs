//! Independent oracles and fixture helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fs;
use std::path::{Path, PathBuf};

use kgforge::hac::CondensedMatrix;
use kgforge::kg::namespace::{rdf_type, rdfs_label};
use kgforge::kg::{write_ntriples, KnowledgeGraph, Literal, Namespace, Triple};
use kgforge::matching::{Alignment, Correspondence};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

/// Set `KGFORGE_BLESS=1` to rewrite goldens instead of comparing.
pub fn blessing() -> bool {
    std::env::var_os("KGFORGE_BLESS").is_some_and(|v| v == "1")
}

/// Compares `actual` with the golden file, or rewrites it when blessing.
pub fn check_golden(actual: &Path, golden: &Path) -> Result<(), String> {
    let got = fs::read(actual).map_err(|e| format!("{}: {e}", actual.display()))?;
    if blessing() {
        fs::create_dir_all(golden.parent().unwrap()).unwrap();
        fs::write(golden, &got).unwrap();
        return Ok(());
    }
    let want = fs::read(golden).map_err(|e| format!("{}: {e}", golden.display()))?;
    if got == want {
        Ok(())
    } else {
        Err(format!("{} differs from golden {}", actual.display(), golden.display()))
    }
}

/// Symmetric matrix with distinct entries: a random permutation of k/p.
pub fn distinct_matrix(rng: &mut impl Rng, n: usize) -> CondensedMatrix {
    let p = n * (n - 1) / 2;
    let mut values: Vec<f64> = (1..=p).map(|k| k as f64 / p as f64).collect();
    values.shuffle(rng);
    let mut m = CondensedMatrix::filled(n, 0.0).unwrap();
    for (k, v) in values.into_iter().enumerate() {
        m.set_index(k, v);
    }
    m
}

/// Textbook O(n^3) agglomerative clustering: recompute every inter-cluster
/// distance from the leaf distances at every step.
/// Returns `(left, right, distance, id)` with `left < right`, ids `n + k`.
pub fn naive_hac(m: &CondensedMatrix, complete: bool) -> Vec<(usize, usize, f64, usize)> {
    let n = m.n();
    let mut clusters: Vec<(usize, Vec<usize>)> = (0..n).map(|i| (i, vec![i])).collect();
    let mut out = Vec::new();
    while clusters.len() > 1 {
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let mut d = if complete { f64::NEG_INFINITY } else { f64::INFINITY };
                for &i in &clusters[a].1 {
                    for &j in &clusters[b].1 {
                        let x = m.get(i, j);
                        d = if complete { d.max(x) } else { d.min(x) };
                    }
                }
                let key = (clusters[a].0.min(clusters[b].0), clusters[a].0.max(clusters[b].0));
                let better = match best {
                    None => true,
                    Some((bd, ba, bb)) => {
                        let bkey = (clusters[ba].0.min(clusters[bb].0), clusters[ba].0.max(clusters[bb].0));
                        d < bd || (d == bd && key < bkey)
                    }
                };
                if better {
                    best = Some((d, a, b));
                }
            }
        }
        let (d, a, b) = best.unwrap();
        let id = n + out.len();
        let (ia, ib) = (clusters[a].0, clusters[b].0);
        out.push((ia.min(ib), ia.max(ib), d, id));
        let mut members = clusters[a].1.clone();
        members.extend(&clusters[b].1);
        clusters.remove(b);
        clusters.remove(a);
        clusters.push((id, members));
    }
    out
}

/// Connected components by breadth-first search, singletons dropped.
pub fn bfs_components(edges: &[(String, String)]) -> BTreeSet<BTreeSet<String>> {
    let mut adj: HashMap<&str, Vec<&str>> = HashMap::new();
    for (a, b) in edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let mut seen: HashSet<&str> = HashSet::new();
    let mut out = BTreeSet::new();
    let mut nodes: Vec<&str> = adj.keys().copied().collect();
    nodes.sort();
    for start in nodes {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            comp.insert(x.to_string());
            for &y in &adj[x] {
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        if comp.len() > 1 {
            out.insert(comp);
        }
    }
    out
}

/// Greedy trace written from the extraction rule directly: repeatedly pick
/// the best remaining correspondence and delete everything sharing an end.
pub fn greedy_trace(al: &Alignment) -> BTreeSet<(String, String, u64)> {
    let mut pool: Vec<&Correspondence> = al.iter().collect();
    let mut kept = BTreeSet::new();
    while !pool.is_empty() {
        let mut best = 0;
        for (i, c) in pool.iter().enumerate() {
            let b = pool[best];
            let better = c.confidence > b.confidence
                || (c.confidence == b.confidence
                    && (c.source.as_str(), c.target.as_str()) < (b.source.as_str(), b.target.as_str()));
            if better {
                best = i;
            }
        }
        let pick = pool[best];
        kept.insert((pick.source.to_string(), pick.target.to_string(), pick.confidence.to_bits()));
        pool.retain(|c| c.source != pick.source && c.target != pick.target);
    }
    kept
}

pub fn as_set(al: &Alignment) -> BTreeSet<(String, String, u64)> {
    al.iter().map(|c| (c.source.to_string(), c.target.to_string(), c.confidence.to_bits())).collect()
}

const TOPICS: [(&str, &[&str]); 4] = [
    ("Ship", &["anchor", "harbor", "sail", "mast", "captain", "voyage", "storm", "reef", "tide", "compass"]),
    ("Castle", &["tower", "knight", "siege", "banner", "throne", "moat", "lord", "keep", "archer", "gate"]),
    ("Planet", &["orbit", "comet", "nebula", "moon", "rocket", "crater", "galaxy", "probe", "star", "dust"]),
    ("Dragon", &["scale", "flame", "hoard", "wing", "cave", "egg", "rider", "claw", "ember", "roar"]),
];

const NAMES: [&str; 12] =
    ["Aria", "Bram", "Cato", "Dina", "Elio", "Fenn", "Gala", "Hugo", "Iris", "Juno", "Kael", "Lira"];

/// Synthetic wiki graphs with overlapping entities. Each wiki belongs to
/// one of four topics and draws entities, properties and literal text from
/// that topic, so related wikis cluster and share entities.
pub fn synthetic_wikis(count: usize, rng: &mut impl Rng) -> Vec<KnowledgeGraph> {
    let ns = Namespace::default();
    (0..count)
        .map(|w| {
            let id = format!("wiki{w:02}");
            let (class, words) = TOPICS[w % TOPICS.len()];
            let mut triples = Vec::new();
            let class_iri = ns.class(&id, class).unwrap();
            triples.push(Triple::new(class_iri.clone(), ns.meta("derivedFrom"), Literal::plain("infobox")));
            let entities = rng.gen_range(6..14);
            for _ in 0..entities {
                let name = format!("{} {}", NAMES[rng.gen_range(0..NAMES.len())], words[rng.gen_range(0..words.len())]);
                let frag = name.replace(' ', "_");
                let s = ns.resource(&id, &frag).unwrap();
                triples.push(Triple::new(s.clone(), rdfs_label(), Literal::plain(name)));
                triples.push(Triple::new(s.clone(), rdf_type(), class_iri.clone()));
                for _ in 0..rng.gen_range(1..4) {
                    let prop = ns.property(&id, words[rng.gen_range(0..words.len())]).unwrap();
                    let text: Vec<&str> =
                        (0..rng.gen_range(1..5)).map(|_| words[rng.gen_range(0..words.len())]).collect();
                    triples.push(Triple::new(s.clone(), prop, Literal::plain(text.join(" "))));
                }
            }
            KnowledgeGraph::new(id, triples)
        })
        .collect()
}

/// Writes `kgs/<id>.nt` for every graph.
pub fn write_leaves(ws: &Path, kgs: &[KnowledgeGraph]) {
    fs::create_dir_all(ws.join("kgs")).unwrap();
    for g in kgs {
        let mut f = fs::File::create(ws.join("kgs").join(format!("{}.nt", g.id()))).unwrap();
        write_ntriples(g, &mut f).unwrap();
    }
}

/// Every regular file under `dir`, relative path to contents.
pub fn read_tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(dir).unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap());
            }
        }
    }
    out
}

/// Parses a `key<TAB>value` report with a header line.
pub fn read_tsv_map(path: &Path) -> BTreeMap<String, String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .filter_map(|l| l.split_once('\t').map(|(k, v)| (k.to_string(), v.to_string())))
        .collect()
}

/// Artifacts of the fixture pipeline that are compared against goldens.
pub const GOLDEN_FILES: [&str; 11] = [
    "fused.nt",
    "closure.tsv",
    "reports/closure_stats.tsv",
    "reports/top_matched_instance.tsv",
    "reports/top_matched_class.tsv",
    "reports/top_matched_property.tsv",
    "reports/same_label.tsv",
    "reports/eval.tsv",
    "reports/profile.tsv",
    "reports/class_distribution.json",
    "reports/report.txt",
];

pub fn fixture_config(workspace: &Path, workers: usize) -> kgforge::pipeline::PipelineConfig {
    use kgforge::pipeline::{PipelineConfig, RawConfig};
    let mut raw = RawConfig::load(&fixtures().join("pipeline.conf")).unwrap();
    raw.set("workspace", workspace.to_string_lossy()).unwrap();
    raw.set("workers", workers.to_string()).unwrap();
    PipelineConfig::from_raw(&raw).unwrap()
}

/// Runs every stage over the four fixture dumps.
pub fn run_fixture_pipeline(workspace: &Path, workers: usize) -> kgforge::Result<Vec<kgforge::pipeline::StageReport>> {
    use kgforge::pipeline::{run_pipeline, Stage};
    run_pipeline(fixture_config(workspace, workers), &Stage::ALL)
}

/// Compares all golden artifacts of a finished fixture workspace.
pub fn check_fixture_goldens(workspace: &Path) -> Result<(), String> {
    let golden = fixtures().join("golden");
    let mut errors = Vec::new();
    for name in GOLDEN_FILES {
        if let Err(e) = check_golden(&workspace.join(name), &golden.join(name)) {
            errors.push(e);
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors.join("; "))
    }
}

/// tf-idf vectors of the graphs' documents with the default tokenizer.
pub fn graph_vectors(kgs: &[KnowledgeGraph]) -> Vec<kgforge::featurize::SparseVector> {
    use kgforge::featurize::{default_tokenizer, kg_document, tfidf_vectors};
    let docs: Vec<_> = kgs.iter().map(|g| kg_document(g, default_tokenizer())).collect();
    tfidf_vectors(&docs).unwrap().vectors
}

/// Complete-linkage merge plan over the graphs, as the pipeline builds it.
pub fn plan_for(kgs: &[KnowledgeGraph]) -> kgforge::hac::MergePlan {
    use kgforge::hac::{distance_matrix, hac, plan_from_dendrogram, Linkage};
    let m = distance_matrix(&graph_vectors(kgs)).unwrap();
    let d = hac(&m, Linkage::Complete).unwrap();
    plan_from_dendrogram(&d, kgs.iter().map(|g| g.id().to_string()).collect()).unwrap()
}

pub fn instance(wiki: &str, frag: &str) -> kgforge::kg::Iri {
    Namespace::default().resource(wiki, frag).unwrap()
}

/// Identity set of instances `<wiki_i>/resource/<frag_i>`.
pub fn instance_set(members: &[(&str, &str)]) -> kgforge::fuse::IdentitySet {
    let mut members: Vec<_> = members.iter().map(|(w, f)| instance(w, f)).collect();
    members.sort();
    kgforge::fuse::IdentitySet { members, kind: kgforge::kg::EntityKind::Instance }
}

/// Three system pairs of which two are among four reference pairs.
pub fn eval_toy() -> (Alignment, Alignment) {
    let c = |a: &str, b: &str| Correspondence::new(instance("x", a), instance("y", b), 1.0);
    let system = Alignment::new(vec![c("A", "A"), c("B", "B"), c("C", "Z")]);
    let reference = Alignment::new(vec![c("A", "A"), c("B", "B"), c("C", "C"), c("D", "D")]);
    (system, reference)
}

/// Two correspondences; only the first shares a label.
pub fn label_toy() -> (Vec<KnowledgeGraph>, Alignment) {
    let x = KnowledgeGraph::new(
        "x",
        [
            Triple::new(instance("x", "NYC"), rdfs_label(), Literal::plain("New York")),
            Triple::new(instance("x", "Albany"), rdfs_label(), Literal::plain("Albany")),
        ],
    );
    let y =
        KnowledgeGraph::new("y", [Triple::new(instance("y", "Big_Apple"), rdfs_label(), Literal::plain("new_york"))]);
    let al = Alignment::new(vec![
        Correspondence::new(instance("x", "NYC"), instance("y", "Big_Apple"), 1.0),
        // no label triple for Troy: its fragment is used
        Correspondence::new(instance("x", "Albany"), instance("y", "Troy"), 0.9),
    ]);
    (vec![x, y], al)
}
