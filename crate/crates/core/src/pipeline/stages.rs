use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;

use super::{report_path, MatcherSetting, Pipeline};
use crate::analyze::{
    class_distribution, closure_stats, evaluate_alignment, kg_profile, same_label_fraction, top_matched,
    top_matched_to_tsv, LabelIndex,
};
use crate::error::{Error, Result};
use crate::extract::{extract_wiki, load_wiki_metadata, ExtractConfig, SynonymMap, WikiDump, WikiMetadata};
use crate::featurize::cache::{parse_vector, vector_to_string, vocabulary_to_string};
use crate::featurize::{default_tokenizer, kg_document, tfidf_vectors, Tokenizer};
use crate::fsutil::{read_graph, write_graph, write_string_atomic};
use crate::fuse::{canonical_uris, closure_to_tsv, fuse_kgs, transitive_closure};
use crate::hac::{distance_matrix, hac, plan_from_dendrogram, MergePlan};
use crate::kg::namespace::check_wiki_id;
use crate::kg::{EntityKind, KnowledgeGraph};
use crate::matching::{Alignment, ExternalMatcher, Matcher, MatcherConfig, ProcessLimit};
use crate::merge::{alignment_path, execute_plan, leaf_path, KGS_DIR};

const PLAN_FILE: &str = "plan.txt";
const DENDROGRAM_FILE: &str = "dendrogram.txt";
const FUSED_FILE: &str = "fused.nt";
const CLOSURE_FILE: &str = "closure.tsv";

/// `*.xml` dumps in `dir`, sorted by file name.
pub(super) fn dump_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(Error::io(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "xml"))
        .collect();
    files.sort();
    Ok(files)
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Wiki ids with an extracted graph, sorted.
fn wiki_ids(ws: &Path) -> Result<Vec<String>> {
    let dir = ws.join(KGS_DIR);
    if !dir.is_dir() {
        return Err(Error::MissingArtifact { path: dir, stage: "extract" });
    }
    let mut ids: Vec<String> = fs::read_dir(&dir)
        .map_err(Error::io(&dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "nt"))
        .map(|p| stem(&p))
        .collect();
    ids.sort();
    Ok(ids)
}

fn tokenizer(p: &Pipeline) -> Result<Tokenizer> {
    match &p.config.stopword_file {
        Some(f) => Tokenizer::from_stopword_file(f),
        None => Ok(default_tokenizer().clone()),
    }
}

fn required(path: PathBuf, stage: &'static str) -> Result<PathBuf> {
    if path.is_file() {
        Ok(path)
    } else {
        Err(Error::MissingArtifact { path, stage })
    }
}

fn load_plan(ws: &Path) -> Result<MergePlan> {
    let path = required(ws.join(PLAN_FILE), "plan")?;
    MergePlan::parse(&fs::read_to_string(&path).map_err(Error::io(&path))?)
}

fn load_leaves(ws: &Path, plan: &MergePlan) -> Result<Vec<KnowledgeGraph>> {
    plan.leaves().par_iter().map(|id| read_graph(&required(leaf_path(ws, id), "extract")?, id)).collect()
}

fn load_alignments(ws: &Path, plan: &MergePlan) -> Result<Vec<Alignment>> {
    plan.tasks().map(|t| Alignment::read(&required(alignment_path(ws, &plan.node_name(t.output)), "run")?)).collect()
}

pub(super) fn extract(p: &Pipeline) -> Result<String> {
    let ws = p.workspace();
    let dumps = dump_files(&p.config.dump_dir)?;
    if dumps.is_empty() {
        return Err(Error::InvalidInput(format!("no *.xml dumps in {}", p.config.dump_dir.display())));
    }
    let cfg = ExtractConfig {
        namespace: p.ns.clone(),
        synonyms: match &p.config.synonym_file {
            Some(f) => SynonymMap::load(f)?,
            None => SynonymMap::default(),
        },
        abstracts: p.config.abstracts,
    };
    let mut warnings = String::from("wiki\tpage\tmessage\n");
    let mut triples = 0;
    for path in &dumps {
        let id = stem(path);
        check_wiki_id(&id)?;
        let dump = WikiDump::open(&id, path)?;
        let extraction = extract_wiki(&dump, &cfg)?;
        for w in &extraction.warnings {
            log::warn!("{id}: {}: {}", w.page, w.message);
            let _ = writeln!(warnings, "{id}\t{}\t{}", w.page, w.message.replace(['\t', '\n'], " "));
        }
        triples += extraction.graph.len();
        write_graph(&leaf_path(ws, &id), &extraction.graph)?;
        let meta = path.with_extension("meta");
        if meta.is_file() {
            load_wiki_metadata(&meta)?;
            let target = ws.join(KGS_DIR).join(format!("{id}.meta"));
            write_string_atomic(&target, &fs::read_to_string(&meta).map_err(Error::io(&meta))?)?;
        } else {
            log::warn!("{id}: no metadata file {}", meta.display());
        }
        log::info!("extract {id}: {} pages, {} triples", dump.pages.len(), extraction.graph.len());
    }
    write_string_atomic(&ws.join("log").join("extract_warnings.tsv"), &warnings)?;
    Ok(format!("{} wikis, {triples} triples", dumps.len()))
}

pub(super) fn featurize(p: &Pipeline) -> Result<String> {
    let ws = p.workspace();
    let ids = wiki_ids(ws)?;
    let tok = tokenizer(p)?;
    let docs = ids
        .par_iter()
        .map(|id| Ok(kg_document(&read_graph(&leaf_path(ws, id), id)?, &tok)))
        .collect::<Result<Vec<_>>>()?;
    let tfidf = tfidf_vectors(&docs)?;
    let dir = ws.join("vectors");
    write_string_atomic(&dir.join("terms.dict"), &vocabulary_to_string(&tfidf.vocabulary))?;
    for (id, v) in ids.iter().zip(&tfidf.vectors) {
        write_string_atomic(&dir.join(format!("{id}.vec")), &vector_to_string(v))?;
    }
    Ok(format!("{} documents, {} terms", ids.len(), tfidf.vocabulary.len()))
}

pub(super) fn plan(p: &Pipeline) -> Result<String> {
    let ws = p.workspace();
    let ids = wiki_ids(ws)?;
    let vectors = ids
        .iter()
        .map(|id| {
            let path = required(ws.join("vectors").join(format!("{id}.vec")), "featurize")?;
            parse_vector(&fs::read_to_string(&path).map_err(Error::io(&path))?)
        })
        .collect::<Result<Vec<_>>>()?;
    let (dendrogram_text, plan) = if ids.len() < 2 {
        (String::new(), MergePlan::new(ids, Vec::new())?)
    } else {
        let matrix = distance_matrix(&vectors)?;
        let dendrogram = hac(&matrix, p.config.linkage)?;
        (dendrogram.to_text(), plan_from_dendrogram(&dendrogram, ids)?)
    };
    write_string_atomic(&ws.join(DENDROGRAM_FILE), &dendrogram_text)?;
    write_string_atomic(&ws.join(PLAN_FILE), &plan.to_text())?;
    let stats = plan.stats();
    Ok(format!("{} linkage, height {}, tasks per level {:?}", p.config.linkage, stats.height, stats.tasks_per_level))
}

pub(super) fn run(p: &Pipeline) -> Result<String> {
    let ws = p.workspace();
    let plan = load_plan(ws)?;
    let tokenizer = Arc::new(tokenizer(p)?);
    let matcher = match &p.config.matcher {
        MatcherSetting::Builtin => Matcher::Builtin(MatcherConfig {
            jaccard_threshold: p.config.jaccard_threshold,
            namespace: p.ns.clone(),
            tokenizer,
            ..MatcherConfig::default()
        }),
        MatcherSetting::External { command } => Matcher::External(
            ExternalMatcher::new(command.clone())?
                .with_timeout(p.config.matcher_timeout)
                .with_limit(ProcessLimit::new(p.config.max_matchers)),
        ),
    };
    let outcome = execute_plan(&plan, ws, &matcher, p.config.workers)?;
    let resumed = outcome.tasks.iter().filter(|t| t.resumed).count();
    Ok(format!("{} tasks ({resumed} resumed), root {} triples", outcome.tasks.len(), outcome.root.len()))
}

pub(super) fn fuse(p: &Pipeline) -> Result<String> {
    let ws = p.workspace();
    let plan = load_plan(ws)?;
    let leaves = load_leaves(ws, &plan)?;
    let alignments = load_alignments(ws, &plan)?;
    let metadata = plan
        .leaves()
        .iter()
        .map(|id| ws.join(KGS_DIR).join(format!("{id}.meta")))
        .filter(|m| m.is_file())
        .map(|m| load_wiki_metadata(&m))
        .collect::<Result<Vec<WikiMetadata>>>()?;
    let sets = transitive_closure(&alignments, &p.ns);
    let all_iris: Vec<_> = leaves.iter().flat_map(|g| g.iris()).collect();
    let canon = canonical_uris(&sets, all_iris.iter().copied(), &p.ns);
    let fused = fuse_kgs(&leaves, &canon, &metadata, &p.ns);
    write_graph(&ws.join(FUSED_FILE), &fused)?;
    write_string_atomic(&ws.join(CLOSURE_FILE), &closure_to_tsv(&sets, &canon))?;
    Ok(format!("{} identity sets, {} fused triples", sets.len(), fused.len()))
}

pub(super) fn analyze(p: &Pipeline) -> Result<String> {
    let ws = p.workspace();
    let plan = load_plan(ws)?;
    let fused = read_graph(&required(ws.join(FUSED_FILE), "fuse")?, "fused")?;
    let leaves = load_leaves(ws, &plan)?;
    let alignments = load_alignments(ws, &plan)?;
    let sets = transitive_closure(&alignments, &p.ns);
    let labels = LabelIndex::new(&leaves);
    let ns = &p.ns;
    let mut report = String::from("Knowledge graph report\n======================\n\n");

    let stats = closure_stats(&sets);
    write_string_atomic(&report_path(ws, "closure_stats.tsv"), &stats.to_tsv())?;
    let _ = writeln!(report, "Identity sets\n-------------");
    for r in &stats.rows {
        let _ = writeln!(
            report,
            "{:<9} {:>7} sets  size min {} max {} mean {:.2} sd {:.2}",
            r.kind.name(),
            r.count,
            r.min,
            r.max,
            r.mean,
            r.std_dev
        );
    }

    let _ = writeln!(report, "\nMost matched\n------------");
    for kind in EntityKind::MATCHABLE {
        let rows = top_matched(&sets, p.config.top_k, kind, &labels, &p.config.blocklist);
        write_string_atomic(&report_path(ws, &format!("top_matched_{}.tsv", kind.name())), &top_matched_to_tsv(&rows))?;
        let list: Vec<String> = rows.iter().map(|(l, n)| format!("{l} ({n})")).collect();
        let _ = writeln!(report, "{:<9} {}", kind.name(), list.join(", "));
    }

    let total: usize = alignments.iter().map(Alignment::len).sum();
    let fraction = same_label_fraction(&alignments, &labels);
    write_string_atomic(
        &report_path(ws, "same_label.tsv"),
        &format!("metric\tvalue\ncorrespondences\t{total}\nnoSharedLabelFraction\t{fraction:.6}\n"),
    )?;
    let _ = writeln!(report, "\nCorrespondences: {total}, without a shared label: {:.2}%", 100.0 * fraction);

    if let Some(reference) = &p.config.reference {
        let reference = Alignment::read(reference)?;
        let system: Alignment = alignments.iter().flatten().cloned().collect();
        let eval = evaluate_alignment(&system, &reference, ns);
        write_string_atomic(&report_path(ws, "eval.tsv"), &eval.to_tsv())?;
        let o = eval.overall();
        let _ = writeln!(report, "Against reference: P {:.4} R {:.4} F1 {:.4}", o.precision, o.recall, o.f1);
    }

    let profile = kg_profile(&fused, ns);
    write_string_atomic(&report_path(ws, "profile.tsv"), &profile.to_tsv())?;
    let _ = writeln!(
        report,
        "\nFused graph\n-----------\ninstances {}\nclasses {} ({} from infoboxes)\nproperties {}\nassertions {}",
        profile.instances, profile.classes, profile.infobox_classes, profile.properties, profile.assertions
    );

    let dist = class_distribution(&fused, p.config.min_share, ns)?;
    write_string_atomic(&report_path(ws, "class_distribution.json"), &dist.to_json()?)?;
    let _ = writeln!(report, "\nInstances per class (min share {})", p.config.min_share);
    for c in &dist.children {
        let _ = writeln!(report, "  {:<30} {:>7} {:>6.2}%", c.name, c.value, 100.0 * c.share);
    }
    write_string_atomic(&report_path(ws, "report.txt"), &report)?;
    Ok(format!("{} identity sets, {total} correspondences", sets.len()))
}
