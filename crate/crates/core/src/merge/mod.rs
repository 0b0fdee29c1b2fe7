//! Pairwise graph union under an alignment and level-parallel execution of
//! a merge plan over a workspace directory.

use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fsutil::{read_graph, write_graph, write_string_atomic};
use crate::hac::{MergePlan, MergeTask};
use crate::kg::{Iri, KnowledgeGraph, Object, Triple};
use crate::matching::{extract_one_to_one, match_pair, Alignment, Matcher};

pub const KGS_DIR: &str = "kgs";
pub const UNIONS_DIR: &str = "unions";
pub const ALIGNMENTS_DIR: &str = "alignments";

/// Union of `a` and `b` where every matched `b` IRI is replaced by its `a`
/// counterpart. Correspondences run from `a` (source) to `b` (target).
pub fn merge_pair(a: &KnowledgeGraph, b: &KnowledgeGraph, al: &Alignment) -> KnowledgeGraph {
    let known: BTreeSet<&Iri> = a.iris().into_iter().chain(b.iris()).collect();
    let mut rewrite: HashMap<&Iri, &Iri> = HashMap::new();
    for c in al {
        if !known.contains(&c.source) || !known.contains(&c.target) {
            log::warn!("skipping correspondence {} = {}: IRI not in either graph", c.source, c.target);
            continue;
        }
        rewrite.insert(&c.target, &c.source);
    }
    let map = |iri: &Iri| rewrite.get(iri).map_or_else(|| iri.clone(), |&s| s.clone());
    let rewritten = b.triples().iter().map(|t| {
        let object = match &t.object {
            Object::Iri(o) => Object::Iri(map(o)),
            lit => lit.clone(),
        };
        Triple::new(map(&t.subject), map(&t.predicate), object)
    });
    let triples: Vec<Triple> = a.triples().iter().cloned().chain(rewritten).collect();
    KnowledgeGraph::new(format!("{}+{}", a.id(), b.id()), triples)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MergeTaskResult {
    pub output_id: String,
    pub alignment_path: PathBuf,
    pub union_path: PathBuf,
    pub elapsed: Duration,
    /// True when the artifacts already existed and nothing was recomputed.
    pub resumed: bool,
}

#[derive(Debug)]
pub struct ExecuteOutcome {
    pub root: KnowledgeGraph,
    pub tasks: Vec<MergeTaskResult>,
}

pub fn leaf_path(workspace: &Path, wiki: &str) -> PathBuf {
    workspace.join(KGS_DIR).join(format!("{wiki}.nt"))
}

pub fn union_path(workspace: &Path, output_id: &str) -> PathBuf {
    workspace.join(UNIONS_DIR).join(format!("{output_id}.nt"))
}

pub fn alignment_path(workspace: &Path, output_id: &str) -> PathBuf {
    workspace.join(ALIGNMENTS_DIR).join(format!("{output_id}.tsv"))
}

fn node_path(plan: &MergePlan, workspace: &Path, id: usize) -> PathBuf {
    if id < plan.leaves().len() {
        leaf_path(workspace, &plan.leaves()[id])
    } else {
        union_path(workspace, &plan.node_name(id))
    }
}

fn load_node(plan: &MergePlan, workspace: &Path, id: usize) -> Result<KnowledgeGraph> {
    read_graph(&node_path(plan, workspace, id), &plan.node_name(id))
}

/// Runs every task of `plan` level by level on `workers` threads. Leaves are
/// read from `kgs/<id>.nt`; each task writes `alignments/<out>.tsv` and
/// `unions/<out>.nt`. Tasks whose artifacts already exist are not recomputed.
pub fn execute_plan(plan: &MergePlan, workspace: &Path, matcher: &Matcher, workers: usize) -> Result<ExecuteOutcome> {
    for (i, leaf) in plan.leaves().iter().enumerate() {
        let path = node_path(plan, workspace, i);
        if !path.is_file() {
            return Err(Error::MissingArtifact { path, stage: "extract" });
        }
        log::trace!("leaf {i}: {leaf}");
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
    let mut results = Vec::with_capacity(plan.leaves().len().saturating_sub(1));
    for (level, tasks) in plan.levels().iter().enumerate() {
        log::info!("merge level {level}: {} task(s)", tasks.len());
        let outcomes: Vec<Result<MergeTaskResult>> =
            pool.install(|| tasks.par_iter().map(|t| run_task(plan, workspace, matcher, t)).collect());
        for r in outcomes {
            results.push(r?);
        }
    }
    let root = load_node(plan, workspace, plan.root())?;
    Ok(ExecuteOutcome { root, tasks: results })
}

fn run_task(plan: &MergePlan, workspace: &Path, matcher: &Matcher, task: &MergeTask) -> Result<MergeTaskResult> {
    let output_id = plan.node_name(task.output);
    let wrap = |e: Error| Error::Task { task: output_id.clone(), source: Box::new(e) };
    let start = Instant::now();
    let alignment_path = alignment_path(workspace, &output_id);
    let union_path = union_path(workspace, &output_id);
    if alignment_path.is_file() && union_path.is_file() {
        log::debug!("task {output_id}: artifacts present, skipping");
        return Ok(MergeTaskResult { output_id, alignment_path, union_path, elapsed: start.elapsed(), resumed: true });
    }
    let left = load_node(plan, workspace, task.left).map_err(wrap)?;
    let right = load_node(plan, workspace, task.right).map_err(wrap)?;
    let left_first = left.len() > right.len() || (left.len() == right.len() && left.id() <= right.id());
    let (a, b, a_id, b_id) =
        if left_first { (&left, &right, task.left, task.right) } else { (&right, &left, task.right, task.left) };
    let raw = match matcher {
        Matcher::Builtin(cfg) => match_pair(a, b, cfg),
        Matcher::External(ext) => {
            let out = workspace.join(ALIGNMENTS_DIR).join(format!(".{output_id}.raw.tsv"));
            std::fs::create_dir_all(workspace.join(ALIGNMENTS_DIR)).map_err(Error::io(workspace)).map_err(wrap)?;
            let al = ext.run(&node_path(plan, workspace, a_id), &node_path(plan, workspace, b_id), &out);
            let _ = std::fs::remove_file(&out);
            al.map_err(wrap)?
        }
    };
    let al = extract_one_to_one(&raw);
    let union = merge_pair(a, b, &al);
    write_string_atomic(&alignment_path, &al.to_tsv()).map_err(wrap)?;
    write_graph(&union_path, &union).map_err(wrap)?;
    log::info!("task {output_id}: {} + {} -> {} triples, {} correspondences", a.id(), b.id(), union.len(), al.len());
    Ok(MergeTaskResult { output_id, alignment_path, union_path, elapsed: start.elapsed(), resumed: false })
}
