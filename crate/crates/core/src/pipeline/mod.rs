//! Stage orchestration over a workspace directory.
//!
//! ```text
//! <workspace>/
//!   kgs/<id>.nt, kgs/<id>.meta        extract
//!   vectors/terms.dict, <id>.vec      featurize
//!   dendrogram.txt, plan.txt          plan
//!   alignments/<out>.tsv, unions/     run
//!   fused.nt, closure.tsv             fuse
//!   reports/                          analyze
//!   manifest.json, log/summary.tsv
//! ```

mod config;
mod manifest;
mod stages;

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

pub use config::{MatcherSetting, PipelineConfig, RawConfig, KEYS};
pub use manifest::{file_sha256, Manifest, StageRecord, MANIFEST_FILE};

use crate::error::{Error, Result};
use crate::kg::Namespace;
use manifest::{hash_outputs, list_outputs, outputs_intact, KeyHasher};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Extract,
    Featurize,
    Plan,
    Run,
    Fuse,
    Analyze,
}

impl Stage {
    pub const ALL: [Stage; 6] =
        [Stage::Extract, Stage::Featurize, Stage::Plan, Stage::Run, Stage::Fuse, Stage::Analyze];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Extract => "extract",
            Stage::Featurize => "featurize",
            Stage::Plan => "plan",
            Stage::Run => "run",
            Stage::Fuse => "fuse",
            Stage::Analyze => "analyze",
        }
    }

    pub fn upstream(self) -> Option<Stage> {
        match self {
            Stage::Extract => None,
            Stage::Featurize => Some(Stage::Extract),
            Stage::Plan => Some(Stage::Featurize),
            Stage::Run => Some(Stage::Plan),
            Stage::Fuse => Some(Stage::Run),
            Stage::Analyze => Some(Stage::Fuse),
        }
    }

    /// Workspace paths this stage owns.
    pub fn outputs(self) -> &'static [&'static str] {
        match self {
            Stage::Extract => &["kgs"],
            Stage::Featurize => &["vectors"],
            Stage::Plan => &["dendrogram.txt", "plan.txt"],
            Stage::Run => &["alignments", "unions"],
            Stage::Fuse => &["fused.nt", "closure.tsv"],
            Stage::Analyze => &["reports"],
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown stage {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StageStatus {
    Ran,
    Skipped,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StageReport {
    pub stage: Stage,
    pub status: StageStatus,
    pub elapsed: Duration,
    pub detail: String,
}

pub struct Pipeline {
    config: PipelineConfig,
    ns: Namespace,
    pool: rayon::ThreadPool,
}

impl Pipeline {
    pub fn new(config: PipelineConfig) -> Result<Self> {
        let ns = Namespace::new(&config.base_iri)?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
        Ok(Pipeline { config, ns, pool })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn workspace(&self) -> &Path {
        &self.config.workspace
    }

    /// Runs the requested stages in pipeline order. A stage whose key and
    /// outputs match the manifest is skipped.
    pub fn run(&self, stages: &[Stage]) -> Result<Vec<StageReport>> {
        let ws = self.workspace();
        fs::create_dir_all(ws.join("log")).map_err(Error::io(ws))?;
        let mut reports = Vec::new();
        for stage in Stage::ALL.into_iter().filter(|s| stages.contains(s)) {
            let start = Instant::now();
            match self.run_stage(stage) {
                Ok((status, detail)) => {
                    let report = StageReport { stage, status, elapsed: start.elapsed(), detail };
                    self.log_summary(&report.stage, status_name(status), report.elapsed, &report.detail)?;
                    reports.push(report);
                }
                Err(e) => {
                    self.log_summary(&stage, "failed", start.elapsed(), &e.to_string())?;
                    return Err(e);
                }
            }
        }
        Ok(reports)
    }

    /// Expected key of `stage` given the current config and inputs. Every
    /// upstream stage must be recorded complete under its own expected key.
    fn stage_key(&self, stage: Stage, manifest: &Manifest) -> Result<String> {
        let mut h = KeyHasher::default();
        h.field("stage", stage.name());
        if let Some(up) = stage.upstream() {
            let expected = self.stage_key(up, manifest)?;
            let record = manifest.stages.get(up.name()).filter(|r| r.complete && outputs_intact(self.workspace(), r));
            let Some(record) = record else {
                return Err(Error::MissingArtifact { path: self.workspace().join(up.outputs()[0]), stage: up.name() });
            };
            if record.key != expected {
                return Err(Error::StaleArtifact(up.name()));
            }
            h.field("upstream", &record.key);
        }
        let c = &self.config;
        match stage {
            Stage::Extract => {
                h.field("baseIri", &c.base_iri).field("abstracts", &c.abstracts.to_string());
                if let Some(f) = &c.synonym_file {
                    h.file("synonymFile", f)?;
                }
                for path in stages::dump_files(&c.dump_dir)? {
                    h.file(&path.file_name().unwrap().to_string_lossy(), &path)?;
                    let meta = path.with_extension("meta");
                    if meta.is_file() {
                        h.file(&meta.file_name().unwrap().to_string_lossy(), &meta)?;
                    }
                }
            }
            Stage::Featurize => {
                if let Some(f) = &c.stopword_file {
                    h.file("stopwordFile", f)?;
                }
            }
            Stage::Plan => {
                h.field("linkage", c.linkage.name());
            }
            Stage::Run => {
                h.field("jaccardThreshold", &c.jaccard_threshold.to_string());
                if let MatcherSetting::External { command } = &c.matcher {
                    h.field("matcherCommand", command);
                }
            }
            Stage::Fuse => {}
            Stage::Analyze => {
                h.field("minShare", &c.min_share.to_string()).field("topK", &c.top_k.to_string());
                h.field("blocklist", &c.blocklist.join("\n"));
                if let Some(f) = &c.reference {
                    h.file("reference", f)?;
                }
            }
        }
        Ok(h.finish())
    }

    fn run_stage(&self, stage: Stage) -> Result<(StageStatus, String)> {
        let ws = self.workspace();
        let mut manifest = Manifest::load(ws)?;
        let key = self.stage_key(stage, &manifest)?;
        let previous = manifest.stages.get(stage.name()).cloned();
        if let Some(rec) = &previous {
            if rec.complete && rec.key == key && outputs_intact(ws, rec) {
                log::info!("{stage}: up to date, skipping");
                return Ok((StageStatus::Skipped, String::new()));
            }
        }
        let resumable = previous.as_ref().is_some_and(|r| !r.complete && r.key == key);
        if !resumable {
            for p in stage.outputs() {
                let path = ws.join(p);
                if path.is_dir() {
                    fs::remove_dir_all(&path).map_err(Error::io(&path))?;
                } else if path.is_file() {
                    fs::remove_file(&path).map_err(Error::io(&path))?;
                }
            }
        }
        manifest.stages.insert(
            stage.name().into(),
            StageRecord { key: key.clone(), complete: false, outputs: Default::default() },
        );
        manifest.save(ws)?;
        log::info!("{stage}: running");
        let detail = self.pool.install(|| match stage {
            Stage::Extract => stages::extract(self),
            Stage::Featurize => stages::featurize(self),
            Stage::Plan => stages::plan(self),
            Stage::Run => stages::run(self),
            Stage::Fuse => stages::fuse(self),
            Stage::Analyze => stages::analyze(self),
        })?;
        let files = list_outputs(ws, stage.outputs())?;
        let outputs = hash_outputs(ws, &files)?;
        manifest.stages.insert(stage.name().into(), StageRecord { key, complete: true, outputs });
        manifest.save(ws)?;
        Ok((StageStatus::Ran, detail))
    }

    fn log_summary(&self, stage: &Stage, status: &str, elapsed: Duration, detail: &str) -> Result<()> {
        let path = self.workspace().join("log").join("summary.tsv");
        let fresh = !path.exists();
        let mut f = fs::OpenOptions::new().create(true).append(true).open(&path).map_err(Error::io(&path))?;
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        let detail = detail.replace(['\t', '\n'], " ");
        let mut line = String::new();
        if fresh {
            line.push_str("timestamp\tstage\tstatus\tseconds\tdetail\n");
        }
        line.push_str(&format!("{now}\t{stage}\t{status}\t{:.3}\t{detail}\n", elapsed.as_secs_f64()));
        f.write_all(line.as_bytes()).map_err(Error::io(&path))
    }
}

fn status_name(s: StageStatus) -> &'static str {
    match s {
        StageStatus::Ran => "ran",
        StageStatus::Skipped => "skipped",
    }
}

/// Convenience wrapper: build a [`Pipeline`] and run `stages`.
pub fn run_pipeline(config: PipelineConfig, stages: &[Stage]) -> Result<Vec<StageReport>> {
    Pipeline::new(config)?.run(stages)
}

/// Path of a report file inside the workspace.
pub fn report_path(workspace: &Path, name: &str) -> PathBuf {
    workspace.join("reports").join(name)
}
