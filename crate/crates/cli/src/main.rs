use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use kgforge::hac::Linkage;
use kgforge::pipeline::{run_pipeline, PipelineConfig, RawConfig, Stage, StageStatus};

/// Build a fused knowledge graph from a directory of MediaWiki dumps.
#[derive(Debug, Parser)]
#[command(name = "kgforge", version)]
struct Cli {
    /// key=value config file; relative paths inside it resolve against its directory
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `workspace` from the config
    #[arg(long, global = true)]
    workspace: Option<PathBuf>,
    /// Worker threads (default: available cores)
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum)]
    matcher: Option<MatcherArg>,
    #[arg(long, global = true, value_enum)]
    linkage: Option<LinkageArg>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse dumps into per-wiki N-Triples graphs
    Extract,
    /// Compute tf-idf vectors per graph
    Featurize,
    /// Cluster the graphs and write the merge plan
    Plan,
    /// Match and merge along the plan
    Run,
    /// Close alignments transitively and write the fused graph
    Fuse,
    /// Write reports
    Analyze,
    /// Every stage in order
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MatcherArg {
    Builtin,
    External,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LinkageArg {
    Single,
    Complete,
}

impl Command {
    fn stages(&self) -> Vec<Stage> {
        match self {
            Command::Extract => vec![Stage::Extract],
            Command::Featurize => vec![Stage::Featurize],
            Command::Plan => vec![Stage::Plan],
            Command::Run => vec![Stage::Run],
            Command::Fuse => vec![Stage::Fuse],
            Command::Analyze => vec![Stage::Analyze],
            Command::All => Stage::ALL.to_vec(),
        }
    }
}

fn absolute(path: &Path) -> Result<String> {
    let path = if path.is_absolute() { path.to_path_buf() } else { std::env::current_dir()?.join(path) };
    Ok(path.to_string_lossy().into_owned())
}

fn load_config(cli: &Cli) -> Result<PipelineConfig> {
    let mut raw = match &cli.config {
        Some(path) => RawConfig::load(path).with_context(|| format!("loading {}", path.display()))?,
        None => RawConfig::default(),
    };
    if let Some(ws) = &cli.workspace {
        raw.set("workspace", absolute(ws)?)?;
    }
    if let Some(w) = cli.workers {
        raw.set("workers", w.to_string())?;
    }
    if let Some(m) = cli.matcher {
        raw.set("matcher", if matches!(m, MatcherArg::Builtin) { "builtin" } else { "external" })?;
    }
    if let Some(l) = cli.linkage {
        let l = match l {
            LinkageArg::Single => Linkage::Single,
            LinkageArg::Complete => Linkage::Complete,
        };
        raw.set("linkage", l.name())?;
    }
    Ok(PipelineConfig::from_raw(&raw)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let result = load_config(&cli).and_then(|config| Ok(run_pipeline(config, &cli.command.stages())?));
    match result {
        Ok(reports) => {
            for r in reports {
                let status = if r.status == StageStatus::Ran { "ran" } else { "skipped" };
                log::info!("{:<9} {status:<7} {:>8.2}s {}", r.stage.name(), r.elapsed.as_secs_f64(), r.detail);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            log::error!("{e:#}");
            ExitCode::FAILURE
        }
    }
}
