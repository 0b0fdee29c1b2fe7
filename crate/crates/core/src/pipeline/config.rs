use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::analyze::DEFAULT_BLOCKLIST;
use crate::error::{Error, Result};
use crate::hac::Linkage;
use crate::kg::namespace::DEFAULT_BASE;

/// Every key accepted in a config file.
pub const KEYS: &[&str] = &[
    "workspace",
    "dumpDir",
    "matcher",
    "matcherCommand",
    "matcherTimeout",
    "maxMatchers",
    "linkage",
    "jaccardThreshold",
    "stopwordFile",
    "synonymFile",
    "workers",
    "minShare",
    "baseIri",
    "abstracts",
    "reference",
    "topK",
    "blocklist",
];

const PATH_KEYS: &[&str] = &["workspace", "dumpDir", "stopwordFile", "synonymFile", "reference"];

/// Raw `key=value` settings before validation. Relative paths from a file
/// are resolved against that file's directory.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawConfig {
    values: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let mut raw = RawConfig::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value, got {line:?}", no + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(Error::Config(format!("line {}: unknown key `{key}`", no + 1)));
            }
            let value = match base_dir {
                Some(dir) if PATH_KEYS.contains(&key) && !value.is_empty() => {
                    dir.join(value).to_string_lossy().into_owned()
                }
                _ => value.to_string(),
            };
            raw.values.insert(key.to_string(), value);
        }
        Ok(raw)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
        Self::parse(&text, Some(path.parent().unwrap_or(Path::new("."))))
    }

    /// Sets or overrides a key; later calls win.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(Error::Config(format!("unknown key `{key}`")));
        }
        self.values.insert(key.to_string(), value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str).filter(|v| !v.is_empty())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MatcherSetting {
    Builtin,
    External { command: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub workspace: PathBuf,
    pub dump_dir: PathBuf,
    pub matcher: MatcherSetting,
    pub matcher_timeout: Option<Duration>,
    pub max_matchers: usize,
    pub linkage: Linkage,
    pub jaccard_threshold: f64,
    pub stopword_file: Option<PathBuf>,
    pub synonym_file: Option<PathBuf>,
    pub workers: usize,
    pub min_share: f64,
    pub base_iri: String,
    pub abstracts: bool,
    pub reference: Option<PathBuf>,
    pub top_k: usize,
    pub blocklist: Vec<String>,
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Config(format!("`{key}`: cannot parse {value:?}")))
}

fn existing(key: &str, path: PathBuf, dir: bool) -> Result<PathBuf> {
    let ok = if dir { path.is_dir() } else { path.is_file() };
    if !ok {
        let what = if dir { "directory" } else { "file" };
        return Err(Error::Config(format!("`{key}`: {what} {} does not exist", path.display())));
    }
    Ok(path)
}

impl PipelineConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let required = |key: &str| raw.get(key).ok_or_else(|| Error::MissingConfigKey(key.to_string()));
        let workspace = PathBuf::from(required("workspace")?);
        let dump_dir = existing("dumpDir", PathBuf::from(required("dumpDir")?), true)?;
        let matcher = match raw.get("matcher").unwrap_or("builtin") {
            "builtin" => MatcherSetting::Builtin,
            "external" => MatcherSetting::External { command: required("matcherCommand")?.to_string() },
            other => return Err(Error::Config(format!("`matcher`: expected builtin or external, got {other:?}"))),
        };
        let workers = match raw.get("workers") {
            Some(v) => parse_num::<usize>("workers", v)?,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        if workers == 0 {
            return Err(Error::Config("`workers` must be at least 1".into()));
        }
        let jaccard_threshold = raw.get("jaccardThreshold").map_or(Ok(0.8), |v| parse_num("jaccardThreshold", v))?;
        if !(0.0..=1.0).contains(&jaccard_threshold) {
            return Err(Error::Config(format!("`jaccardThreshold` {jaccard_threshold} outside [0,1]")));
        }
        let min_share = raw.get("minShare").map_or(Ok(0.01), |v| parse_num("minShare", v))?;
        if !(0.0..1.0).contains(&min_share) {
            return Err(Error::Config(format!("`minShare` {min_share} outside [0,1)")));
        }
        let matcher_timeout = match raw.get("matcherTimeout") {
            Some(v) => {
                let secs: f64 = parse_num("matcherTimeout", v)?;
                if !(secs > 0.0 && secs.is_finite()) {
                    return Err(Error::Config("`matcherTimeout` must be a positive number of seconds".into()));
                }
                Some(Duration::from_secs_f64(secs))
            }
            None => None,
        };
        let optional_file = |key: &str| raw.get(key).map(|v| existing(key, PathBuf::from(v), false)).transpose();
        let config = PipelineConfig {
            workspace,
            dump_dir,
            matcher,
            matcher_timeout,
            max_matchers: raw.get("maxMatchers").map_or(Ok(workers), |v| parse_num("maxMatchers", v))?.max(1),
            linkage: raw.get("linkage").map_or(Ok(Linkage::Complete), str::parse)?,
            jaccard_threshold,
            stopword_file: optional_file("stopwordFile")?,
            synonym_file: optional_file("synonymFile")?,
            workers,
            min_share,
            base_iri: raw.get("baseIri").unwrap_or(DEFAULT_BASE).to_string(),
            abstracts: raw.get("abstracts").map_or(Ok(true), |v| parse_num("abstracts", v))?,
            reference: optional_file("reference")?,
            top_k: raw.get("topK").map_or(Ok(10), |v| parse_num("topK", v))?,
            blocklist: match raw.get("blocklist") {
                Some(v) => v.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
                None => DEFAULT_BLOCKLIST.iter().map(|s| s.to_string()).collect(),
            },
        };
        if config.top_k == 0 {
            return Err(Error::Config("`topK` must be at least 1".into()));
        }
        Ok(config)
    }
}
