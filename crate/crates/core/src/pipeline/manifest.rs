use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fsutil::write_string_atomic;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    /// Hash over the stage's configuration and its upstream record.
    pub key: String,
    pub complete: bool,
    /// Workspace-relative path to SHA-256 of every output file.
    pub outputs: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub stages: BTreeMap<String, StageRecord>,
}

impl Manifest {
    pub fn load(workspace: &Path) -> Result<Self> {
        let path = workspace.join(MANIFEST_FILE);
        match fs::read_to_string(&path) {
            Ok(text) => Ok(serde_json::from_str(&text)?),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Manifest::default()),
            Err(e) => Err(Error::io(&path)(e)),
        }
    }

    pub fn save(&self, workspace: &Path) -> Result<()> {
        write_string_atomic(&workspace.join(MANIFEST_FILE), &(serde_json::to_string_pretty(self)? + "\n"))
    }
}

pub fn file_sha256(path: &Path) -> Result<String> {
    let mut file = fs::File::open(path).map_err(Error::io(path))?;
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = file.read(&mut buf).map_err(Error::io(path))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}

/// Builds a stage key from named fields and file contents.
#[derive(Default)]
pub struct KeyHasher(Sha256);

impl KeyHasher {
    pub fn field(&mut self, name: &str, value: &str) -> &mut Self {
        for part in [name, value] {
            self.0.update((part.len() as u64).to_le_bytes());
            self.0.update(part.as_bytes());
        }
        self
    }

    pub fn file(&mut self, name: &str, path: &Path) -> Result<&mut Self> {
        let digest = file_sha256(path)?;
        Ok(self.field(name, &digest))
    }

    pub fn finish(&self) -> String {
        hex::encode(self.0.clone().finalize())
    }
}

/// Regular files under `paths` (files or directories), skipping hidden
/// temporaries, as sorted workspace-relative paths.
pub fn list_outputs(workspace: &Path, paths: &[&str]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        let full = workspace.join(p);
        if full.is_file() {
            out.push(PathBuf::from(p));
        } else if full.is_dir() {
            let mut stack = vec![full];
            while let Some(dir) = stack.pop() {
                for entry in fs::read_dir(&dir).map_err(Error::io(&dir))? {
                    let path = entry.map_err(Error::io(&dir))?.path();
                    let hidden = path.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with('.'));
                    if hidden {
                        continue;
                    }
                    if path.is_dir() {
                        stack.push(path);
                    } else {
                        out.push(path.strip_prefix(workspace).expect("under workspace").to_path_buf());
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

pub fn hash_outputs(workspace: &Path, files: &[PathBuf]) -> Result<BTreeMap<String, String>> {
    files.iter().map(|rel| Ok((rel.to_string_lossy().replace('\\', "/"), file_sha256(&workspace.join(rel))?))).collect()
}

/// True when every recorded output still exists with the recorded hash.
pub fn outputs_intact(workspace: &Path, record: &StageRecord) -> bool {
    record.outputs.iter().all(|(rel, hash)| file_sha256(&workspace.join(rel)).is_ok_and(|h| &h == hash))
}
