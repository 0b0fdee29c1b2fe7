//! Workspace file helpers: every artifact is written to a hidden temporary
//! file in its final directory and renamed into place once complete.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::kg::{read_ntriples, write_ntriples, KnowledgeGraph};

fn temp_path(path: &Path) -> PathBuf {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!(".{name}.tmp"))
}

pub fn write_atomic(path: &Path, write: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(Error::io(dir))?;
    }
    let tmp = temp_path(path);
    let result = (|| {
        let mut w = BufWriter::new(File::create(&tmp)?);
        write(&mut w)?;
        w.flush()?;
        w.into_inner().map_err(|e| e.into_error())?.sync_all()
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path)(e));
    }
    fs::rename(&tmp, path).map_err(Error::io(path))
}

pub fn write_string_atomic(path: &Path, text: &str) -> Result<()> {
    write_atomic(path, |w| w.write_all(text.as_bytes()))
}

pub fn write_graph(path: &Path, kg: &KnowledgeGraph) -> Result<()> {
    write_atomic(path, |w| write_ntriples(kg, w))
}

pub fn read_graph(path: &Path, id: &str) -> Result<KnowledgeGraph> {
    let file = File::open(path).map_err(Error::io(path))?;
    read_ntriples(id, BufReader::new(file))
}
