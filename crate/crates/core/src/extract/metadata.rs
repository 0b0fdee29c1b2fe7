use std::path::Path;

use crate::error::{Error, Result};

/// Wiki statistics from a `<wikiId>.meta` sidecar.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WikiMetadata {
    pub wiki_id: String,
    pub pages: Option<u64>,
    pub articles: Option<u64>,
    pub users: Option<u64>,
    pub active_users: Option<u64>,
    pub wam_score: Option<f64>,
}

pub fn load_wiki_metadata(path: &Path) -> Result<WikiMetadata> {
    let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
    let wiki_id = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
    parse_wiki_metadata(wiki_id, &text).map_err(|message| Error::Metadata { path: path.to_path_buf(), message })
}

pub fn parse_wiki_metadata(wiki_id: &str, text: &str) -> Result<WikiMetadata, String> {
    let mut meta = WikiMetadata { wiki_id: wiki_id.to_string(), ..Default::default() };
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| format!("line {}: expected key=value", idx + 1))?;
        let (key, value) = (key.trim().to_lowercase(), value.trim());
        let count =
            || value.parse::<u64>().map_err(|_| format!("line {}: {key} must be a non-negative integer", idx + 1));
        match key.as_str() {
            "pages" => meta.pages = Some(count()?),
            "articles" => meta.articles = Some(count()?),
            "users" => meta.users = Some(count()?),
            "activeusers" => meta.active_users = Some(count()?),
            "wam" => {
                let wam: f64 = value.parse().map_err(|_| format!("line {}: wam must be a number", idx + 1))?;
                if !(0.0..=100.0).contains(&wam) {
                    return Err(format!("line {}: wam {wam} outside [0, 100]", idx + 1));
                }
                meta.wam_score = Some(wam);
            }
            other => log::warn!("{wiki_id}.meta: ignoring unknown key {other:?}"),
        }
    }
    Ok(meta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_counts_and_wam() {
        let m = parse_wiki_metadata("w", "pages=100\nusers=7\nwam=55.2\n").unwrap();
        assert_eq!(m.pages, Some(100));
        assert_eq!(m.users, Some(7));
        assert_eq!(m.wam_score, Some(55.2));
        assert_eq!(m.articles, None);
    }

    #[test]
    fn wam_optional() {
        let m = parse_wiki_metadata("w", "pages=1\nactiveusers=2").unwrap();
        assert_eq!(m.wam_score, None);
        assert_eq!(m.active_users, Some(2));
    }

    #[test]
    fn wam_range_checked() {
        assert!(parse_wiki_metadata("w", "wam=120").unwrap_err().contains("outside"));
        assert!(parse_wiki_metadata("w", "wam=-1").is_err());
        assert!(parse_wiki_metadata("w", "wam=NaN").is_err());
        assert!(parse_wiki_metadata("w", "pages=-3").is_err());
    }

    #[test]
    fn load_from_file_uses_stem_as_id() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("starwars.meta");
        std::fs::write(&path, "pages=3\n").unwrap();
        assert_eq!(load_wiki_metadata(&path).unwrap().wiki_id, "starwars");
        std::fs::write(&path, "wam=101\n").unwrap();
        assert!(matches!(load_wiki_metadata(&path), Err(Error::Metadata { .. })));
    }
}
