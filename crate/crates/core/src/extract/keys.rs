use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};

/// Maps infobox keys onto homogenized property names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynonymMap {
    entries: HashMap<String, String>,
}

impl Default for SynonymMap {
    fn default() -> Self {
        let mut map = SynonymMap::empty();
        for key in ["birthdate", "birth_date", "dateofbirth", "date_of_birth"] {
            map.insert(key, "birthDate");
        }
        map
    }
}

impl SynonymMap {
    pub fn empty() -> Self {
        SynonymMap { entries: HashMap::new() }
    }

    pub fn insert(&mut self, key: &str, canonical: &str) {
        self.entries.insert(lookup_key(key), canonical.to_string());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(&lookup_key(key)).map(String::as_str)
    }

    /// Default map extended with `key=canonical` lines from a file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
        let mut map = SynonymMap::default();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("{}:{}: expected key=canonical", path.display(), idx + 1)))?;
            map.insert(k.trim(), v.trim());
        }
        Ok(map)
    }
}

fn lookup_key(key: &str) -> String {
    key.chars().filter(|c| *c != '_' && !c.is_whitespace()).flat_map(char::to_lowercase).collect()
}

pub fn normalize_property_key(key: &str, synonyms: &SynonymMap) -> String {
    if let Some(canonical) = synonyms.get(key) {
        return canonical.to_string();
    }
    let mut out = String::with_capacity(key.len());
    for (i, word) in split_words(key).into_iter().enumerate() {
        let lower = word.to_lowercase();
        if i == 0 {
            out.push_str(&lower);
        } else {
            let mut chars = lower.chars();
            if let Some(first) = chars.next() {
                out.extend(first.to_uppercase());
                out.push_str(chars.as_str());
            }
        }
    }
    out
}

/// Splits on non-alphanumerics and on lower-to-upper case transitions.
pub(crate) fn split_words(s: &str) -> Vec<&str> {
    let mut words = Vec::new();
    let mut start: Option<usize> = None;
    let mut prev: Option<char> = None;
    for (i, c) in s.char_indices() {
        if !c.is_alphanumeric() {
            if let Some(st) = start.take() {
                words.push(&s[st..i]);
            }
        } else {
            let boundary = matches!(prev, Some(p) if p.is_lowercase() && c.is_uppercase());
            match start {
                Some(st) if boundary => {
                    words.push(&s[st..i]);
                    start = Some(i);
                }
                Some(_) => {}
                None => start = Some(i),
            }
        }
        prev = Some(c);
    }
    if let Some(st) = start {
        words.push(&s[st..]);
    }
    words
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn birth_date_family() {
        let map = SynonymMap::default();
        assert_eq!(normalize_property_key("birth_date", &map), "birthDate");
        assert_eq!(normalize_property_key("dateofbirth", &map), "birthDate");
        assert_eq!(normalize_property_key("birthdate", &map), "birthDate");
        assert_eq!(normalize_property_key("Birth Date", &map), "birthDate");
    }

    #[test]
    fn camel_case_fallback() {
        let map = SynonymMap::default();
        assert_eq!(normalize_property_key("eye colour", &map), "eyeColour");
        assert_eq!(normalize_property_key("birthPlace", &map), "birthPlace");
        assert_eq!(normalize_property_key("ISBN", &map), "isbn");
        assert_eq!(normalize_property_key("image_caption2", &map), "imageCaption2");
        assert_eq!(normalize_property_key("name(s)", &map), "nameS");
        assert_eq!(normalize_property_key("???", &map), "");
    }

    #[test]
    fn splitting() {
        assert_eq!(split_words("Betty_Riker"), vec!["Betty", "Riker"]);
        assert_eq!(split_words("birthDate"), vec!["birth", "Date"]);
        assert_eq!(split_words("  a--b  "), vec!["a", "b"]);
    }

    #[test]
    fn load_extends_default() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("syn.txt");
        std::fs::write(&path, "# comment\nhair colour = hairColor\n").unwrap();
        let map = SynonymMap::load(&path).unwrap();
        assert_eq!(normalize_property_key("haircolour", &map), "hairColor");
        assert_eq!(normalize_property_key("birth_date", &map), "birthDate");
        std::fs::write(&path, "nonsense\n").unwrap();
        assert!(SynonymMap::load(&path).is_err());
    }
}
