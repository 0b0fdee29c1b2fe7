use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::kg::Iri;

/// Scored equivalence between an entity of the source graph and one of the
/// target graph. The relation is always `=`.
#[derive(Clone, Debug, PartialEq)]
pub struct Correspondence {
    pub source: Iri,
    pub target: Iri,
    pub confidence: f64,
}

impl Correspondence {
    pub fn new(source: Iri, target: Iri, confidence: f64) -> Self {
        Correspondence { source, target, confidence }
    }

    pub fn reversed(&self) -> Self {
        Correspondence { source: self.target.clone(), target: self.source.clone(), confidence: self.confidence }
    }

    /// Direction-free identity of the pair.
    pub fn key(&self) -> (Iri, Iri) {
        if self.source <= self.target {
            (self.source.clone(), self.target.clone())
        } else {
            (self.target.clone(), self.source.clone())
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Alignment {
    correspondences: Vec<Correspondence>,
}

impl Alignment {
    pub fn new(correspondences: Vec<Correspondence>) -> Self {
        Alignment { correspondences }
    }

    pub fn len(&self) -> usize {
        self.correspondences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.correspondences.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Correspondence> {
        self.correspondences.iter()
    }

    pub fn correspondences(&self) -> &[Correspondence] {
        &self.correspondences
    }

    pub fn into_inner(self) -> Vec<Correspondence> {
        self.correspondences
    }

    pub fn push(&mut self, c: Correspondence) {
        self.correspondences.push(c);
    }

    /// Sorts by `(source, target)`.
    pub fn sort(&mut self) {
        self.correspondences.sort_by(|x, y| x.source.cmp(&y.source).then_with(|| x.target.cmp(&y.target)));
    }

    pub fn reversed(&self) -> Alignment {
        let mut al = Alignment::new(self.iter().map(Correspondence::reversed).collect());
        al.sort();
        al
    }

    /// True when no IRI occurs twice on the same side.
    pub fn is_one_to_one(&self) -> bool {
        let mut s = HashSet::new();
        let mut t = HashSet::new();
        self.iter().all(|c| s.insert(&c.source) && t.insert(&c.target))
    }

    /// `source<TAB>target<TAB>=<TAB>confidence` per line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for c in &self.correspondences {
            let _ = writeln!(out, "{}\t{}\t=\t{}", c.source, c.target, c.confidence);
        }
        out
    }

    pub fn parse_tsv(text: &str) -> Result<Self> {
        let mut al = Alignment::default();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::AlignmentParse { line: no + 1, message };
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(err(format!("expected 4 tab-separated fields, found {}", fields.len())));
            }
            let iri = |s: &str| {
                let s = s.trim();
                let s = s.strip_prefix('<').and_then(|s| s.strip_suffix('>')).unwrap_or(s);
                Iri::new(s).map_err(|e| err(e.to_string()))
            };
            let (source, target) = (iri(fields[0])?, iri(fields[1])?);
            if fields[2].trim() != "=" {
                return Err(err(format!("unsupported relation {:?}", fields[2])));
            }
            let confidence: f64 =
                fields[3].trim().parse().map_err(|_| err(format!("bad confidence {:?}", fields[3])))?;
            if !(0.0..=1.0).contains(&confidence) {
                return Err(err(format!("confidence {confidence} outside [0,1]")));
            }
            al.push(Correspondence { source, target, confidence });
        }
        Ok(al)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(Error::io(path))?;
        Self::parse_tsv(&text)
    }
}

impl FromIterator<Correspondence> for Alignment {
    fn from_iter<I: IntoIterator<Item = Correspondence>>(iter: I) -> Self {
        Alignment::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Alignment {
    type Item = &'a Correspondence;
    type IntoIter = std::slice::Iter<'a, Correspondence>;

    fn into_iter(self) -> Self::IntoIter {
        self.correspondences.iter()
    }
}

fn descending(x: &Correspondence, y: &Correspondence) -> Ordering {
    y.confidence.total_cmp(&x.confidence).then_with(|| x.source.cmp(&y.source)).then_with(|| x.target.cmp(&y.target))
}

/// Naive descending extraction: scan by confidence, highest first, and keep
/// a correspondence only if neither endpoint has been used yet. The result
/// is sorted by `(source, target)`.
pub fn extract_one_to_one(al: &Alignment) -> Alignment {
    let mut order: Vec<&Correspondence> = al.iter().collect();
    order.sort_by(|x, y| descending(x, y));
    let mut sources = HashSet::new();
    let mut targets = HashSet::new();
    let mut kept = Alignment::default();
    for c in order {
        if !sources.contains(&c.source) && !targets.contains(&c.target) {
            sources.insert(c.source.clone());
            targets.insert(c.target.clone());
            kept.push(c.clone());
        }
    }
    kept.sort();
    kept
}
