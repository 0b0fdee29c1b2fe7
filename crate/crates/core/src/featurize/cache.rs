//! Vector cache: `terms.dict` (`termId token`) plus one `<wikiId>.vec`
//! (`termId weight`) per document.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

use super::tfidf::{SparseVector, Vocabulary};

pub fn vocabulary_to_string(vocab: &Vocabulary) -> String {
    let mut out = String::new();
    for (id, term) in vocab.iter() {
        writeln!(out, "{id} {term}").unwrap();
    }
    out
}

pub fn vector_to_string(vector: &SparseVector) -> String {
    let mut out = String::new();
    for &(id, w) in vector.entries() {
        // `{}` prints the shortest representation that round-trips exactly
        writeln!(out, "{id} {w}").unwrap();
    }
    out
}

pub fn parse_vocabulary(text: &str) -> Result<Vocabulary> {
    let mut vocab = Vocabulary::default();
    for (idx, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let bad = || Error::InvalidInput(format!("terms.dict line {}: expected `termId token`", idx + 1));
        let (id, term) = line.split_once(' ').ok_or_else(bad)?;
        let id: u32 = id.parse().map_err(|_| bad())?;
        if vocab.intern(term) != id {
            return Err(Error::InvalidInput(format!("terms.dict line {}: ids must be dense and in order", idx + 1)));
        }
    }
    Ok(vocab)
}

pub fn parse_vector(text: &str) -> Result<SparseVector> {
    let mut entries = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let bad = || Error::InvalidInput(format!("vector line {}: expected `termId weight`", idx + 1));
        let (id, w) = line.split_once(' ').ok_or_else(bad)?;
        entries.push((id.parse().map_err(|_| bad())?, w.parse().map_err(|_| bad())?));
    }
    SparseVector::new(entries)
}

pub fn read_vector(path: &Path) -> Result<SparseVector> {
    parse_vector(&std::fs::read_to_string(path).map_err(Error::io(path))?)
}

pub fn read_vocabulary(path: &Path) -> Result<Vocabulary> {
    parse_vocabulary(&std::fs::read_to_string(path).map_err(Error::io(path))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_round_trip_bitwise() {
        let v = SparseVector::new(vec![(0, 2f64.ln()), (7, 0.1 + 0.2), (9, 1e-300)]).unwrap();
        let back = parse_vector(&vector_to_string(&v)).unwrap();
        assert_eq!(back, v);
        assert_eq!(back.norm().to_bits(), v.norm().to_bits());
    }

    #[test]
    fn vocabulary_round_trip() {
        let mut vocab = Vocabulary::default();
        for t in ["riker", "betti", "human"] {
            vocab.intern(t);
        }
        assert_eq!(parse_vocabulary(&vocabulary_to_string(&vocab)).unwrap(), vocab);
        assert!(parse_vocabulary("1 a\n").is_err());
        assert!(parse_vector("x y\n").is_err());
    }
}
