use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};

use super::tokenize::TokenStream;

/// Term dictionary with dense ids in first-seen order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Vocabulary {
    pub fn intern(&mut self, term: &str) -> u32 {
        if let Some(&id) = self.ids.get(term) {
            return id;
        }
        let id = self.terms.len() as u32;
        self.terms.push(term.to_string());
        self.ids.insert(term.to_string(), id);
        id
    }

    pub fn id(&self, term: &str) -> Option<u32> {
        self.ids.get(term).copied()
    }

    pub fn term(&self, id: u32) -> Option<&str> {
        self.terms.get(id as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &str)> {
        self.terms.iter().enumerate().map(|(i, t)| (i as u32, t.as_str()))
    }
}

/// Non-negative sparse vector, entries sorted by term id, no explicit zeros.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SparseVector {
    entries: Vec<(u32, f64)>,
    norm: f64,
}

impl SparseVector {
    pub fn new(mut entries: Vec<(u32, f64)>) -> Result<Self> {
        entries.sort_by_key(|e| e.0);
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidInput("duplicate term id in sparse vector".into()));
        }
        if entries.iter().any(|&(_, w)| !w.is_finite() || w < 0.0) {
            return Err(Error::InvalidInput("sparse vector weights must be finite and non-negative".into()));
        }
        entries.retain(|&(_, w)| w > 0.0);
        Ok(Self::from_sorted(entries))
    }

    fn from_sorted(entries: Vec<(u32, f64)>) -> Self {
        let norm = entries.iter().map(|&(_, w)| w * w).sum::<f64>().sqrt();
        SparseVector { entries, norm }
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of products over shared terms, accumulated in ascending term order.
    pub fn dot(&self, other: &SparseVector) -> f64 {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        let mut sum = 0.0;
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    sum += a[i].1 * b[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        sum
    }
}

#[derive(Clone, Debug)]
pub struct TfIdf {
    pub vocabulary: Vocabulary,
    pub vectors: Vec<SparseVector>,
}

/// `weight(t, d) = tf(t, d) * ln(N / df(t))` with raw counts. Terms present
/// in every document get weight zero and are dropped.
pub fn tfidf_vectors(docs: &[TokenStream]) -> Result<TfIdf> {
    if docs.is_empty() {
        return Err(Error::InvalidInput("tf-idf needs at least one document".into()));
    }
    let mut vocabulary = Vocabulary::default();
    let counts: Vec<Vec<(u32, u32)>> = docs
        .iter()
        .map(|doc| {
            let mut tf: HashMap<u32, u32> = HashMap::new();
            for token in doc.iter() {
                *tf.entry(vocabulary.intern(token)).or_default() += 1;
            }
            let mut tf: Vec<(u32, u32)> = tf.into_iter().collect();
            tf.sort_unstable();
            tf
        })
        .collect();
    let mut df = vec![0u64; vocabulary.len()];
    for doc in &counts {
        for &(term, _) in doc {
            df[term as usize] += 1;
        }
    }
    let n = docs.len() as f64;
    let idf: Vec<f64> = df.iter().map(|&d| (n / d as f64).ln()).collect();
    let vectors = counts
        .par_iter()
        .map(|doc| {
            let entries = doc
                .iter()
                .map(|&(term, tf)| (term, tf as f64 * idf[term as usize]))
                .filter(|&(_, w)| w > 0.0)
                .collect();
            SparseVector::from_sorted(entries)
        })
        .collect();
    Ok(TfIdf { vocabulary, vectors })
}

/// `1 - cos(u, v)` clamped to `[0, 1]`; 1 when either vector is zero and
/// exactly 0 for identical non-zero vectors.
pub fn cosine_distance(u: &SparseVector, v: &SparseVector) -> f64 {
    distance_from_dot(u, v, u.dot(v))
}

/// Shared by the matrix kernel so both routes round identically.
pub(crate) fn distance_from_dot(u: &SparseVector, v: &SparseVector, dot: f64) -> f64 {
    if u.norm == 0.0 || v.norm == 0.0 {
        return 1.0;
    }
    if u.norm.to_bits() == v.norm.to_bits() && u.entries == v.entries {
        return 0.0;
    }
    (1.0 - dot / (u.norm * v.norm)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(tokens: &[&str]) -> TokenStream {
        TokenStream { tokens: tokens.iter().map(|s| s.to_string()).collect() }
    }

    #[test]
    fn hand_computed_weights() {
        let out = tfidf_vectors(&[doc(&["a", "b"]), doc(&["b"])]).unwrap();
        let a = out.vocabulary.id("a").unwrap();
        assert_eq!(out.vectors[0].entries(), &[(a, 2f64.ln())]);
        assert!(out.vectors[1].is_zero());
    }

    #[test]
    fn raw_term_counts() {
        let out = tfidf_vectors(&[doc(&["a", "a", "a"]), doc(&["b"]), doc(&["b"])]).unwrap();
        assert_eq!(out.vectors[0].entries(), &[(0, 3.0 * 3f64.ln())]);
        assert_eq!(out.vectors[1].entries(), &[(1, (1.5f64).ln())]);
    }

    #[test]
    fn single_document_is_zero() {
        let out = tfidf_vectors(&[doc(&["a", "b", "a"])]).unwrap();
        assert!(out.vectors[0].is_zero());
        assert!(tfidf_vectors(&[]).is_err());
    }

    #[test]
    fn identical_docs_equal_vectors() {
        let out = tfidf_vectors(&[doc(&["x", "y"]), doc(&["x", "y"]), doc(&["z"])]).unwrap();
        assert_eq!(out.vectors[0], out.vectors[1]);
        assert_eq!(cosine_distance(&out.vectors[0], &out.vectors[1]), 0.0);
    }

    #[test]
    fn first_seen_term_ids() {
        let out = tfidf_vectors(&[doc(&["q", "p"]), doc(&["p", "r"])]).unwrap();
        let terms: Vec<_> = out.vocabulary.iter().map(|(_, t)| t).collect();
        assert_eq!(terms, vec!["q", "p", "r"]);
    }

    #[test]
    fn distance_conventions() {
        let u = SparseVector::new(vec![(0, 1.0), (1, 2.0)]).unwrap();
        let w = SparseVector::new(vec![(2, 1.0)]).unwrap();
        let zero = SparseVector::default();
        assert_eq!(cosine_distance(&u, &u), 0.0);
        assert_eq!(cosine_distance(&u, &w), 1.0);
        assert_eq!(cosine_distance(&zero, &u), 1.0);
        assert_eq!(cosine_distance(&zero, &zero), 1.0);
        let v = SparseVector::new(vec![(0, 1.0)]).unwrap();
        let expected = 1.0 - 1.0 / 5f64.sqrt();
        assert!((cosine_distance(&u, &v) - expected).abs() < 1e-15);
    }

    #[test]
    fn vector_validation() {
        assert!(SparseVector::new(vec![(0, 1.0), (0, 2.0)]).is_err());
        assert!(SparseVector::new(vec![(0, -1.0)]).is_err());
        assert!(SparseVector::new(vec![(0, f64::NAN)]).is_err());
        let v = SparseVector::new(vec![(3, 4.0), (1, 0.0), (0, 3.0)]).unwrap();
        assert_eq!(v.entries(), &[(0, 3.0), (3, 4.0)]);
        assert_eq!(v.norm(), 5.0);
    }
}
