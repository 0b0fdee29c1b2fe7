use std::fmt;
use std::str::FromStr;

use super::dendrogram::{Dendrogram, Merge};
use super::matrix::CondensedMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Linkage {
    #[default]
    Single,
    Complete,
}

impl Linkage {
    pub fn name(self) -> &'static str {
        match self {
            Linkage::Single => "single",
            Linkage::Complete => "complete",
        }
    }
}

impl fmt::Display for Linkage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Linkage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "single" => Ok(Linkage::Single),
            "complete" => Ok(Linkage::Complete),
            other => Err(Error::Config(format!("unknown linkage {other:?} (expected single or complete)"))),
        }
    }
}

/// Agglomerative clustering over a precomputed distance matrix.
///
/// Merges are reported in non-decreasing distance order. A merge creates
/// cluster `n + k` for the k-th row; `left < right` within each row.
/// Equal distances keep the order in which the algorithm discovered them.
pub fn hac(matrix: &CondensedMatrix, linkage: Linkage) -> Result<Dendrogram> {
    let n = matrix.n();
    if n < 2 {
        return Err(Error::InvalidInput(format!("clustering needs at least 2 items, got {n}")));
    }
    if let Some(k) = matrix.values().position(f64::is_nan) {
        let (i, j) = matrix.pair(k);
        return Err(Error::NanDistance { i, j });
    }
    let raw = match linkage {
        Linkage::Single => slink(matrix),
        Linkage::Complete => nn_chain_complete(matrix),
    };
    Ok(relabel(n, raw))
}

/// Pointer representation (pi, lambda) built in O(n^2) time, O(n) memory.
fn slink(m: &CondensedMatrix) -> Vec<(usize, usize, f64)> {
    let n = m.n();
    let mut pi = vec![0usize; n];
    let mut lambda = vec![f64::INFINITY; n];
    let mut mu = vec![0.0f64; n];
    for i in 0..n {
        pi[i] = i;
        lambda[i] = f64::INFINITY;
        for (j, slot) in mu.iter_mut().enumerate().take(i) {
            *slot = m.get(j, i);
        }
        for j in 0..i {
            if lambda[j] >= mu[j] {
                mu[pi[j]] = mu[pi[j]].min(lambda[j]);
                lambda[j] = mu[j];
                pi[j] = i;
            } else {
                mu[pi[j]] = mu[pi[j]].min(mu[j]);
            }
        }
        for j in 0..i {
            if lambda[j] >= lambda[pi[j]] {
                pi[j] = i;
            }
        }
    }
    let mut order: Vec<usize> = (0..n - 1).collect();
    order.sort_by(|&a, &b| lambda[a].total_cmp(&lambda[b]).then(a.cmp(&b)));
    order.into_iter().map(|i| (i, pi[i], lambda[i])).collect()
}

/// Nearest-neighbour chain; exact for complete linkage since it is reducible.
fn nn_chain_complete(m: &CondensedMatrix) -> Vec<(usize, usize, f64)> {
    let n = m.n();
    let mut d = m.clone();
    let mut active = vec![true; n];
    let mut chain: Vec<usize> = Vec::with_capacity(n);
    let mut out = Vec::with_capacity(n - 1);
    let mut remaining = n;
    while remaining > 1 {
        if chain.is_empty() {
            chain.push(active.iter().position(|&a| a).expect("an active cluster"));
        }
        let (a, b) = loop {
            let a = *chain.last().unwrap();
            let prev = chain.len().checked_sub(2).map(|k| chain[k]);
            let mut best = prev.map(|p| (p, d.get(a, p)));
            for x in (0..n).filter(|&x| active[x] && x != a) {
                let dx = d.get(a, x);
                if best.is_none_or(|(_, bd)| dx < bd) {
                    best = Some((x, dx));
                }
            }
            let b = best.expect("another active cluster").0;
            if Some(b) == prev {
                chain.truncate(chain.len() - 2);
                break (a, b);
            }
            chain.push(b);
        };
        let dist = d.get(a, b);
        let (gone, keep) = if a < b { (a, b) } else { (b, a) };
        active[gone] = false;
        for x in (0..n).filter(|&x| active[x] && x != keep) {
            let v = d.get(keep, x).max(d.get(gone, x));
            d.set(keep, x, v);
        }
        out.push((a, b, dist));
        remaining -= 1;
    }
    let mut idx: Vec<usize> = (0..out.len()).collect();
    idx.sort_by(|&x, &y| out[x].2.total_cmp(&out[y].2).then(x.cmp(&y)));
    idx.into_iter().map(|k| out[k]).collect()
}

/// Turn leaf-representative merges into cluster ids `0..2n-1`.
fn relabel(n: usize, raw: Vec<(usize, usize, f64)>) -> Dendrogram {
    let mut parent: Vec<usize> = (0..n).collect();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut merges = Vec::with_capacity(n - 1);
    for (k, (a, b, distance)) in raw.into_iter().enumerate() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        let (la, lb) = (label[ra], label[rb]);
        parent[ra] = rb;
        label[rb] = n + k;
        merges.push(Merge { left: la.min(lb), right: la.max(lb), distance, id: n + k });
    }
    Dendrogram::from_merges(n, merges).expect("linkage produces a valid dendrogram")
}
