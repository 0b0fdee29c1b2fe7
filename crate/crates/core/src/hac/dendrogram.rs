use std::fmt::Write as _;

use crate::error::{Error, Result};

/// One agglomeration step. Ids below `n` are leaves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub distance: f64,
    pub id: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dendrogram {
    n: usize,
    merges: Vec<Merge>,
}

impl Dendrogram {
    /// Checks that the merges form a single binary tree over `n` leaves.
    pub fn from_merges(n: usize, merges: Vec<Merge>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidInput(format!("dendrogram: {msg}")));
        if n == 0 {
            return bad("no leaves".into());
        }
        if merges.len() != n - 1 {
            return bad(format!("{} merges for {n} leaves", merges.len()));
        }
        let mut used = vec![false; 2 * n - 1];
        for (k, m) in merges.iter().enumerate() {
            if m.id != n + k {
                return bad(format!("merge {k} has id {}, expected {}", m.id, n + k));
            }
            if m.left >= m.right {
                return bad(format!("merge {} has left {} >= right {}", m.id, m.left, m.right));
            }
            for c in [m.left, m.right] {
                if c >= m.id || used[c] {
                    return bad(format!("merge {} reuses or forward-references cluster {c}", m.id));
                }
                used[c] = true;
            }
            if m.distance.is_nan() {
                return bad(format!("merge {} has NaN distance", m.id));
            }
        }
        Ok(Dendrogram { n, merges })
    }

    pub fn leaves(&self) -> usize {
        self.n
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    pub fn root(&self) -> usize {
        2 * self.n - 2
    }

    /// Leaves under `id`, ascending.
    pub fn members(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(c) = stack.pop() {
            if c < self.n {
                out.push(c);
            } else {
                let m = &self.merges[c - self.n];
                stack.push(m.left);
                stack.push(m.right);
            }
        }
        out.sort_unstable();
        out
    }

    /// `left right distance newId` per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for m in &self.merges {
            let _ = writeln!(s, "{} {} {} {}", m.left, m.right, m.distance, m.id);
        }
        s
    }

    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut merges = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            let err = || Error::InvalidInput(format!("dendrogram line {}: {line:?}", no + 1));
            if f.len() != 4 {
                return Err(err());
            }
            merges.push(Merge {
                left: f[0].parse().map_err(|_| err())?,
                right: f[1].parse().map_err(|_| err())?,
                distance: f[2].parse().map_err(|_| err())?,
                id: f[3].parse().map_err(|_| err())?,
            });
        }
        Self::from_merges(n, merges)
    }
}
