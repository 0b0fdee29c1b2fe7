use std::io::{Read, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::featurize::{distance_from_dot, SparseVector};

/// Default entries per storage block (2^24 doubles, 128 MiB).
pub const DEFAULT_BLOCK_SIZE: usize = 1 << 24;

const MAGIC: &[u8; 8] = b"KGFMAT1\0";
const CHUNK: usize = 1 << 15;

/// Number of unordered pairs, `n(n-1)/2`.
pub fn pair_count(n: usize) -> Result<usize> {
    if n < 2 {
        return Ok(0);
    }
    let (a, b) = if n.is_multiple_of(2) { (n / 2, n - 1) } else { (n, (n - 1) / 2) };
    a.checked_mul(b).ok_or_else(|| Error::Overflow(format!("pair count for {n} items")))
}

/// Strict upper triangle of a symmetric distance matrix, row-major, split
/// into fixed-size blocks so `n` is not bounded by any single allocation.
/// Pair `(i, j)` with `i < j` lives at `k = i*n - i*(i+1)/2 + (j - i - 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CondensedMatrix {
    n: usize,
    len: usize,
    shift: u32,
    blocks: Vec<Vec<f64>>,
}

impl CondensedMatrix {
    pub fn filled(n: usize, value: f64) -> Result<Self> {
        Self::with_block_size(n, value, DEFAULT_BLOCK_SIZE)
    }

    /// `block_size` is rounded up to a power of two.
    pub fn with_block_size(n: usize, value: f64, block_size: usize) -> Result<Self> {
        let len = pair_count(n)?;
        let block_size = block_size.max(1).next_power_of_two();
        let bytes = len as u128 * std::mem::size_of::<f64>() as u128;
        let capacity_error = || Error::Capacity { items: n, bytes };
        let mut blocks = Vec::new();
        blocks.try_reserve_exact(len.div_ceil(block_size)).map_err(|_| capacity_error())?;
        let mut remaining = len;
        while remaining > 0 {
            let size = remaining.min(block_size);
            let mut block = Vec::new();
            block.try_reserve_exact(size).map_err(|_| capacity_error())?;
            block.resize(size, value);
            blocks.push(block);
            remaining -= size;
        }
        Ok(CondensedMatrix { n, len, shift: block_size.trailing_zeros(), blocks })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = Self::filled(n, 0.0)?;
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, f(i, j));
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn block_size(&self) -> usize {
        1 << self.shift
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Condensed index of `(i, j)`; order of the pair does not matter.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i != j && i < self.n && j < self.n);
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Inverse of [`index`](Self::index): the pair `(i, j)`, `i < j`, stored at `k`.
    pub fn pair(&self, k: usize) -> (usize, usize) {
        assert!(k < self.len, "condensed index {k} out of range");
        let n = self.n as f64;
        let guess = n - 0.5 - ((n - 0.5) * (n - 0.5) - 2.0 * k as f64).sqrt();
        let mut i = (guess.floor().max(0.0) as usize).min(self.n - 2);
        while i > 0 && self.row_start(i) > k {
            i -= 1;
        }
        while i + 1 < self.n - 1 && self.row_start(i + 1) <= k {
            i += 1;
        }
        (i, k - self.row_start(i) + i + 1)
    }

    #[inline]
    fn row_start(&self, i: usize) -> usize {
        i * self.n - i * (i + 1) / 2
    }

    #[inline]
    pub fn get_index(&self, k: usize) -> f64 {
        self.blocks[k >> self.shift][k & ((1 << self.shift) - 1)]
    }

    #[inline]
    pub fn set_index(&mut self, k: usize, value: f64) {
        let mask = (1 << self.shift) - 1;
        self.blocks[k >> self.shift][k & mask] = value;
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.get_index(self.index(i, j))
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let k = self.index(i, j);
        self.set_index(k, value);
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.blocks.iter().flatten().copied()
    }

    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&(self.n as u64).to_le_bytes())?;
        w.write_all(&(self.block_size() as u64).to_le_bytes())?;
        let mut buf = Vec::with_capacity(8 * CHUNK);
        for block in &self.blocks {
            for chunk in block.chunks(CHUNK) {
                buf.clear();
                for v in chunk {
                    buf.extend_from_slice(&v.to_le_bytes());
                }
                w.write_all(&buf)?;
            }
        }
        w.flush()
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let bad = |e: std::io::Error| Error::InvalidInput(format!("matrix file: {e}"));
        let mut header = [0u8; 24];
        r.read_exact(&mut header).map_err(bad)?;
        if &header[..8] != MAGIC {
            return Err(Error::InvalidInput("matrix file: bad magic".into()));
        }
        let n = u64::from_le_bytes(header[8..16].try_into().unwrap()) as usize;
        let block_size = u64::from_le_bytes(header[16..24].try_into().unwrap()) as usize;
        if !block_size.is_power_of_two() {
            return Err(Error::InvalidInput("matrix file: block size must be a power of two".into()));
        }
        let mut m = Self::with_block_size(n, 0.0, block_size)?;
        let mut bytes = vec![0u8; 8 * CHUNK];
        for block in &mut m.blocks {
            for chunk in block.chunks_mut(CHUNK) {
                let buf = &mut bytes[..8 * chunk.len()];
                r.read_exact(buf).map_err(bad)?;
                for (v, b) in chunk.iter_mut().zip(buf.chunks_exact(8)) {
                    *v = f64::from_le_bytes(b.try_into().unwrap());
                }
            }
        }
        Ok(m)
    }
}

/// Pairwise cosine distances. Every entry is computed independently with a
/// fixed summation order, so the result does not depend on the worker count.
pub fn distance_matrix(vectors: &[SparseVector]) -> Result<CondensedMatrix> {
    distance_matrix_with_block_size(vectors, DEFAULT_BLOCK_SIZE)
}

pub fn distance_matrix_with_block_size(vectors: &[SparseVector], block_size: usize) -> Result<CondensedMatrix> {
    let n = vectors.len();
    if n < 2 {
        return Err(Error::InvalidInput(format!("distance matrix needs at least 2 vectors, got {n}")));
    }
    let mut matrix = CondensedMatrix::with_block_size(n, 0.0, block_size)?;
    let dim = vectors.iter().filter_map(|v| v.entries().last()).map(|&(t, _)| t as usize + 1).max().unwrap_or(0);
    let block_size = matrix.block_size();
    let geometry = CondensedMatrix { n, len: matrix.len, shift: matrix.shift, blocks: Vec::new() };

    matrix.blocks.iter_mut().enumerate().for_each(|(b, block)| {
        block.par_chunks_mut(CHUNK).enumerate().for_each_init(
            || vec![0.0f64; dim],
            |dense, (c, chunk)| {
                let start = b * block_size + c * CHUNK;
                let (mut i, mut j) = geometry.pair(start);
                scatter(dense, &vectors[i]);
                for slot in chunk.iter_mut() {
                    let (u, v) = (&vectors[i], &vectors[j]);
                    let mut dot = 0.0;
                    for &(t, w) in v.entries() {
                        dot += dense[t as usize] * w;
                    }
                    *slot = distance_from_dot(u, v, dot);
                    j += 1;
                    if j == n {
                        clear(dense, &vectors[i]);
                        i += 1;
                        j = i + 1;
                        if i < n - 1 {
                            scatter(dense, &vectors[i]);
                        }
                    }
                }
                if i < n - 1 {
                    clear(dense, &vectors[i]);
                }
            },
        );
    });
    Ok(matrix)
}

fn scatter(dense: &mut [f64], v: &SparseVector) {
    for &(t, w) in v.entries() {
        dense[t as usize] = w;
    }
}

fn clear(dense: &mut [f64], v: &SparseVector) {
    for &(t, _) in v.entries() {
        dense[t as usize] = 0.0;
    }
}
