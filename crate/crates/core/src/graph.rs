//! Symmetrically normalized user-item adjacency in CSR layout.
//!
//! Node ids: users occupy `[0, user_count)`, items `[user_count, N)`.

use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::dataset::SplitDataset;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SparseAdjacency {
    user_count: usize,
    item_count: usize,
    row_offsets: Vec<usize>,
    column_indices: Vec<usize>,
    values: Vec<f64>,
    degrees: Vec<usize>,
}

pub fn build_normalized_adjacency(split: &SplitDataset) -> Result<SparseAdjacency> {
    let pairs = split.train_pairs();
    if pairs.is_empty() {
        return Err(Error::EmptyDataset("train split has no interactions".into()));
    }
    SparseAdjacency::from_interactions(split.user_count(), split.item_count(), &pairs)
}

impl SparseAdjacency {
    /// Builds `D^{-1/2} A D^{-1/2}` for the bipartite graph with the given
    /// user-item edges. Duplicate edges collapse; isolated nodes keep empty
    /// rows (their `d^{-1/2}` is taken as 0).
    pub fn from_interactions(user_count: usize, item_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let n = user_count + item_count;
        let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, i) in edges {
            if u >= user_count {
                return Err(Error::IndexOutOfRange {
                    what: "user",
                    index: u,
                    count: user_count,
                });
            }
            if i >= item_count {
                return Err(Error::IndexOutOfRange {
                    what: "item",
                    index: i,
                    count: item_count,
                });
            }
            neighbours[u].push(user_count + i);
            neighbours[user_count + i].push(u);
        }
        for list in &mut neighbours {
            list.sort_unstable();
            list.dedup();
        }
        let degrees: Vec<usize> = neighbours.iter().map(Vec::len).collect();
        let inv_sqrt: Vec<f64> = degrees
            .iter()
            .map(|&d| if d == 0 { 0.0 } else { 1.0 / (d as f64).sqrt() })
            .collect();

        let nnz = degrees.iter().sum();
        let mut row_offsets = Vec::with_capacity(n + 1);
        let mut column_indices = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        row_offsets.push(0);
        for (r, list) in neighbours.iter().enumerate() {
            for &c in list {
                column_indices.push(c);
                values.push(inv_sqrt[r] * inv_sqrt[c]);
            }
            row_offsets.push(column_indices.len());
        }
        Ok(Self {
            user_count,
            item_count,
            row_offsets,
            column_indices,
            values,
            degrees,
        })
    }

    pub fn user_count(&self) -> usize {
        self.user_count
    }

    pub fn item_count(&self) -> usize {
        self.item_count
    }

    pub fn node_count(&self) -> usize {
        self.user_count + self.item_count
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn column_indices(&self) -> &[usize] {
        &self.column_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(column, value)` pairs of row `r`, columns ascending.
    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_offsets[r]..self.row_offsets[r + 1];
        self.column_indices[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    /// Stored value at `(r, c)`, zero when absent.
    pub fn value(&self, r: usize, c: usize) -> f64 {
        let span = self.row_offsets[r]..self.row_offsets[r + 1];
        match self.column_indices[span.clone()].binary_search(&c) {
            Ok(k) => self.values[span.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn neighbours(&self, r: usize) -> &[usize] {
        &self.column_indices[self.row_offsets[r]..self.row_offsets[r + 1]]
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let n = self.node_count();
        let mut m = DenseMatrix::zeros(n, n);
        for r in 0..n {
            for (c, v) in self.row(r) {
                m.set(r, c, v);
            }
        }
        m
    }

    /// `Â · x`. Each output row is accumulated sequentially in ascending
    /// column order, so the result does not depend on the thread count.
    pub fn spmm(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        let mut out = DenseMatrix::zeros(x.rows(), x.cols());
        self.spmm_into(x, &mut out)?;
        Ok(out)
    }

    pub fn spmm_into(&self, x: &DenseMatrix, out: &mut DenseMatrix) -> Result<()> {
        let n = self.node_count();
        if x.rows() != n {
            return Err(Error::DimensionMismatch {
                context: "spmm input rows",
                expected: n,
                found: x.rows(),
            });
        }
        if out.rows() != n || out.cols() != x.cols() {
            return Err(Error::DimensionMismatch {
                context: "spmm output shape",
                expected: n * x.cols(),
                found: out.rows() * out.cols(),
            });
        }
        let d = x.cols();
        if d == 0 {
            return Ok(());
        }
        out.as_mut_slice()
            .par_chunks_mut(d)
            .enumerate()
            .for_each(|(r, out_row)| {
                out_row.fill(0.0);
                for (c, v) in self.row(r) {
                    for (o, xv) in out_row.iter_mut().zip(x.row(c)) {
                        *o += v * xv;
                    }
                }
            });
        Ok(())
    }

    /// Largest deviation from structural and numeric symmetry, and whether
    /// any edge joins two users or two items.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for r in 0..self.node_count() {
            for (c, v) in self.row(r) {
                if (r < self.user_count) == (c < self.user_count) {
                    return Err(format!("non-bipartite edge ({r},{c})"));
                }
                if self.value(c, r) != v {
                    return Err(format!("asymmetric entry ({r},{c})"));
                }
                let expected = 1.0 / ((self.degrees[r] * self.degrees[c]) as f64).sqrt();
                if (v - expected).abs() > 1e-15 {
                    return Err(format!("entry ({r},{c}) = {v}, expected {expected}"));
                }
            }
        }
        Ok(())
    }
}

const CSR_MAGIC: &[u8; 8] = b"SGCFCSR\0";
const CSR_VERSION: u32 = 1;

impl SparseAdjacency {
    /// Little-endian cache: magic, version, user/item counts, N, nnz, then
    /// row offsets (u64), column indices (u64) and values (f64).
    pub fn write_cache<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(CSR_MAGIC)?;
        w.write_all(&CSR_VERSION.to_le_bytes())?;
        for v in [self.user_count, self.item_count, self.node_count(), self.nnz()] {
            w.write_all(&(v as u64).to_le_bytes())?;
        }
        for &o in &self.row_offsets {
            w.write_all(&(o as u64).to_le_bytes())?;
        }
        for &c in &self.column_indices {
            w.write_all(&(c as u64).to_le_bytes())?;
        }
        for &v in &self.values {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_cache<R: Read>(mut r: R, source: &Path) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != CSR_MAGIC {
            return Err(Error::format(source, "not a CSR cache file"));
        }
        let mut b4 = [0u8; 4];
        r.read_exact(&mut b4)?;
        let version = u32::from_le_bytes(b4);
        if version != CSR_VERSION {
            return Err(Error::format(
                source,
                format!("unsupported CSR cache version {version}"),
            ));
        }
        let read_u64 = |r: &mut R| -> Result<usize> {
            let mut b = [0u8; 8];
            r.read_exact(&mut b)?;
            Ok(u64::from_le_bytes(b) as usize)
        };
        let user_count = read_u64(&mut r)?;
        let item_count = read_u64(&mut r)?;
        let n = read_u64(&mut r)?;
        let nnz = read_u64(&mut r)?;
        if n != user_count + item_count {
            return Err(Error::format(source, "node count does not match user + item counts"));
        }
        let row_offsets = (0..=n).map(|_| read_u64(&mut r)).collect::<Result<Vec<_>>>()?;
        let column_indices = (0..nnz).map(|_| read_u64(&mut r)).collect::<Result<Vec<_>>>()?;
        let mut values = Vec::with_capacity(nnz);
        for _ in 0..nnz {
            let mut b = [0u8; 8];
            r.read_exact(&mut b)?;
            values.push(f64::from_le_bytes(b));
        }
        if row_offsets.last() != Some(&nnz) || row_offsets.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::format(source, "corrupt row offsets"));
        }
        if column_indices.iter().any(|&c| c >= n) {
            return Err(Error::format(source, "column index out of range"));
        }
        let degrees = row_offsets.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(Self {
            user_count,
            item_count,
            row_offsets,
            column_indices,
            values,
            degrees,
        })
    }
}
