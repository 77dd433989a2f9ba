//! Polynomial propagation `E = Σ αᵢ Âⁱ E⁰`, the space flip and scoring.

use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;

use crate::dense::{dot, DenseMatrix};
use crate::error::{Error, Result};
use crate::graph::SparseAdjacency;

/// Default cap on `N` for anything that materialises an `N×N` matrix.
pub const DENSE_CAP: usize = 512;

/// `Σ cᵢ Âⁱ E⁰` via the iterates `Z₀ = E⁰, Zᵢ = Â Zᵢ₋₁`.
pub fn propagate(adj: &SparseAdjacency, e0: &DenseMatrix, coeffs: &[f64]) -> Result<DenseMatrix> {
    if coeffs.is_empty() {
        return Err(Error::InvalidFilter(
            "propagation needs at least one coefficient".into(),
        ));
    }
    if e0.rows() != adj.node_count() {
        return Err(Error::DimensionMismatch {
            context: "propagate",
            expected: adj.node_count(),
            found: e0.rows(),
        });
    }
    let mut out = e0.scaled(coeffs[0]);
    if coeffs.len() == 1 {
        return Ok(out);
    }
    let mut z = e0.clone();
    let mut next = DenseMatrix::zeros(e0.rows(), e0.cols());
    for &c in &coeffs[1..] {
        adj.spmm_into(&z, &mut next)?;
        std::mem::swap(&mut z, &mut next);
        out.add_scaled(c, &z)?;
    }
    Ok(out)
}

/// The hop iterates `[E⁰, ÂE⁰, …, ÂⁿE⁰]`.
pub fn hop_embeddings(adj: &SparseAdjacency, e0: &DenseMatrix, n: usize) -> Result<Vec<DenseMatrix>> {
    let mut hops = Vec::with_capacity(n + 1);
    hops.push(e0.clone());
    for _ in 0..n {
        let next = adj.spmm(hops.last().expect("non-empty"))?;
        hops.push(next);
    }
    Ok(hops)
}

pub fn space_flip(e: &DenseMatrix) -> DenseMatrix {
    -e.clone()
}

/// `±E Eᵀ`; refuses graphs above `cap` nodes.
pub fn signal_matrix(e: &DenseMatrix, flipped: bool, cap: usize) -> Result<DenseMatrix> {
    if e.rows() > cap {
        return Err(Error::DenseCapExceeded { nodes: e.rows(), cap });
    }
    let s = e.matmul_transpose(e)?;
    Ok(if flipped { -s } else { s })
}

/// Initial embeddings, propagation coefficients and the cached propagated
/// table. The cache is an `Arc` swapped whole, so a reader holding the old
/// table never observes a half-written one.
#[derive(Clone, Debug)]
pub struct EmbeddingModel {
    user_count: usize,
    item_count: usize,
    e0: DenseMatrix,
    coefficients: Vec<f64>,
    space_flip: bool,
    cache: Option<Arc<DenseMatrix>>,
}

impl EmbeddingModel {
    pub fn new(
        user_count: usize,
        item_count: usize,
        e0: DenseMatrix,
        coefficients: Vec<f64>,
        space_flip: bool,
    ) -> Result<Self> {
        if e0.rows() != user_count + item_count {
            return Err(Error::DimensionMismatch {
                context: "EmbeddingModel rows",
                expected: user_count + item_count,
                found: e0.rows(),
            });
        }
        if coefficients.is_empty() {
            return Err(Error::InvalidFilter("model needs at least one coefficient".into()));
        }
        Ok(Self {
            user_count,
            item_count,
            e0,
            coefficients,
            space_flip,
            cache: None,
        })
    }

    pub fn user_count(&self) -> usize {
        self.user_count
    }

    pub fn item_count(&self) -> usize {
        self.item_count
    }

    pub fn dim(&self) -> usize {
        self.e0.cols()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn space_flip(&self) -> bool {
        self.space_flip
    }

    pub fn e0(&self) -> &DenseMatrix {
        &self.e0
    }

    /// Mutable access to `E⁰`; drops the propagated cache.
    pub fn e0_mut(&mut self) -> &mut DenseMatrix {
        self.cache = None;
        &mut self.e0
    }

    pub fn set_e0(&mut self, e0: DenseMatrix) -> Result<()> {
        if e0.rows() != self.e0.rows() || e0.cols() != self.e0.cols() {
            return Err(Error::DimensionMismatch {
                context: "EmbeddingModel::set_e0",
                expected: self.e0.rows() * self.e0.cols(),
                found: e0.rows() * e0.cols(),
            });
        }
        self.e0 = e0;
        self.cache = None;
        Ok(())
    }

    pub fn is_fresh(&self) -> bool {
        self.cache.is_some()
    }

    pub fn refresh(&mut self, adj: &SparseAdjacency) -> Result<()> {
        if adj.user_count() != self.user_count || adj.item_count() != self.item_count {
            return Err(Error::DimensionMismatch {
                context: "EmbeddingModel::refresh graph size",
                expected: self.user_count + self.item_count,
                found: adj.node_count(),
            });
        }
        let e = propagate(adj, &self.e0, &self.coefficients)?;
        self.cache = Some(Arc::new(e));
        Ok(())
    }

    pub fn propagated(&self) -> Result<&DenseMatrix> {
        self.cache.as_deref().ok_or(Error::StaleCache)
    }

    /// A shared handle on the current propagated table.
    pub fn snapshot(&self) -> Result<Arc<DenseMatrix>> {
        self.cache.clone().ok_or(Error::StaleCache)
    }

    fn check_user(&self, u: usize) -> Result<()> {
        if u >= self.user_count {
            return Err(Error::IndexOutOfRange {
                what: "user",
                index: u,
                count: self.user_count,
            });
        }
        Ok(())
    }

    /// `ŷ = ±e_u · e_i`, negative when the space flip is on.
    pub fn score(&self, u: usize, i: usize) -> Result<f64> {
        self.check_user(u)?;
        if i >= self.item_count {
            return Err(Error::IndexOutOfRange {
                what: "item",
                index: i,
                count: self.item_count,
            });
        }
        let e = self.propagated()?;
        let s = dot(e.row(u), e.row(self.user_count + i));
        Ok(if self.space_flip { -s } else { s })
    }

    /// Scores of every item for user `u`.
    pub fn item_scores(&self, u: usize) -> Result<Vec<f64>> {
        self.check_user(u)?;
        let e = self.propagated()?;
        let eu = e.row(u);
        let sign = if self.space_flip { -1.0 } else { 1.0 };
        Ok((0..self.item_count)
            .map(|i| sign * dot(eu, e.row(self.user_count + i)))
            .collect())
    }
}

const CHECKPOINT_MAGIC: &[u8; 8] = b"SGCFMDL\0";
const CHECKPOINT_VERSION: u32 = 1;

impl EmbeddingModel {
    /// Binary checkpoint (little-endian): magic, version, user count, item
    /// count, N, d, n, flip flag, `n+1` coefficients as f64, then `E⁰`
    /// row-major as f32.
    pub fn write_checkpoint<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(CHECKPOINT_MAGIC)?;
        w.write_all(&CHECKPOINT_VERSION.to_le_bytes())?;
        for v in [
            self.user_count,
            self.item_count,
            self.e0.rows(),
            self.e0.cols(),
            self.coefficients.len() - 1,
        ] {
            w.write_all(&(v as u64).to_le_bytes())?;
        }
        w.write_all(&[u8::from(self.space_flip)])?;
        for c in &self.coefficients {
            w.write_all(&c.to_le_bytes())?;
        }
        for v in self.e0.as_slice() {
            w.write_all(&(*v as f32).to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_checkpoint<R: Read>(mut r: R, source: &Path) -> Result<Self> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != CHECKPOINT_MAGIC {
            return Err(Error::format(source, "not a model checkpoint"));
        }
        let mut b4 = [0u8; 4];
        r.read_exact(&mut b4)?;
        let version = u32::from_le_bytes(b4);
        if version != CHECKPOINT_VERSION {
            return Err(Error::format(
                source,
                format!("unsupported checkpoint version {version}"),
            ));
        }
        let mut header = [0usize; 5];
        for h in &mut header {
            let mut b = [0u8; 8];
            r.read_exact(&mut b)?;
            *h = u64::from_le_bytes(b) as usize;
        }
        let [users, items, n_nodes, dim, degree] = header;
        if n_nodes != users + items {
            return Err(Error::format(source, "node count does not match user + item counts"));
        }
        let mut flag = [0u8; 1];
        r.read_exact(&mut flag)?;
        let mut coefficients = Vec::with_capacity(degree + 1);
        for _ in 0..=degree {
            let mut b = [0u8; 8];
            r.read_exact(&mut b)?;
            coefficients.push(f64::from_le_bytes(b));
        }
        let mut data = Vec::with_capacity(n_nodes * dim);
        let mut b = [0u8; 4];
        for _ in 0..n_nodes * dim {
            r.read_exact(&mut b)?;
            data.push(f32::from_le_bytes(b) as f64);
        }
        let e0 = DenseMatrix::from_vec(n_nodes, dim, data)?;
        Self::new(users, items, e0, coefficients, flag[0] != 0)
    }
}
