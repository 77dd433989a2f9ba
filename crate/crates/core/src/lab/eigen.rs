//! Cyclic Jacobi-rotation eigensolver for small symmetric matrices.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::graph::SparseAdjacency;

/// Off-diagonal Frobenius norm at which the sweeps stop.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;
/// Largest tolerated `max |A − Aᵀ|` on input.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// `A = U diag(Λ) Uᵀ` with ascending eigenvalues and orthonormal columns,
/// each column signed so its largest-magnitude entry is positive.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseSpectrum {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: DenseMatrix,
}

impl DenseSpectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `U diag(f(λ)) Uᵀ`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> DenseMatrix {
        let n = self.len();
        let u = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = DenseMatrix::zeros(n, n);
        for r in 0..n {
            let ur = u.row(r);
            for c in r..n {
                let uc = u.row(c);
                let v: f64 = (0..n).map(|k| ur[k] * fl[k] * uc[k]).sum();
                out.set(r, c, v);
                out.set(c, r, v);
            }
        }
        out
    }

    /// `max |UᵀU − I|`.
    pub fn orthogonality_error(&self) -> f64 {
        let u = &self.eigenvectors;
        let utu = u.transpose().matmul(u).expect("square");
        utu.max_abs_diff(&DenseMatrix::identity(self.len()))
            .expect("same shape")
    }

    /// `max |A − UΛUᵀ|`.
    pub fn reconstruction_error(&self, a: &DenseMatrix) -> Result<f64> {
        self.apply(|l| l).max_abs_diff(a)
    }

    /// `max |λₖ + λ_{N−1−k}|`: zero when the spectrum is symmetric about 0.
    pub fn symmetry_error(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|k| (self.eigenvalues[k] + self.eigenvalues[n - 1 - k]).abs())
            .fold(0.0, f64::max)
    }
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a.get(r, c) * a.get(r, c);
            }
        }
    }
    s.sqrt()
}

/// Full eigendecomposition of a symmetric matrix by cyclic row-order sweeps
/// of Jacobi rotations.
pub fn symmetric_eigen(a: &DenseMatrix) -> Result<DenseSpectrum> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::DimensionMismatch {
            context: "eigendecomposition needs a square matrix",
            expected: n,
            found: a.cols(),
        });
    }
    let asym = a.asymmetry();
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    let mut m = a.clone();
    let mut v = DenseMatrix::identity(n);
    let mut converged = off_diagonal_norm(&m) < OFF_DIAGONAL_TOL;
    let mut sweep = 0;
    while !converged {
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (m.get(q, q) - m.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut m, &mut v, p, q, c, s);
            }
        }
        sweep += 1;
        converged = off_diagonal_norm(&m) < OFF_DIAGONAL_TOL;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m.get(x, x).total_cmp(&m.get(y, y)).then(x.cmp(&y)));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| m.get(k, k)).collect();
    let mut eigenvectors = DenseMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let lead = (0..n).fold(0, |best, r| {
            if v.get(r, k).abs() > v.get(best, k).abs() {
                r
            } else {
                best
            }
        });
        let sign = if v.get(lead, k) < 0.0 { -1.0 } else { 1.0 };
        for r in 0..n {
            eigenvectors.set(r, col, sign * v.get(r, k));
        }
    }
    Ok(DenseSpectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// `M ← JᵀMJ`, `V ← VJ` for the rotation `J` in the `(p, q)` plane, which
/// zeroes `M[p, q]`.
fn rotate(m: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize, c: f64, s: f64) {
    let n = m.rows();
    for k in 0..n {
        let (mkp, mkq) = (m.get(k, p), m.get(k, q));
        m.set(k, p, c * mkp - s * mkq);
        m.set(k, q, s * mkp + c * mkq);
    }
    for k in 0..n {
        let (mpk, mqk) = (m.get(p, k), m.get(q, k));
        m.set(p, k, c * mpk - s * mqk);
        m.set(q, k, s * mpk + c * mqk);
    }
    m.set(p, q, 0.0);
    m.set(q, p, 0.0);
    for k in 0..n {
        let (vkp, vkq) = (v.get(k, p), v.get(k, q));
        v.set(k, p, c * vkp - s * vkq);
        v.set(k, q, s * vkp + c * vkq);
    }
}

/// Dense spectrum of `Â`; refuses graphs above `cap` nodes.
pub fn dense_eigendecomposition(adj: &SparseAdjacency, cap: usize) -> Result<DenseSpectrum> {
    if adj.node_count() > cap {
        return Err(Error::DenseCapExceeded {
            nodes: adj.node_count(),
            cap,
        });
    }
    symmetric_eigen(&adj.to_dense())
}
