//! Dense complex state tensors and the SVD every construction is built on.
//!
//! Multi-indices flatten row-major with the first index slowest. A cut `n`
//! groups the first `n` indices into matrix rows and the remaining ones into
//! columns; with row-major storage this is a pure reinterpretation of the
//! buffer.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Singular values this close (relative to the largest) count as one block.
const DEGENERACY_TOL: f64 = 1e-12;

/// Default rank-cut tolerance, relative to the largest singular value.
pub const DEFAULT_RANK_TOL: f64 = 1e-12;

/// Complex coefficient tensor `c[k_1, ..., k_N]` over finite physical dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    shape: Vec<usize>,
    data: Vec<C64>,
}

impl DenseTensor {
    pub fn new(shape: Vec<usize>, data: Vec<C64>) -> Result<Self> {
        if shape.is_empty() || shape.contains(&0) {
            return Err(Error::EmptyShape);
        }
        let expected: usize = shape.iter().product();
        if expected != data.len() {
            return Err(Error::ShapeMismatch {
                expected,
                actual: data.len(),
            });
        }
        Ok(Self { shape, data })
    }

    pub fn from_real(shape: Vec<usize>, data: &[f64]) -> Result<Self> {
        Self::new(shape, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(shape: Vec<usize>) -> Result<Self> {
        let len = shape.iter().product();
        Self::new(shape, vec![C64::new(0.0, 0.0); len])
    }

    /// Computational basis state with a single unit entry at `index`.
    pub fn basis_state(shape: Vec<usize>, index: &[usize]) -> Result<Self> {
        let mut t = Self::zeros(shape)?;
        let flat = t.flat_index(index)?;
        t.data[flat] = C64::new(1.0, 0.0);
        Ok(t)
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn ndim(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn flat_index(&self, index: &[usize]) -> Result<usize> {
        flat_index(&self.shape, index)
    }

    pub fn get(&self, index: &[usize]) -> Result<C64> {
        Ok(self.data[self.flat_index(index)?])
    }

    /// Euclidean (Hilbert-space) norm of the coefficients.
    pub fn norm(&self) -> f64 {
        norm(&self.data)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Returns a copy scaled to unit norm.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroState);
        }
        Ok(Self {
            shape: self.shape.clone(),
            data: self.data.iter().map(|z| z / n).collect(),
        })
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Unfolds the tensor at `cut` into a `(d_1···d_cut) × (d_{cut+1}···d_N)` matrix.
    pub fn matricize(&self, cut: usize) -> Result<CMatrix> {
        let (rows, cols) = cut_dims(&self.shape, cut)?;
        Ok(CMatrix::from_row_slice(rows, cols, &self.data))
    }

    /// Inverse of [`DenseTensor::matricize`].
    pub fn dematricize(m: &CMatrix, shape: Vec<usize>, cut: usize) -> Result<Self> {
        if shape.is_empty() || shape.contains(&0) {
            return Err(Error::EmptyShape);
        }
        let (rows, cols) = cut_dims(&shape, cut)?;
        if m.nrows() != rows || m.ncols() != cols {
            return Err(Error::ShapeMismatch {
                expected: rows * cols,
                actual: m.len(),
            });
        }
        Self::new(shape, row_major(m))
    }
}

/// Row-major flattening of `index` within `shape`.
pub fn flat_index(shape: &[usize], index: &[usize]) -> Result<usize> {
    if index.len() != shape.len() {
        return Err(Error::LengthMismatch {
            expected: shape.len(),
            actual: index.len(),
        });
    }
    let mut flat = 0;
    for (&k, &d) in index.iter().zip(shape) {
        if k >= d {
            return Err(Error::IndexOutOfRange { index: k, dim: d });
        }
        flat = flat * d + k;
    }
    Ok(flat)
}

/// Inverse of [`flat_index`].
pub fn unflatten(shape: &[usize], mut flat: usize) -> Vec<usize> {
    let mut index = vec![0; shape.len()];
    for (slot, &d) in index.iter_mut().zip(shape).rev() {
        *slot = flat % d;
        flat /= d;
    }
    index
}

fn cut_dims(shape: &[usize], cut: usize) -> Result<(usize, usize)> {
    let n = shape.len();
    if cut == 0 || cut >= n {
        return Err(Error::CutOutOfRange {
            cut,
            max: n.saturating_sub(1),
        });
    }
    Ok((
        shape[..cut].iter().product(),
        shape[cut..].iter().product(),
    ))
}

pub(crate) fn norm(data: &[C64]) -> f64 {
    data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entry modulus.
pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Copies a matrix into a row-major buffer.
pub(crate) fn row_major(m: &CMatrix) -> Vec<C64> {
    let mut out = Vec::with_capacity(m.len());
    for r in 0..m.nrows() {
        out.extend(m.row(r).iter());
    }
    out
}

/// Thin SVD with singular values below the rank cut removed.
#[derive(Debug, Clone)]
pub struct SvdResult {
    /// Columns are left singular vectors.
    pub u: CMatrix,
    /// Nonincreasing, strictly above the rank cut.
    pub s: Vec<f64>,
    /// Rows are conjugated right singular vectors.
    pub vh: CMatrix,
    pub rank: usize,
}

impl SvdResult {
    /// `u · diag(s) · vh`.
    pub fn reconstruct(&self) -> CMatrix {
        let mut us = self.u.clone();
        for (k, &s) in self.s.iter().enumerate() {
            us.column_mut(k).scale_mut(s);
        }
        us * &self.vh
    }

    /// Keeps the leading `keep` triplets.
    pub fn truncated(&self, keep: usize) -> SvdResult {
        let keep = keep.min(self.rank);
        SvdResult {
            u: self.u.columns(0, keep).into_owned(),
            s: self.s[..keep].to_vec(),
            vh: self.vh.rows(0, keep).into_owned(),
            rank: keep,
        }
    }
}

/// Thin SVD of `m`. Singular values `≤ rank_tol · s_max` are discarded.
///
/// Each `(u column, vh row)` pair is rephased so the largest-magnitude entry of
/// the `u` column is real and positive. Blocks of equal singular values are
/// first rotated to a solver-independent basis.
pub fn svd(m: &CMatrix, rank_tol: f64) -> Result<SvdResult> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyShape);
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::ConvergenceFailure { rows, cols });
    }
    // nalgebra's bidiagonal SVD mis-converges on many rank-deficient inputs;
    // faer's is used for the factorization itself.
    let a = faer::Mat::<C64>::from_fn(rows, cols, |i, j| m[(i, j)]);
    let dec = a.thin_svd().map_err(|_| Error::ConvergenceFailure { rows, cols })?;
    let k = rows.min(cols);
    let values: Vec<f64> = (0..k).map(|i| dec.S().column_vector()[i].re).collect();
    let u = CMatrix::from_fn(rows, k, |i, j| dec.U()[(i, j)]);
    let vt = CMatrix::from_fn(k, cols, |i, j| dec.V()[(j, i)].conj());

    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let largest = order.first().map(|&i| values[i]).unwrap_or(0.0);
    let cutoff = rank_tol * largest;
    let kept: Vec<usize> = order
        .into_iter()
        .filter(|&i| values[i] > cutoff && values[i] > 0.0)
        .collect();
    let rank = kept.len();

    let mut u_out = CMatrix::zeros(rows, rank);
    let mut vh_out = CMatrix::zeros(rank, cols);
    let s_out: Vec<f64> = kept.iter().map(|&i| values[i]).collect();
    for (slot, &i) in kept.iter().enumerate() {
        u_out.set_column(slot, &u.column(i));
        vh_out.set_row(slot, &vt.row(i));
    }

    let mut start = 0;
    while start < rank {
        let mut end = start + 1;
        while end < rank && s_out[end - 1] - s_out[end] <= DEGENERACY_TOL * largest {
            end += 1;
        }
        if end - start > 1 {
            align_degenerate(&mut u_out, &mut vh_out, start, end - start);
        }
        start = end;
    }

    for slot in 0..rank {
        let mut pivot = C64::new(0.0, 0.0);
        for z in u_out.column(slot).iter() {
            if z.norm() > pivot.norm() {
                pivot = *z;
            }
        }
        let phase = if pivot.norm() > 0.0 {
            pivot.conj() / pivot.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        u_out.column_mut(slot).iter_mut().for_each(|z| *z *= phase);
        vh_out.row_mut(slot).iter_mut().for_each(|z| *z *= phase.conj());
    }
    Ok(SvdResult {
        u: u_out,
        s: s_out,
        vh: vh_out,
        rank,
    })
}

/// Rotates a block of equal singular values so its `u` columns are the
/// projections of standard basis vectors, picked greedily by largest residual
/// (lowest row first on ties). Any basis of the block is a valid SVD; this one
/// does not depend on the solver, so bases at neighbouring cuts line up.
fn align_degenerate(u: &mut CMatrix, vh: &mut CMatrix, start: usize, len: usize) {
    let block = u.columns(start, len).into_owned();
    // coordinates of P e_r in the block basis
    let coords: Vec<DVector<C64>> = (0..block.nrows()).map(|r| block.row(r).adjoint()).collect();
    let mut basis: Vec<DVector<C64>> = Vec::with_capacity(len);
    while basis.len() < len {
        let mut best: Option<(f64, DVector<C64>)> = None;
        for c in &coords {
            let mut v = c.clone();
            for _ in 0..2 {
                for b in &basis {
                    let overlap = b.dotc(&v);
                    v -= b * overlap;
                }
            }
            let n = v.norm();
            if best.as_ref().is_none_or(|(bn, _)| n > bn + 1e-12) {
                best = Some((n, v));
            }
        }
        let (n, v) = best.expect("block has rows");
        basis.push(v / C64::new(n, 0.0));
    }
    let q = CMatrix::from_columns(&basis);
    let rotated_u = &block * &q;
    let rotated_vh = q.adjoint() * vh.rows(start, len);
    u.columns_mut(start, len).copy_from(&rotated_u);
    vh.rows_mut(start, len).copy_from(&rotated_vh);
}

/// Hilbert-norm error of keeping the leading `keep` singular values:
/// `sqrt(Σ_{k ≥ keep} s_k²)`.
pub fn low_rank_error(s: &[f64], keep: usize) -> Result<f64> {
    if keep > s.len() {
        return Err(Error::KeepOutOfRange {
            keep,
            len: s.len(),
        });
    }
    // smallest first for a stable tail sum
    // (an empty f64 `sum` is -0.0, hence the explicit fold)
    Ok(s[keep..].iter().rev().fold(0.0, |acc, x| acc + x * x).sqrt())
}
