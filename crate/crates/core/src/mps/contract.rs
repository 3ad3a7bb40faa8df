use crate::error::{Error, Result};
use crate::mps::{MatrixProductState, SiteTensor};
use crate::par;
use crate::tensor::{CMatrix, DenseTensor, C64};

/// Contracts the chain (bond weights included) into the full coefficient
/// tensor, one site at a time.
pub fn to_dense(m: &MatrixProductState) -> Result<DenseTensor> {
    // acc is a row-major (prefix × bond) block
    let mut acc = vec![C64::new(1.0, 0.0)];
    let mut bond = 1;
    for (n, site) in m.sites().iter().enumerate() {
        if site.left_dim() != bond {
            return Err(Error::DimChainBroken {
                bond: n,
                left: bond,
                right: site.left_dim(),
            });
        }
        if n > 0 {
            if let Some(weights) = &m.bonds()[n - 1] {
                scale_columns(&mut acc, weights.values());
            }
        }
        acc = absorb(&acc, bond, site);
        bond = site.right_dim();
    }
    DenseTensor::new(m.phys_dims(), acc)
}

/// `(prefix × a) · M[k](a, b)` → `((prefix, k) × b)`.
pub(crate) fn absorb(acc: &[C64], bond: usize, site: &SiteTensor) -> Vec<C64> {
    let d = site.phys_dim();
    let right = site.right_dim();
    let prefix = acc.len() / bond;
    let mut out = vec![C64::new(0.0, 0.0); prefix * d * right];
    par::for_each_chunk_mut(&mut out, d * right, |p, chunk| {
        let row = &acc[p * bond..(p + 1) * bond];
        for k in 0..d {
            let dst = &mut chunk[k * right..(k + 1) * right];
            for (a, x) in row.iter().enumerate() {
                if *x == C64::new(0.0, 0.0) {
                    continue;
                }
                for (b, y) in dst.iter_mut().enumerate() {
                    *y += x * site.get(k, a, b);
                }
            }
        }
    });
    out
}

/// Sites `1..=cut` (with any weights on bonds strictly inside) contracted
/// into a `(d_1···d_cut) × D_cut` matrix.
pub(crate) fn left_block(m: &MatrixProductState, cut: usize) -> CMatrix {
    let mut acc = vec![C64::new(1.0, 0.0)];
    let mut bond = 1;
    for (j, site) in m.sites()[..cut].iter().enumerate() {
        if j > 0 {
            if let Some(w) = &m.bonds()[j - 1] {
                scale_columns(&mut acc, w.values());
            }
        }
        acc = absorb(&acc, bond, site);
        bond = site.right_dim();
    }
    CMatrix::from_row_slice(acc.len() / bond, bond, &acc)
}

/// Sites `cut+1..=N` (with any weights on bonds strictly inside) contracted
/// into a `D_cut × (d_{cut+1}···d_N)` matrix.
pub(crate) fn right_block(m: &MatrixProductState, cut: usize) -> CMatrix {
    let sites = m.sites();
    let n = sites.len();
    let last = &sites[n - 1];
    // acc: row-major (bond × suffix)
    let mut acc: Vec<C64> = (0..last.left_dim())
        .flat_map(|a| (0..last.phys_dim()).map(move |k| (a, k)))
        .map(|(a, k)| last.get(k, a, 0))
        .collect();
    let mut suffix = last.phys_dim();
    for j in (cut..n - 1).rev() {
        let site = &sites[j];
        let (d, left, right) = (site.phys_dim(), site.left_dim(), site.right_dim());
        let weights = m.bonds()[j].as_ref().map(|b| b.values());
        let mut next = vec![C64::new(0.0, 0.0); left * d * suffix];
        par::for_each_chunk_mut(&mut next, suffix, |row, dst| {
            let (a, k) = (row / d, row % d);
            for b in 0..right {
                let w = weights.map_or(1.0, |w| w[b]);
                let g = site.get(k, a, b) * w;
                if g == C64::new(0.0, 0.0) {
                    continue;
                }
                for (y, x) in dst.iter_mut().zip(&acc[b * suffix..(b + 1) * suffix]) {
                    *y += g * x;
                }
            }
        });
        acc = next;
        suffix *= d;
    }
    CMatrix::from_row_slice(acc.len() / suffix, suffix, &acc)
}

fn scale_columns(acc: &mut [C64], weights: &[f64]) {
    for row in acc.chunks_mut(weights.len()) {
        for (x, w) in row.iter_mut().zip(weights) {
            *x *= w;
        }
    }
}

/// `y = M[k] x`: the site's `k`-th slice acting as a map from the right
/// auxiliary space to the left one.
pub fn apply_site_map(m: &MatrixProductState, site: usize, x: &[C64], k: usize) -> Result<Vec<C64>> {
    let s = m.site(site)?;
    apply_slice(s, x, k)
}

fn apply_slice(s: &SiteTensor, x: &[C64], k: usize) -> Result<Vec<C64>> {
    if k >= s.phys_dim() {
        return Err(Error::IndexOutOfRange {
            index: k,
            dim: s.phys_dim(),
        });
    }
    if x.len() != s.right_dim() {
        return Err(Error::LengthMismatch {
            expected: s.right_dim(),
            actual: x.len(),
        });
    }
    Ok((0..s.left_dim())
        .map(|l| x.iter().enumerate().map(|(r, v)| s.get(k, l, r) * v).sum())
        .collect())
}

/// Single coefficient `c[k_1, ..., k_N]` by composing the site maps from the
/// right boundary vector to the left boundary functional.
pub fn coefficient(m: &MatrixProductState, indices: &[usize]) -> Result<C64> {
    if indices.len() != m.len() {
        return Err(Error::LengthMismatch {
            expected: m.len(),
            actual: indices.len(),
        });
    }
    let mut x = vec![C64::new(1.0, 0.0)];
    for n in (0..m.len()).rev() {
        x = apply_slice(&m.sites()[n], &x, indices[n])?;
        if n > 0 {
            if let Some(weights) = &m.bonds()[n - 1] {
                for (v, w) in x.iter_mut().zip(weights.values()) {
                    *v *= w;
                }
            }
        }
    }
    Ok(x[0])
}
