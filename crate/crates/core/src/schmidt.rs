//! Bipartite Schmidt decomposition `ψ = Σ_k λ_k e_k ⊗ f_k` across a cut.

use crate::error::{Error, Result};
use crate::tensor::{svd, CMatrix, DenseTensor};

#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Strictly positive, nonincreasing.
    pub coefficients: Vec<f64>,
    /// Column `k` is `e_k` over the flattened left factor `(d_1···d_cut)`.
    pub left_vectors: CMatrix,
    /// Column `k` is `f_k` over the flattened right factor.
    pub right_vectors: CMatrix,
    pub cut: usize,
}

/// Schmidt decomposition of `t` across `cut`, via the SVD of the unfolding.
/// Modes at or below `rank_tol · λ_max` are dropped, so the returned rank is the
/// numerical Schmidt rank.
pub fn schmidt_decompose(t: &DenseTensor, cut: usize, rank_tol: f64) -> Result<SchmidtDecomposition> {
    let m = t.matricize(cut)?;
    let r = svd(&m, rank_tol)?;
    Ok(SchmidtDecomposition {
        coefficients: r.s,
        left_vectors: r.u,
        // f_k[j] = vh[k, j] so that m = Σ λ_k e_k f_kᵀ with no conjugation
        right_vectors: r.vh.transpose(),
        cut,
    })
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Von Neumann entropy in nats of the normalized weights.
    pub fn entropy(&self) -> Result<f64> {
        entropy(&self.coefficients)
    }

    /// Assembles `Σ_k λ_k e_k ⊗ f_k` as a tensor of the given shape.
    pub fn reconstruct(&self, shape: &[usize]) -> Result<DenseTensor> {
        let rows: usize = shape.get(..self.cut).map(|s| s.iter().product()).unwrap_or(0);
        let cols: usize = shape.get(self.cut..).map(|s| s.iter().product()).unwrap_or(0);
        if rows != self.left_vectors.nrows()
            || cols != self.right_vectors.nrows()
            || self.left_vectors.ncols() != self.rank()
            || self.right_vectors.ncols() != self.rank()
        {
            return Err(Error::ShapeMismatch {
                expected: self.left_vectors.nrows() * self.right_vectors.nrows(),
                actual: rows * cols,
            });
        }
        let mut scaled = self.left_vectors.clone();
        for (k, &l) in self.coefficients.iter().enumerate() {
            scaled.column_mut(k).scale_mut(l);
        }
        let m = scaled * self.right_vectors.transpose();
        DenseTensor::dematricize(&m, shape.to_vec(), self.cut)
    }
}

/// `−Σ p_k ln p_k` with `p_k = λ_k² / Σλ²`.
pub fn entropy(coefficients: &[f64]) -> Result<f64> {
    let total: f64 = coefficients.iter().map(|l| l * l).sum();
    if total <= 0.0 {
        return Err(Error::ZeroState);
    }
    Ok(coefficients
        .iter()
        .map(|l| l * l / total)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum())
}

#[cfg(test)]
#[allow(clippy::approx_constant)] // tabulated 0.70710678 values
mod tests {
    use super::*;
    use crate::tensor::{max_abs, C64, DEFAULT_RANK_TOL};
    use crate::test_util::{random_tensor, random_unitary, rng};
    use nalgebra::SymmetricEigen;

    const R: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn assert_orthonormal(m: &CMatrix) {
        let k = m.ncols();
        assert!(max_abs(&(m.adjoint() * m - CMatrix::identity(k, k))) < 1e-12);
    }

    #[test]
    fn bell_state_is_maximally_entangled() {
        let bell = DenseTensor::from_real(vec![2, 2], &[R, 0.0, 0.0, R]).unwrap();
        let sd = schmidt_decompose(&bell, 1, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(sd.rank(), 2);
        for l in &sd.coefficients {
            assert!((l - 0.70710678).abs() < 1e-8);
        }
        assert!((sd.entropy().unwrap() - std::f64::consts::LN_2).abs() < 1e-12);
        let back = sd.reconstruct(&[2, 2]).unwrap();
        assert!(back.distance(&bell).unwrap() < 1e-12);
    }

    #[test]
    fn product_state_has_rank_one() {
        let t = DenseTensor::from_real(vec![2, 2], &[R, R, 0.0, 0.0]).unwrap();
        let sd = schmidt_decompose(&t, 1, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(sd.rank(), 1);
        assert!((sd.coefficients[0] - 1.0).abs() < 1e-14);
        assert_eq!(sd.entropy().unwrap(), 0.0);
    }

    #[test]
    fn ghz_cut_two() {
        let mut data = [0.0; 8];
        data[0] = R;
        data[7] = R;
        let ghz = DenseTensor::from_real(vec![2, 2, 2], &data).unwrap();
        let sd = schmidt_decompose(&ghz, 2, DEFAULT_RANK_TOL).unwrap();
        // 4x2 unfolding has unit-norm columns e0/√2 and e3/√2
        assert_eq!(sd.coefficients.len(), 2);
        assert!(sd.coefficients.iter().all(|l| (l - R).abs() < 1e-14));
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&[1.0]).unwrap(), 0.0);
        assert!((entropy(&[R, R]).unwrap() - 0.69314718).abs() < 1e-8);
        let direct = -0.64 * 0.64f64.ln() - 0.36 * 0.36f64.ln();
        assert!((entropy(&[0.8, 0.6]).unwrap() - direct).abs() < 1e-14);
        assert!((direct - 0.6534).abs() < 1e-4);
        assert_eq!(entropy(&[0.0]), Err(Error::ZeroState));
        assert_eq!(entropy(&[]), Err(Error::ZeroState));
    }

    #[test]
    fn reconstruct_single_term() {
        let sd = SchmidtDecomposition {
            coefficients: vec![1.0],
            left_vectors: CMatrix::from_column_slice(2, 1, &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]),
            right_vectors: CMatrix::from_column_slice(2, 1, &[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]),
            cut: 1,
        };
        let t = sd.reconstruct(&[2, 2]).unwrap();
        assert_eq!(t, DenseTensor::basis_state(vec![2, 2], &[0, 1]).unwrap());
        assert!(matches!(sd.reconstruct(&[3, 2]), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn random_round_trips_and_orthonormality() {
        let mut rng = rng(10);
        for shape in [vec![3, 4], vec![2, 3, 4], vec![5, 2, 2, 3], vec![10, 10, 10, 10]] {
            let t = random_tensor(&mut rng, &shape);
            for cut in 1..shape.len() {
                let sd = schmidt_decompose(&t, cut, DEFAULT_RANK_TOL).unwrap();
                assert_orthonormal(&sd.left_vectors);
                assert_orthonormal(&sd.right_vectors);
                let back = sd.reconstruct(&shape).unwrap();
                assert!(back.distance(&t).unwrap() < 1e-10 * t.norm());
                let sum: f64 = sd.coefficients.iter().map(|l| l * l).sum();
                assert!((sum - t.norm_sqr()).abs() < 1e-10 * t.norm_sqr());
            }
        }
    }

    #[test]
    fn spectrum_matches_reduced_gram_eigenvalues() {
        let mut rng = rng(11);
        let t = random_tensor(&mut rng, &[3, 2, 5]);
        for cut in 1..3 {
            let sd = schmidt_decompose(&t, cut, DEFAULT_RANK_TOL).unwrap();
            let m = t.matricize(cut).unwrap();
            let gram = &m * m.adjoint();
            let mut eig: Vec<f64> = SymmetricEigen::new(gram).eigenvalues.iter().copied().collect();
            eig.sort_by(|a, b| b.total_cmp(a));
            for (k, l) in sd.coefficients.iter().enumerate() {
                assert!((l * l - eig[k]).abs() < 1e-8);
            }
            assert!(eig[sd.rank()..].iter().all(|e| e.abs() < 1e-8));
        }
    }

    #[test]
    fn spectrum_is_invariant_under_local_unitaries() {
        let mut rng = rng(12);
        let t = random_tensor(&mut rng, &[4, 3]);
        let u = random_unitary(&mut rng, 4);
        let v = random_unitary(&mut rng, 3);
        let m = t.matricize(1).unwrap();
        let rotated = DenseTensor::dematricize(&(&u * m * v.transpose()), vec![4, 3], 1).unwrap();
        let a = schmidt_decompose(&t, 1, DEFAULT_RANK_TOL).unwrap();
        let b = schmidt_decompose(&rotated, 1, DEFAULT_RANK_TOL).unwrap();
        for (x, y) in a.coefficients.iter().zip(&b.coefficients) {
            assert!((x - y).abs() < 1e-10);
        }
    }
}
