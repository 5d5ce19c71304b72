//! Eigendecomposition of complex Hermitian matrices.
//!
//! A cyclic Jacobi iteration with phase-absorbed plane rotations. Each
//! off-diagonal entry a_pq = r·e^{iφ} is zeroed by the unitary
//! J = diag(1, e^{-iφ}) · G(θ) where G is the classical real rotation for
//! the symmetrized 2x2 pivot. Jacobi is slower than tridiagonalization but
//! has excellent accuracy and is simple to keep exactly unitary, which is
//! what the spectral-projection machinery downstream cares about.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues (ascending) and a unitary matrix of eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Column `j` of the eigenvector matrix.
    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        (0..self.vectors.rows())
            .map(|i| self.vectors[(i, j)])
            .collect()
    }

    /// Spectral projection Σ v v* over the eigenvector columns in `indices`.
    pub fn spectral_projection(&self, indices: std::ops::Range<usize>) -> ComplexMatrix {
        let n = self.vectors.rows();
        let mut p = ComplexMatrix::zeros(n, n);
        for j in indices {
            for r in 0..n {
                let vr = self.vectors[(r, j)];
                for c in 0..n {
                    p[(r, c)] += vr * self.vectors[(c, j)].conj();
                }
            }
        }
        p
    }
}

/// Diagonalizes a Hermitian matrix. The input is symmetrized first; a
/// significantly non-Hermitian input is an error.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::InvalidArgument(
            "eigen: matrix must be square".into(),
        ));
    }
    let n = h.rows();
    let scale = h.norm().max(1.0);
    let skew = h.sub(&h.adjoint())?.norm();
    if skew > 1e-8 * scale {
        return Err(Error::InvalidArgument(format!(
            "eigen: matrix is not Hermitian (skew norm {skew:.3e})"
        )));
    }
    let mut a = h.add(&h.adjoint())?.scale_re(0.5);
    let mut v = ComplexMatrix::identity(n);

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, new_col)] = v[(r, old_col)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r; // e^{iφ}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // J = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] acting on columns (p, q);
    // rows are updated with J†.
    let n = a.rows();
    let jc = Complex64::new(c, 0.0);
    let js = Complex64::new(s, 0.0);
    let jsp = -js * phase.conj();
    let jcp = jc * phase.conj();

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jc + akq * jsp;
        a[(k, q)] = akp * js + akq * jcp;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jc * apk + jsp.conj() * aqk;
        a[(q, k)] = js * apk + jcp.conj() * aqk;
    }
    // Clean the pivot pair to keep the matrix numerically Hermitian.
    a[(p, q)] = Complex64::ZERO;
    a[(q, p)] = Complex64::ZERO;
    let app_new = a[(p, p)].re;
    let aqq_new = a[(q, q)].re;
    a[(p, p)] = Complex64::new(app_new, 0.0);
    a[(q, q)] = Complex64::new(aqq_new, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jc + vkq * jsp;
        v[(k, q)] = vkp * js + vkq * jcp;
    }
}

/// Splits a sorted eigenvalue list into contiguous clusters separated by
/// gaps strictly larger than `gap`.
pub fn cluster_eigenvalues(values: &[f64], gap: f64) -> Vec<std::ops::Range<usize>> {
    let mut clusters = Vec::new();
    let mut start = 0;
    for i in 1..values.len() {
        if values[i] - values[i - 1] > gap {
            clusters.push(start..i);
            start = i;
        }
    }
    if !values.is_empty() {
        clusters.push(start..values.len());
    }
    clusters
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn random_hermitian(n: usize, rng: &mut SplitMix64) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = rng.next_complex();
            }
        }
        m.add(&m.adjoint()).unwrap().scale_re(0.5)
    }

    #[test]
    fn diagonal_matrix_is_fixed_point() {
        let d = ComplexMatrix::diag(&[
            Complex64::new(3.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.5, 0.0),
        ]);
        let e = hermitian_eigen(&d).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-12);
        assert!((e.values[1] - 0.5).abs() < 1e-12);
        assert!((e.values[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn known_two_by_two() {
        // [[0, -i], [i, 0]] has eigenvalues ±1.
        let mut h = ComplexMatrix::zeros(2, 2);
        h[(0, 1)] = Complex64::new(0.0, -1.0);
        h[(1, 0)] = Complex64::new(0.0, 1.0);
        let e = hermitian_eigen(&h).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-12);
        assert!((e.values[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reconstructs_random_matrices() {
        let mut rng = SplitMix64::new(11);
        for n in [1usize, 2, 3, 5, 8, 13] {
            let h = random_hermitian(n, &mut rng);
            let e = hermitian_eigen(&h).unwrap();
            // V† V = I
            let vtv = e.vectors.adjoint().mul(&e.vectors).unwrap();
            assert!(vtv.distance(&ComplexMatrix::identity(n)) < 1e-11, "n={n}");
            // V diag(λ) V† = H
            let lam = ComplexMatrix::diag(
                &e.values
                    .iter()
                    .map(|&x| Complex64::new(x, 0.0))
                    .collect::<Vec<_>>(),
            );
            let rebuilt = e
                .vectors
                .mul(&lam)
                .unwrap()
                .mul(&e.vectors.adjoint())
                .unwrap();
            assert!(rebuilt.distance(&h) < 1e-10 * h.norm().max(1.0), "n={n}");
        }
    }

    #[test]
    fn spectral_projection_is_projection() {
        let mut rng = SplitMix64::new(5);
        let h = random_hermitian(6, &mut rng);
        let e = hermitian_eigen(&h).unwrap();
        let p = e.spectral_projection(0..3);
        assert!(p.distance(&p.adjoint()) < 1e-12);
        assert!(p.mul(&p).unwrap().distance(&p) < 1e-11);
        assert!((p.trace().re - 3.0).abs() < 1e-11);
    }

    #[test]
    fn clustering_splits_at_gaps() {
        let vals = [0.0, 1e-12, 2e-12, 1.0, 1.0 + 1e-12, 2.0];
        let clusters = cluster_eigenvalues(&vals, 1e-6);
        assert_eq!(clusters, vec![0..3, 3..5, 5..6]);
        assert!(cluster_eigenvalues(&[], 1.0).is_empty());
    }
}
