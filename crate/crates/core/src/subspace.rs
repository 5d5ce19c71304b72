//! Subspaces of N x N complex matrix space.
//!
//! A subspace is stored as an orthonormal basis under the Hilbert–Schmidt
//! inner product, together with its ambient dimension and the tolerance
//! used for every rank decision. All decisions are relative: a residual
//! counts as zero when it is at most `tol` times the relevant input norm.
//! One global knob keeps the numerics auditable.

use crate::error::{Error, Result};
use crate::matrix::{inner_raw, ComplexMatrix};

#[derive(Debug, Clone)]
pub struct OperatorSubspace {
    ambient: usize,
    basis: Vec<ComplexMatrix>,
    tol: f64,
}

impl OperatorSubspace {
    /// Orthonormalizes `mats` into a spanning basis. Uses modified
    /// Gram–Schmidt with one re-orthogonalization pass; vectors whose
    /// post-projection norm is at most `tol` times the largest input norm
    /// are discarded as dependent.
    pub fn span(ambient: usize, mats: &[ComplexMatrix], tol: f64) -> Result<Self> {
        let max_norm = mats.iter().map(|m| m.norm()).fold(0.0_f64, f64::max);
        Self::span_with_scale(ambient, mats, tol, max_norm)
    }

    /// Span with the dependence cutoff taken relative to an explicit
    /// scale instead of the largest input norm. Needed when the inputs
    /// are images of unit vectors under a map that may vanish: residuals
    /// of size tol·scale must be discarded even if every input is tiny.
    pub(crate) fn span_with_scale(
        ambient: usize,
        mats: &[ComplexMatrix],
        tol: f64,
        scale: f64,
    ) -> Result<Self> {
        for m in mats {
            if m.rows() != ambient || m.cols() != ambient {
                return Err(Error::ShapeMismatch(m.rows(), m.cols(), ambient, ambient));
            }
        }
        let cutoff = tol * scale;
        let mut space = OperatorSubspace {
            ambient,
            basis: Vec::new(),
            tol,
        };
        for m in mats {
            space.try_extend(m, cutoff);
        }
        Ok(space)
    }

    /// The zero subspace of the given ambient.
    pub fn zero(ambient: usize, tol: f64) -> Self {
        OperatorSubspace {
            ambient,
            basis: Vec::new(),
            tol,
        }
    }

    /// Wraps a basis that is already orthonormal (checked in debug builds).
    pub(crate) fn from_orthonormal(ambient: usize, basis: Vec<ComplexMatrix>, tol: f64) -> Self {
        #[cfg(debug_assertions)]
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let g = inner_raw(a, b);
                let expect = if i == j { 1.0 } else { 0.0 };
                debug_assert!(
                    (g - num_complex::Complex64::new(expect, 0.0)).norm() < 1e-8,
                    "basis not orthonormal at ({i},{j})"
                );
            }
        }
        OperatorSubspace {
            ambient,
            basis,
            tol,
        }
    }

    /// Projects `m` against the current basis (two passes) and extends the
    /// basis when the residual survives the cutoff. Returns true if added.
    pub(crate) fn try_extend(&mut self, m: &ComplexMatrix, cutoff: f64) -> bool {
        let mut v = m.clone();
        for _ in 0..2 {
            for b in &self.basis {
                let c = inner_raw(&v, b);
                v.axpy(-c, b);
            }
        }
        let norm = v.norm();
        if norm > cutoff && norm > 0.0 {
            self.basis.push(v.scale_re(1.0 / norm));
            true
        } else {
            false
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Orthogonal projection of `x` onto the subspace.
    pub fn project(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_ambient(x)?;
        let mut out = ComplexMatrix::zeros(self.ambient, self.ambient);
        for b in &self.basis {
            out.axpy(inner_raw(x, b), b);
        }
        Ok(out)
    }

    /// Coefficients of `x` against the orthonormal basis.
    pub fn coefficients(&self, x: &ComplexMatrix) -> Result<Vec<num_complex::Complex64>> {
        self.check_ambient(x)?;
        Ok(self.basis.iter().map(|b| inner_raw(x, b)).collect())
    }

    /// Reconstructs an ambient matrix from basis coefficients.
    pub fn from_coefficients(&self, coeffs: &[num_complex::Complex64]) -> ComplexMatrix {
        debug_assert_eq!(coeffs.len(), self.basis.len());
        let mut out = ComplexMatrix::zeros(self.ambient, self.ambient);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            out.axpy(*c, b);
        }
        out
    }

    /// ‖x − proj(x)‖: zero (up to tol·‖x‖) exactly when x lies in the span.
    pub fn membership_residual(&self, x: &ComplexMatrix) -> Result<f64> {
        self.check_ambient(x)?;
        let mut v = x.clone();
        // Two projection passes for the same reason orthonormalize uses a
        // re-orthogonalization pass.
        for _ in 0..2 {
            for b in &self.basis {
                let c = inner_raw(&v, b);
                v.axpy(-c, b);
            }
        }
        Ok(v.norm())
    }

    /// Membership decision at the stored tolerance, relative to ‖x‖.
    pub fn contains(&self, x: &ComplexMatrix) -> Result<bool> {
        let r = self.membership_residual(x)?;
        Ok(r <= self.tol * x.norm().max(1.0))
    }

    /// True when every basis element of `other` lies in `self`.
    pub fn contains_subspace(&self, other: &Self) -> Result<bool> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        for b in &other.basis {
            if self.membership_residual(b)? > self.effective_tol(other) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Orthonormalized span of all pairwise products of basis elements.
    /// In finite dimension this is the closed linear span.
    pub fn span_product(&self, other: &Self) -> Result<Self> {
        self.span_product_capped(other, usize::MAX)
    }

    /// Product span that stops accumulating once `cap` independent
    /// directions are found. Sound when the caller knows an upper bound on
    /// the product span (e.g. an enclosing ideal) and checks containment
    /// separately.
    pub fn span_product_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        let tol = self.tol.max(other.tol);
        let mut out = OperatorSubspace {
            ambient: self.ambient,
            basis: Vec::new(),
            tol,
        };
        // Products of unit vectors have norm at most 1; anything that
        // projects below tol is dependent.
        for a in &self.basis {
            for b in &other.basis {
                let p = a.mul(b)?;
                out.try_extend(&p, tol);
                if out.dim() >= cap {
                    return Ok(out);
                }
            }
        }
        Ok(out)
    }

    /// Orthonormalized sum (union of bases).
    pub fn span_sum(&self, other: &Self) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        let tol = self.tol.max(other.tol);
        let mut out = OperatorSubspace {
            ambient: self.ambient,
            basis: self.basis.clone(),
            tol,
        };
        for b in &other.basis {
            out.try_extend(b, tol);
        }
        Ok(out)
    }

    /// Image of the adjoint map.
    pub fn adjoint(&self) -> Self {
        OperatorSubspace {
            ambient: self.ambient,
            basis: self.basis.iter().map(ComplexMatrix::adjoint).collect(),
            tol: self.tol,
        }
    }

    fn effective_tol(&self, other: &Self) -> f64 {
        self.tol.max(other.tol)
    }

    fn check_ambient(&self, x: &ComplexMatrix) -> Result<()> {
        if x.rows() != self.ambient || x.cols() != self.ambient {
            return Err(Error::ShapeMismatch(
                x.rows(),
                x.cols(),
                self.ambient,
                self.ambient,
            ));
        }
        Ok(())
    }
}

/// Dimension equality plus mutual membership of bases.
pub fn subspace_equal(s: &OperatorSubspace, t: &OperatorSubspace) -> Result<bool> {
    if s.ambient_dim() != t.ambient_dim() {
        return Err(Error::AmbientMismatch(s.ambient_dim(), t.ambient_dim()));
    }
    Ok(s.dim() == t.dim() && s.contains_subspace(t)? && t.contains_subspace(s)?)
}

pub use crate::matrix::hs_inner as inner;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::hs_inner;
    use crate::DEFAULT_TOL;
    use num_complex::Complex64;

    fn unit(n: usize, i: usize, j: usize) -> ComplexMatrix {
        ComplexMatrix::unit(n, i, j)
    }

    #[test]
    fn dependent_inputs_collapse() {
        let id = ComplexMatrix::identity(2);
        let s = OperatorSubspace::span(2, &[id.clone(), id.scale_re(2.0)], DEFAULT_TOL).unwrap();
        assert_eq!(s.dim(), 1);
        // The surviving direction is I/sqrt(2).
        let b = &s.basis()[0];
        assert!((hs_inner(b, &id).unwrap().norm() - 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_inputs_kept() {
        let s = OperatorSubspace::span(2, &[unit(2, 0, 0), unit(2, 1, 1)], DEFAULT_TOL).unwrap();
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn residual_below_cut_is_discarded() {
        // Hand Gram–Schmidt: the second vector equals E00 + 1e-15 E11, and
        // after removing its E00 component only norm 1e-15 remains, far
        // below tol * max input norm.
        let tiny = unit(2, 0, 0).add(&unit(2, 1, 1).scale_re(1e-15)).unwrap();
        let s = OperatorSubspace::span(2, &[unit(2, 0, 0), tiny], 1e-9).unwrap();
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn empty_input_is_zero_subspace() {
        let s = OperatorSubspace::span(3, &[], DEFAULT_TOL).unwrap();
        assert_eq!(s.dim(), 0);
        let x = unit(3, 1, 2);
        assert!((s.membership_residual(&x).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn span_product_unit_times_space() {
        let idspan = OperatorSubspace::span(2, &[ComplexMatrix::identity(2)], DEFAULT_TOL).unwrap();
        let s = OperatorSubspace::span(2, &[unit(2, 0, 1), unit(2, 1, 1)], DEFAULT_TOL).unwrap();
        let p = idspan.span_product(&s).unwrap();
        assert!(subspace_equal(&p, &s).unwrap());
    }

    #[test]
    fn span_product_matrix_units() {
        let a = OperatorSubspace::span(2, &[unit(2, 0, 1)], DEFAULT_TOL).unwrap();
        let b = OperatorSubspace::span(2, &[unit(2, 1, 0)], DEFAULT_TOL).unwrap();
        let p = a.span_product(&b).unwrap();
        let expect = OperatorSubspace::span(2, &[unit(2, 0, 0)], DEFAULT_TOL).unwrap();
        assert!(subspace_equal(&p, &expect).unwrap());
    }

    #[test]
    fn span_sum_examples() {
        let a = OperatorSubspace::span(2, &[unit(2, 0, 0)], DEFAULT_TOL).unwrap();
        let b = OperatorSubspace::span(2, &[unit(2, 1, 1)], DEFAULT_TOL).unwrap();
        let zero = OperatorSubspace::zero(2, DEFAULT_TOL);
        assert!(subspace_equal(&a.span_sum(&zero).unwrap(), &a).unwrap());
        assert_eq!(a.span_sum(&b).unwrap().dim(), 2);
        assert!(subspace_equal(&a.span_sum(&a).unwrap(), &a).unwrap());
    }

    #[test]
    fn membership_examples() {
        let s = OperatorSubspace::span(2, &[unit(2, 0, 0), unit(2, 1, 1)], DEFAULT_TOL).unwrap();
        assert!(s.membership_residual(&s.basis()[0].clone()).unwrap() < 1e-14);
        assert!((s.membership_residual(&unit(2, 0, 1)).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn subspace_equality_examples() {
        let a = OperatorSubspace::span(2, &[unit(2, 0, 0)], DEFAULT_TOL).unwrap();
        let b = OperatorSubspace::span(2, &[unit(2, 1, 1)], DEFAULT_TOL).unwrap();
        assert!(subspace_equal(&a, &a).unwrap());
        assert!(!subspace_equal(&a, &b).unwrap());
    }

    #[test]
    fn ambient_mismatch_is_hard_error() {
        let a = OperatorSubspace::span(2, &[unit(2, 0, 0)], DEFAULT_TOL).unwrap();
        let b = OperatorSubspace::span(3, &[unit(3, 0, 0)], DEFAULT_TOL).unwrap();
        assert!(a.span_product(&b).is_err());
        assert!(a.span_sum(&b).is_err());
        assert!(subspace_equal(&a, &b).is_err());
    }

    #[test]
    fn orthonormalize_idempotent() {
        let mats = vec![
            unit(3, 0, 0).add(&unit(3, 1, 1)).unwrap(),
            unit(3, 0, 1)
                .add(&unit(3, 2, 2).scale(Complex64::new(0.0, 1.0)))
                .unwrap(),
            unit(3, 1, 0),
        ];
        let s = OperatorSubspace::span(3, &mats, DEFAULT_TOL).unwrap();
        let again = OperatorSubspace::span(3, s.basis(), DEFAULT_TOL).unwrap();
        assert_eq!(s.dim(), again.dim());
        assert!(subspace_equal(&s, &again).unwrap());
    }

    #[test]
    fn random_combinations_are_members() {
        let mut rng = crate::rng::SplitMix64::new(42);
        let mats: Vec<ComplexMatrix> = (0..4)
            .map(|_| {
                let mut m = ComplexMatrix::zeros(3, 3);
                for i in 0..3 {
                    for j in 0..3 {
                        m[(i, j)] = rng.next_complex();
                    }
                }
                m
            })
            .collect();
        let s = OperatorSubspace::span(3, &mats, DEFAULT_TOL).unwrap();
        for _ in 0..20 {
            let mut x = ComplexMatrix::zeros(3, 3);
            for b in s.basis() {
                x.axpy(rng.next_complex(), b);
            }
            let r = s.membership_residual(&x).unwrap();
            assert!(r <= 10.0 * DEFAULT_TOL * x.norm().max(1.0), "residual {r}");
        }
    }

    #[test]
    fn product_span_monotone_in_second_factor() {
        let mut rng = crate::rng::SplitMix64::new(9);
        let rand_space = |rng: &mut crate::rng::SplitMix64, k: usize| {
            let mats: Vec<ComplexMatrix> = (0..k)
                .map(|_| {
                    let mut m = ComplexMatrix::zeros(3, 3);
                    for i in 0..3 {
                        for j in 0..3 {
                            m[(i, j)] = rng.next_complex();
                        }
                    }
                    m
                })
                .collect();
            OperatorSubspace::span(3, &mats, DEFAULT_TOL).unwrap()
        };
        for _ in 0..10 {
            let s = rand_space(&mut rng, 2);
            let t = rand_space(&mut rng, 2);
            let t2 = rand_space(&mut rng, 1);
            let small = s.span_product(&t).unwrap();
            let big = s.span_product(&t.span_sum(&t2).unwrap()).unwrap();
            assert!(big.contains_subspace(&small).unwrap());
        }
    }
}
