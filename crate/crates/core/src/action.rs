//! Validated ℤₙ-actions on finite-dimensional algebras.
//!
//! An action is given by an ambient unitary U and a dimension-preserving
//! permutation π of the algebra's blocks; the automorphism is
//! α(x) = U·π(x)·U* = W x W* with W = U·P_π. Validation checks that α
//! maps the algebra into itself, is multiplicative and star-preserving on
//! the basis, and satisfies αⁿ = id (actions whose true order strictly
//! divides n are accepted).
//!
//! With ξ a primitive n-th root of unity, the k-th eigenspace is
//! A_k = {x : α(x) = ξᵏ x} and the spectral projection onto it is
//! P_k(x) = (1/n) Σᵢ ξ^{-ki} αⁱ(x). Eigenspaces are computed eagerly and
//! cached, so a validated action is freely shareable.

use num_complex::Complex64;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::matrix::{inner_raw, ComplexMatrix};
use crate::subspace::OperatorSubspace;

/// Concrete input format for an automorphism: conjugate by `unitary` after
/// permuting blocks.
#[derive(Debug, Clone)]
pub struct ActionSpec {
    pub unitary: ComplexMatrix,
    pub block_permutation: Vec<usize>,
}

impl ActionSpec {
    /// The identity spec for an algebra with the given number of blocks.
    pub fn identity(ambient: usize, blocks: usize) -> ActionSpec {
        ActionSpec {
            unitary: ComplexMatrix::identity(ambient),
            block_permutation: (0..blocks).collect(),
        }
    }
}

/// A validated order-n automorphism with cached eigenspace data.
#[derive(Debug, Clone)]
pub struct ZnAction {
    algebra: FiniteAlgebra,
    n: usize,
    xi_exponent: usize,
    /// Matrix of α on coefficient space (dim x dim, in the algebra basis).
    op_matrix: Vec<Vec<Complex64>>,
    eigenspaces: Vec<OperatorSubspace>,
    fixed: FiniteAlgebra,
    spec: ActionSpec,
}

impl ZnAction {
    /// Validates and builds an action of ℤₙ from its spec. ξ is fixed to
    /// exp(2πi·m/n) where m = `xi_exponent` must be coprime to n (the
    /// default primitive root is m = 1).
    pub fn new(
        algebra: FiniteAlgebra,
        spec: ActionSpec,
        n: usize,
        xi_exponent: usize,
    ) -> Result<ZnAction> {
        if n < 2 {
            return Err(Error::InvalidArgument(
                "group order n must be at least 2".into(),
            ));
        }
        if gcd(xi_exponent % n, n) != 1 {
            return Err(Error::InvalidArgument(format!(
                "xi exponent {xi_exponent} is not coprime to n = {n}"
            )));
        }
        let tol = algebra.tol();
        let ambient = algebra.ambient_dim();
        let u = &spec.unitary;
        if u.rows() != ambient || u.cols() != ambient {
            return Err(Error::ShapeMismatch(u.rows(), u.cols(), ambient, ambient));
        }
        let unitary_residual = u
            .mul(&u.adjoint())?
            .distance(&ComplexMatrix::identity(ambient));
        if unitary_residual > tol * (ambient as f64).sqrt().max(1.0) {
            return Err(Error::NotUnitary(unitary_residual));
        }

        let layout = algebra.layout().ok_or_else(|| {
            Error::InvalidArgument("actions require a multi-matrix block layout".into())
        })?;
        let perm = &spec.block_permutation;
        let blocks = layout.dims().len();
        if perm.len() != blocks {
            return Err(Error::BadPermutation(format!(
                "permutation length {} != block count {}",
                perm.len(),
                blocks
            )));
        }
        let mut seen = vec![false; blocks];
        for (i, &j) in perm.iter().enumerate() {
            if j >= blocks || seen[j] {
                return Err(Error::BadPermutation("not a permutation".into()));
            }
            seen[j] = true;
            if layout.dims()[i] != layout.dims()[j] {
                return Err(Error::BadPermutation(format!(
                    "block {} (dim {}) sent to block {} (dim {})",
                    i,
                    layout.dims()[i],
                    j,
                    layout.dims()[j]
                )));
            }
        }

        // W = U · P_π, with P_π moving block i's slot to block π(i)'s slot.
        let mut p = ComplexMatrix::zeros(ambient, ambient);
        for (i, &j) in perm.iter().enumerate() {
            let (oi, oj, d) = (layout.offsets()[i], layout.offsets()[j], layout.dims()[i]);
            for t in 0..d {
                p[(oj + t, oi + t)] = Complex64::ONE;
            }
        }
        let w = u.mul(&p)?;

        // α on the basis, with membership validation.
        let dim = algebra.dim();
        let mut op_matrix = vec![vec![Complex64::ZERO; dim]; dim];
        let wdag = w.adjoint();
        let mut images = Vec::with_capacity(dim);
        for (j, b) in algebra.space().basis().iter().enumerate() {
            let img = w.mul(b)?.mul(&wdag)?;
            let residual = algebra.space().membership_residual(&img)?;
            if residual > tol {
                return Err(Error::NotAnAutomorphism { residual, tol });
            }
            for (i, bi) in algebra.space().basis().iter().enumerate() {
                op_matrix[i][j] = inner_raw(&img, bi);
            }
            images.push(img);
        }

        // Multiplicative and star-preserving on the basis.
        for (j, b) in algebra.space().basis().iter().enumerate() {
            let star_gap = images[j]
                .adjoint()
                .distance(&apply_ambient(&w, &wdag, &b.adjoint())?);
            if star_gap > tol {
                return Err(Error::NotAnAutomorphism {
                    residual: star_gap,
                    tol,
                });
            }
            for (k, c) in algebra.space().basis().iter().enumerate() {
                let prod = apply_ambient(&w, &wdag, &b.mul(c)?)?;
                let mult_gap = prod.distance(&images[j].mul(&images[k])?);
                if mult_gap > tol {
                    return Err(Error::NotAnAutomorphism {
                        residual: mult_gap,
                        tol,
                    });
                }
            }
        }

        // Order check: αⁿ = id on coefficient space.
        let id = identity_coeffs(dim);
        let mut power = id.clone();
        for _ in 0..n {
            power = coeff_mul(&op_matrix, &power);
        }
        let order_residual = coeff_distance(&power, &id);
        if order_residual > tol * (dim as f64).sqrt().max(1.0) {
            return Err(Error::OrderMismatch {
                residual: order_residual,
            });
        }

        let mut action = ZnAction {
            algebra,
            n,
            xi_exponent: xi_exponent % n,
            op_matrix,
            eigenspaces: Vec::new(),
            fixed: FiniteAlgebra::zero(1, tol),
            spec,
        };
        action.eigenspaces = (0..n)
            .map(|k| action.compute_eigenspace(k))
            .collect::<Result<_>>()?;

        let total: usize = action.eigenspaces.iter().map(OperatorSubspace::dim).sum();
        if total != dim {
            return Err(Error::Internal(format!(
                "eigenspace dimensions sum to {total}, expected {dim}"
            )));
        }
        action.fixed =
            FiniteAlgebra::from_parts(action.eigenspaces[0].clone(), action.algebra.unit().clone());
        Ok(action)
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn spec(&self) -> &ActionSpec {
        &self.spec
    }

    pub fn tol(&self) -> f64 {
        self.algebra.tol()
    }

    pub fn xi_exponent(&self) -> usize {
        self.xi_exponent
    }

    /// ξ^e for the action's primitive root ξ = exp(2πi·m/n), computed from
    /// the exact rational angle.
    pub fn root(&self, e: i64) -> Complex64 {
        let n = self.n as i64;
        let m = self.xi_exponent as i64;
        let r = (m * e).rem_euclid(n);
        let angle = 2.0 * std::f64::consts::PI * (r as f64) / (n as f64);
        Complex64::new(angle.cos(), angle.sin())
    }

    /// α(x) for x in the algebra (membership checked at tolerance).
    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.apply_power(1, x)
    }

    /// αᵏ(x) for x in the algebra.
    pub fn apply_power(&self, k: usize, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let coeffs = self.coefficients_checked(x)?;
        let mut c = coeffs;
        for _ in 0..(k % self.n) {
            c = coeff_apply(&self.op_matrix, &c);
        }
        Ok(self.algebra.space().from_coefficients(&c))
    }

    /// Spectral projection P_k(x) = (1/n) Σᵢ ξ^{-ki} αⁱ(x). The result
    /// satisfies α(P_k x) = ξᵏ·P_k x.
    pub fn eigen_project(&self, k: usize, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let c = self.coefficients_checked(x)?;
        let out = self.project_coeffs(k, &c);
        Ok(self.algebra.space().from_coefficients(&out))
    }

    fn project_coeffs(&self, k: usize, coeffs: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut acc = vec![Complex64::ZERO; coeffs.len()];
        let mut power = coeffs.to_vec();
        for i in 0..n {
            let phase = self.root(-((k * i) as i64)).unscale(n as f64);
            for (a, p) in acc.iter_mut().zip(&power) {
                *a += phase * p;
            }
            if i + 1 < n {
                power = coeff_apply(&self.op_matrix, &power);
            }
        }
        acc
    }

    /// The k-th eigenspace A_k = {x : α(x) = ξᵏ x}, cached at
    /// construction.
    pub fn eigenspace(&self, k: usize) -> &OperatorSubspace {
        &self.eigenspaces[k % self.n]
    }

    fn compute_eigenspace(&self, k: usize) -> Result<OperatorSubspace> {
        let dim = self.algebra.dim();
        let mut images = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut e = vec![Complex64::ZERO; dim];
            e[j] = Complex64::ONE;
            let c = self.project_coeffs(k, &e);
            images.push(self.algebra.space().from_coefficients(&c));
        }
        OperatorSubspace::span_with_scale(self.algebra.ambient_dim(), &images, self.tol(), 1.0)
    }

    /// The fixed-point algebra A₀ (with the same unit as A).
    pub fn fixed_algebra(&self) -> &FiniteAlgebra {
        &self.fixed
    }

    /// The two-sided ideal I_k = Σ_{i=1}^{n-1-k} A_i·A_{n-i} of A₀,
    /// defined for 0 ≤ k ≤ n-2. The ideal property is verified; a failure
    /// indicates numeric breakdown and is reported as an internal error.
    pub fn product_ideal(&self, k: usize) -> Result<OperatorSubspace> {
        if k > self.n - 2 {
            return Err(Error::InvalidArgument(format!(
                "ideal index {k} out of range for n = {}",
                self.n
            )));
        }
        let mut ideal = OperatorSubspace::zero(self.algebra.ambient_dim(), self.tol());
        for i in 1..=(self.n - 1 - k) {
            let prod = self
                .eigenspace(i)
                .span_product(self.eigenspace(self.n - i))?;
            ideal = ideal.span_sum(&prod)?;
        }
        if !self.fixed.ideal_check(&ideal)? {
            return Err(Error::Internal(format!(
                "I_{k} failed the ideal check in the fixed-point algebra"
            )));
        }
        Ok(ideal)
    }

    fn coefficients_checked(&self, x: &ComplexMatrix) -> Result<Vec<Complex64>> {
        let residual = self.algebra.space().membership_residual(x)?;
        let tol = self.tol();
        if residual > tol * x.norm().max(1.0) {
            return Err(Error::NotInAlgebra { residual, tol });
        }
        self.algebra.space().coefficients(x)
    }
}

fn apply_ambient(
    w: &ComplexMatrix,
    wdag: &ComplexMatrix,
    x: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    w.mul(x)?.mul(wdag)
}

fn identity_coeffs(dim: usize) -> Vec<Vec<Complex64>> {
    let mut m = vec![vec![Complex64::ZERO; dim]; dim];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::ONE;
    }
    m
}

fn coeff_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let dim = a.len();
    let mut out = vec![vec![Complex64::ZERO; dim]; dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i][k];
            if aik == Complex64::ZERO {
                continue;
            }
            for j in 0..dim {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn coeff_apply(m: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn coeff_distance(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| (x - y).norm_sqr()))
        .sum::<f64>()
        .sqrt()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use crate::subspace::subspace_equal;
    use crate::DEFAULT_TOL;

    #[test]
    fn trivial_action_fixes_everything() {
        let act = samples::trivial_action(&[1], 2, DEFAULT_TOL, 1).unwrap();
        assert_eq!(act.eigenspace(0).dim(), 1);
        assert_eq!(act.eigenspace(1).dim(), 0);
        // P_0 is the identity, P_1 vanishes.
        let x = act.algebra().space().basis()[0].clone();
        assert!(act.eigen_project(0, &x).unwrap().distance(&x) < 1e-12);
        assert!(act.eigen_project(1, &x).unwrap().norm() < 1e-12);
    }

    #[test]
    fn swap_action_eigenspaces() {
        let act = samples::swap_c2(DEFAULT_TOL).unwrap();
        assert_eq!(act.eigenspace(0).dim(), 1);
        assert_eq!(act.eigenspace(1).dim(), 1);
        // A0 = {(a,a)}, A1 = {(a,-a)}.
        let sym = ComplexMatrix::identity(2);
        let anti = ComplexMatrix::diag(&[Complex64::ONE, -Complex64::ONE]);
        assert!(act.eigenspace(0).membership_residual(&sym).unwrap() < 1e-9 * sym.norm());
        assert!(act.eigenspace(1).membership_residual(&anti).unwrap() < 1e-9 * anti.norm());
    }

    #[test]
    fn swap_action_projections_are_averages() {
        let act = samples::swap_c2(DEFAULT_TOL).unwrap();
        let x = ComplexMatrix::diag(&[Complex64::new(2.0, 1.0), Complex64::new(-1.0, 0.5)]);
        let ax = act.apply(&x).unwrap();
        let p0 = act.eigen_project(0, &x).unwrap();
        let p1 = act.eigen_project(1, &x).unwrap();
        assert!(p0.distance(&x.add(&ax).unwrap().scale_re(0.5)) < 1e-12);
        assert!(p1.distance(&x.sub(&ax).unwrap().scale_re(0.5)) < 1e-12);
    }

    #[test]
    fn shift_action_eigenspaces_are_fourier_lines() {
        let act = samples::shift_c3(DEFAULT_TOL).unwrap();
        for k in 0..3 {
            assert_eq!(act.eigenspace(k).dim(), 1, "k = {k}");
            // diag(1, ξ^-k, ξ^-2k) satisfies α(x) = ξᵏ x for the shift.
            let x = ComplexMatrix::diag(&[
                Complex64::ONE,
                act.root(-(k as i64)),
                act.root(-2 * (k as i64)),
            ]);
            let expected = x.scale(act.root(k as i64));
            assert!(act.apply(&x).unwrap().distance(&expected) < 1e-9);
            assert!(act.eigenspace(k).membership_residual(&x).unwrap() < 1e-9 * x.norm());
        }
    }

    #[test]
    fn shift_projection_of_basis_vector() {
        let act = samples::shift_c3(DEFAULT_TOL).unwrap();
        let e0 = ComplexMatrix::unit(3, 0, 0);
        let p0 = act.eigen_project(0, &e0).unwrap();
        let third = ComplexMatrix::identity(3).scale_re(1.0 / 3.0);
        assert!(p0.distance(&third) < 1e-12);
    }

    #[test]
    fn projection_identities() {
        let act = samples::shift_c3(DEFAULT_TOL).unwrap();
        for b in act.algebra().space().basis() {
            let mut sum = ComplexMatrix::zeros(3, 3);
            for k in 0..3 {
                let pk = act.eigen_project(k, b).unwrap();
                sum = sum.add(&pk).unwrap();
                // Eigenvalue property and idempotence.
                let apk = act.apply(&pk).unwrap();
                assert!(apk.distance(&pk.scale(act.root(k as i64))) < 1e-10);
                for j in 0..3 {
                    let pjpk = act.eigen_project(j, &pk).unwrap();
                    let expect = if j == k {
                        pk.clone()
                    } else {
                        ComplexMatrix::zeros(3, 3)
                    };
                    assert!(pjpk.distance(&expect) < 1e-10);
                }
            }
            assert!(sum.distance(b) < 1e-10);
        }
    }

    #[test]
    fn grading_and_adjoint_symmetry() {
        let act = samples::shift_c3(DEFAULT_TOL).unwrap();
        for j in 0..3 {
            assert!(
                subspace_equal(&act.eigenspace(j).adjoint(), act.eigenspace((3 - j) % 3)).unwrap()
            );
            for k in 0..3 {
                let prod = act.eigenspace(j).span_product(act.eigenspace(k)).unwrap();
                assert!(act
                    .eigenspace((j + k) % 3)
                    .contains_subspace(&prod)
                    .unwrap());
            }
        }
    }

    #[test]
    fn module_property_over_fixed_algebra() {
        let act = samples::shift_c3(DEFAULT_TOL).unwrap();
        for i in 0..3 {
            let prod = act.eigenspace(i).span_product(act.eigenspace(0)).unwrap();
            assert!(
                subspace_equal(&prod, act.eigenspace(i)).unwrap(),
                "A_{i} A_0 = A_{i}"
            );
        }
    }

    #[test]
    fn product_ideals_for_named_examples() {
        // Trivial action: all I_k are zero.
        let act = samples::trivial_action(&[1, 1], 3, DEFAULT_TOL, 1).unwrap();
        assert_eq!(act.product_ideal(0).unwrap().dim(), 0);
        assert_eq!(act.product_ideal(1).unwrap().dim(), 0);
        // Swap: I_0 = A1·A1 = A0.
        let act = samples::swap_c2(DEFAULT_TOL).unwrap();
        let i0 = act.product_ideal(0).unwrap();
        assert!(subspace_equal(&i0, act.eigenspace(0)).unwrap());
        // Shift: I_0 = I_1 = A0.
        let act = samples::shift_c3(DEFAULT_TOL).unwrap();
        let i0 = act.product_ideal(0).unwrap();
        let i1 = act.product_ideal(1).unwrap();
        assert!(subspace_equal(&i0, act.eigenspace(0)).unwrap());
        assert!(subspace_equal(&i1, act.eigenspace(0)).unwrap());
    }

    #[test]
    fn ideal_nesting() {
        let act = samples::trivial_action(&[2, 1], 4, DEFAULT_TOL, 1).unwrap();
        for k in 0..2 {
            let outer = act.product_ideal(k).unwrap();
            let inner = act.product_ideal(k + 1).unwrap();
            assert!(outer.contains_subspace(&inner).unwrap());
        }
    }

    #[test]
    fn order_validation_rejects_wrong_order() {
        // A rotation by an angle incommensurate with n = 2 on C^2's first
        // block: unitary diag(e^{iθ}, 1) fixes the diagonal algebra
        // pointwise... use M2 instead so conjugation acts nontrivially.
        let algebra = FiniteAlgebra::multimatrix(&[2], DEFAULT_TOL).unwrap();
        let theta = 1.0_f64;
        let u = ComplexMatrix::diag(&[Complex64::new(theta.cos(), theta.sin()), Complex64::ONE]);
        let spec = ActionSpec {
            unitary: u,
            block_permutation: vec![0],
        };
        let err = ZnAction::new(algebra, spec, 2, 1).unwrap_err();
        assert!(matches!(err, Error::OrderMismatch { .. }), "got {err:?}");
    }

    #[test]
    fn divisor_order_actions_are_accepted() {
        // The trivial action has order 1, which divides any n.
        assert!(samples::trivial_action(&[2], 4, DEFAULT_TOL, 1).is_ok());
    }

    #[test]
    fn non_coprime_xi_exponent_rejected() {
        let algebra = FiniteAlgebra::multimatrix(&[1, 1], DEFAULT_TOL).unwrap();
        let spec = ActionSpec::identity(2, 2);
        assert!(ZnAction::new(algebra, spec, 4, 2).is_err());
    }

    #[test]
    fn xi_is_minus_one_for_n_two() {
        let act = samples::swap_c2(DEFAULT_TOL).unwrap();
        assert!((act.root(1) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }
}
