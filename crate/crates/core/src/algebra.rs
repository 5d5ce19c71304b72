//! Finite-dimensional C*-algebras as concrete *-closed matrix subalgebras.
//!
//! An algebra is an [`OperatorSubspace`] closed under products and
//! adjoints, together with its own unit (which may differ from the ambient
//! identity: corners sit non-unitally inside their ambient). The
//! Wedderburn decomposition — minimal central projections, abstract block
//! dimensions, ambient multiplicities, and one minimal projection per
//! block — is computed numerically and cached; it is the oracle behind
//! every K-theoretic claim in this crate.
//!
//! Block data is found by spectral decomposition of a generic self-adjoint
//! central element. Central elements are produced by the basis-averaging
//! map E(g) = Σ bᵢ g bᵢ*, which for an orthonormal basis of a *-closed
//! algebra maps the algebra onto its center. Block dimensions come from
//! trace identities: the map x ↦ eᵢx is an orthogonal projection of the
//! algebra onto its i-th block, so dᵢ² = tr(eᵢ · Σ bⱼbⱼ*), and x ↦ pxp
//! plays the same role for minimality of a projection p.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::eigen::{cluster_eigenvalues, hermitian_eigen};
use crate::error::{Error, Result};
use crate::matrix::{hs_inner, inner_raw, ComplexMatrix};
use crate::rng::SplitMix64;
use crate::subspace::OperatorSubspace;

const MAX_ATTEMPTS: usize = 5;

/// Block layout of an algebra built as a direct sum of full matrix blocks.
#[derive(Debug, Clone)]
pub struct MultiMatrixLayout {
    dims: Vec<usize>,
    offsets: Vec<usize>,
}

impl MultiMatrixLayout {
    pub fn new(dims: Vec<usize>) -> Self {
        let mut offsets = Vec::with_capacity(dims.len());
        let mut acc = 0;
        for &d in &dims {
            offsets.push(acc);
            acc += d;
        }
        MultiMatrixLayout { dims, offsets }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }
}

/// Wedderburn block data of a finite-dimensional C*-algebra.
///
/// Block `i` is isomorphic to the full `dims[i]` x `dims[i]` matrix
/// algebra and appears in the ambient representation with multiplicity
/// `multiplicities[i]` (the ambient trace of its minimal projections).
#[derive(Debug, Clone)]
pub struct WedderburnData {
    pub dims: Vec<usize>,
    pub multiplicities: Vec<usize>,
    pub central_projections: Vec<ComplexMatrix>,
    pub min_projections: Vec<ComplexMatrix>,
}

impl WedderburnData {
    pub fn block_count(&self) -> usize {
        self.dims.len()
    }

    fn empty() -> Self {
        WedderburnData {
            dims: Vec::new(),
            multiplicities: Vec::new(),
            central_projections: Vec::new(),
            min_projections: Vec::new(),
        }
    }
}

/// A *-closed matrix subalgebra with an explicit unit.
#[derive(Debug)]
pub struct FiniteAlgebra {
    space: OperatorSubspace,
    unit: ComplexMatrix,
    layout: Option<MultiMatrixLayout>,
    blocks: OnceLock<WedderburnData>,
}

impl Clone for FiniteAlgebra {
    fn clone(&self) -> Self {
        FiniteAlgebra {
            space: self.space.clone(),
            unit: self.unit.clone(),
            layout: self.layout.clone(),
            blocks: self.blocks.clone(),
        }
    }
}

/// Residual summary from [`FiniteAlgebra::verify`]. Values are worst-case
/// Hilbert–Schmidt residuals over the basis; the report passes when all
/// are at most the algebra tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct AlgebraReport {
    pub product_residual: f64,
    pub star_residual: f64,
    pub unit_residual: f64,
    pub tol: f64,
}

impl AlgebraReport {
    pub fn passed(&self) -> bool {
        self.product_residual <= self.tol
            && self.star_residual <= self.tol
            && self.unit_residual <= self.tol
    }
}

impl FiniteAlgebra {
    /// Block-diagonal multi-matrix algebra ⊕ᵢ M_{dᵢ} inside M_N, N = Σdᵢ,
    /// with the full matrix-unit basis.
    pub fn multimatrix(dims: &[usize], tol: f64) -> Result<FiniteAlgebra> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidArgument(
                "multimatrix: block dims must be positive and nonempty".into(),
            ));
        }
        let layout = MultiMatrixLayout::new(dims.to_vec());
        let n = layout.total();
        let mut basis = Vec::with_capacity(dims.iter().map(|d| d * d).sum());
        for (b, &d) in dims.iter().enumerate() {
            let o = layout.offsets()[b];
            for i in 0..d {
                for j in 0..d {
                    basis.push(ComplexMatrix::unit(n, o + i, o + j));
                }
            }
        }
        Ok(FiniteAlgebra {
            space: OperatorSubspace::from_orthonormal(n, basis, tol),
            unit: ComplexMatrix::identity(n),
            layout: Some(layout),
            blocks: OnceLock::new(),
        })
    }

    /// Wraps a *-closed subspace as an algebra, computing its unit as the
    /// support projection of Σ bᵢbᵢ*.
    pub fn from_star_closed_span(space: OperatorSubspace) -> Result<FiniteAlgebra> {
        let unit = support_unit(&space)?;
        Ok(FiniteAlgebra {
            space,
            unit,
            layout: None,
            blocks: OnceLock::new(),
        })
    }

    pub(crate) fn from_parts(space: OperatorSubspace, unit: ComplexMatrix) -> FiniteAlgebra {
        FiniteAlgebra {
            space,
            unit,
            layout: None,
            blocks: OnceLock::new(),
        }
    }

    /// The zero algebra in the given ambient.
    pub fn zero(ambient: usize, tol: f64) -> FiniteAlgebra {
        FiniteAlgebra {
            space: OperatorSubspace::zero(ambient, tol),
            unit: ComplexMatrix::zeros(ambient, ambient),
            layout: None,
            blocks: OnceLock::new(),
        }
    }

    pub fn space(&self) -> &OperatorSubspace {
        &self.space
    }

    pub fn unit(&self) -> &ComplexMatrix {
        &self.unit
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.space.ambient_dim()
    }

    pub fn tol(&self) -> f64 {
        self.space.tol()
    }

    pub fn layout(&self) -> Option<&MultiMatrixLayout> {
        self.layout.as_ref()
    }

    /// Random element Σ cᵢbᵢ with complex coefficients uniform in the unit
    /// square.
    pub fn random_element(&self, rng: &mut SplitMix64) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.ambient_dim(), self.ambient_dim());
        for b in self.space.basis() {
            out.axpy(rng.next_complex(), b);
        }
        out
    }

    /// Checks closure under products and adjoints and the unit axioms.
    /// Reports worst residuals instead of failing.
    pub fn verify(&self) -> AlgebraReport {
        let tol = self.tol();
        let mut product = 0.0_f64;
        let mut star = 0.0_f64;
        for x in self.space.basis() {
            star = star.max(
                self.space
                    .membership_residual(&x.adjoint())
                    .unwrap_or(f64::MAX),
            );
            for y in self.space.basis() {
                let p = x.mul(y).expect("square ambient");
                product = product.max(self.space.membership_residual(&p).unwrap_or(f64::MAX));
            }
        }
        let mut unit_res = 0.0_f64;
        let u = &self.unit;
        unit_res = unit_res.max(u.sub(&u.adjoint()).expect("shape").norm());
        unit_res = unit_res.max(u.mul(u).expect("shape").distance(u));
        if self.dim() > 0 {
            unit_res = unit_res.max(self.space.membership_residual(u).unwrap_or(f64::MAX));
        }
        for x in self.space.basis() {
            unit_res = unit_res.max(u.mul(x).expect("shape").distance(x));
            unit_res = unit_res.max(x.mul(u).expect("shape").distance(x));
        }
        AlgebraReport {
            product_residual: product,
            star_residual: star,
            unit_residual: unit_res,
            tol,
        }
    }

    /// The center {z ∈ A : zx = xz for all x}, computed by sampling the
    /// basis-averaging map E(g) = Σ bᵢgbᵢ* at random g until the span
    /// stabilizes. E maps the algebra onto its center, so the span is the
    /// full center with probability one.
    pub fn center(&self, rng: &mut SplitMix64) -> OperatorSubspace {
        let tol = self.tol();
        if self.dim() == 0 {
            return OperatorSubspace::zero(self.ambient_dim(), tol);
        }
        let mut z =
            OperatorSubspace::span(self.ambient_dim(), std::slice::from_ref(&self.unit), tol)
                .expect("unit shape");
        let mut stable = 0;
        while stable < 3 && z.dim() < self.dim() {
            let g = self.random_element(rng);
            let avg = self.basis_average(&g);
            let grown = z
                .span_sum(&OperatorSubspace::span(self.ambient_dim(), &[avg], tol).expect("shape"))
                .expect("ambient");
            if grown.dim() > z.dim() {
                z = grown;
                stable = 0;
            } else {
                stable += 1;
            }
        }
        z
    }

    /// E(g) = Σ bᵢ g bᵢ* over the orthonormal basis. Lands in the center
    /// when the algebra is *-closed.
    fn basis_average(&self, g: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.ambient_dim(), self.ambient_dim());
        for b in self.space.basis() {
            let t = b.mul(g).expect("shape").mul(&b.adjoint()).expect("shape");
            out = out.add(&t).expect("shape");
        }
        out
    }

    /// The cached Wedderburn decomposition, computing it on first call.
    ///
    /// Minimal central projections are the spectral projections of a
    /// generic self-adjoint central element (a random real combination of
    /// a self-adjoint center basis), with eigenvalue clusters separated at
    /// an absolute gap of 10³·tol after unit-normalizing. Cluster failures
    /// retry with a fresh element at most five times.
    pub fn wedderburn(&self, rng: &mut SplitMix64) -> Result<&WedderburnData> {
        if let Some(w) = self.blocks.get() {
            return Ok(w);
        }
        let data = self.compute_wedderburn(rng)?;
        let _ = self.blocks.set(data);
        Ok(self.blocks.get().expect("just set"))
    }

    /// One minimal projection of the given block: p with pAp
    /// one-dimensional. Requires [`Self::wedderburn`] to have run.
    pub fn minimal_projection(&self, block: usize) -> Result<&ComplexMatrix> {
        let w = self
            .blocks
            .get()
            .ok_or_else(|| Error::InvalidArgument("wedderburn not computed yet".into()))?;
        w.min_projections
            .get(block)
            .ok_or_else(|| Error::InvalidArgument(format!("block index {block} out of range")))
    }

    fn compute_wedderburn(&self, rng: &mut SplitMix64) -> Result<WedderburnData> {
        let tol = self.tol();
        if self.dim() == 0 {
            return Ok(WedderburnData::empty());
        }
        let gap = 1e3 * tol;
        let int_tol = 100.0 * tol;
        let w_sum = self.basis_gram();

        let mut last_err = Error::DegenerateCenterSample;
        'attempt: for _ in 0..MAX_ATTEMPTS {
            let center = self.center(rng);
            let h = match self.generic_central_selfadjoint(&center, rng) {
                Ok(h) => h,
                Err(e) => {
                    last_err = e;
                    continue;
                }
            };
            let eig = hermitian_eigen(&h)?;
            let clusters = cluster_eigenvalues(&eig.values, gap);

            let mut centrals = Vec::new();
            for c in clusters {
                let p = eig.spectral_projection(c.clone());
                let pnorm = p.norm().max(1.0);
                let on_support = self.unit.mul(&p)?.distance(&p);
                let off_support = self.unit.mul(&p)?.norm();
                if on_support <= 10.0 * tol * pnorm {
                    centrals.push(p);
                } else if off_support <= 10.0 * tol * pnorm {
                    // ambient kernel of the algebra unit; not a block
                } else {
                    last_err = Error::DegenerateCenterSample;
                    continue 'attempt;
                }
            }

            // The number of blocks is the center dimension; a generic h
            // must separate all of them.
            if centrals.len() != center.dim() {
                last_err = Error::DegenerateCenterSample;
                continue 'attempt;
            }

            // Unit reconstruction: Σ eᵢ = u.
            let mut total = ComplexMatrix::zeros(self.ambient_dim(), self.ambient_dim());
            for e in &centrals {
                total = total.add(e)?;
            }
            if total.distance(&self.unit) > 10.0 * tol * self.unit.norm().max(1.0) {
                last_err = Error::DegenerateCenterSample;
                continue 'attempt;
            }

            let mut dims = Vec::new();
            let mut mults = Vec::new();
            for e in &centrals {
                if self.space.membership_residual(e)? > 10.0 * tol * e.norm().max(1.0) {
                    last_err = Error::DegenerateCenterSample;
                    continue 'attempt;
                }
                let d_sq = hs_inner(&w_sum, e)?.re;
                let d = match round_to_usize(d_sq.max(0.0).sqrt(), int_tol) {
                    Some(d) if d >= 1 => d,
                    _ => {
                        last_err = Error::NotSemisimple(format!(
                            "block dimension^2 = {d_sq:.6} is not a perfect square"
                        ));
                        continue 'attempt;
                    }
                };
                let m = match round_to_usize(e.trace().re / d as f64, int_tol) {
                    Some(m) if m >= 1 => m,
                    _ => {
                        last_err = Error::NotSemisimple("non-integer multiplicity".into());
                        continue 'attempt;
                    }
                };
                dims.push(d);
                mults.push(m);
            }
            if dims.iter().map(|d| d * d).sum::<usize>() != self.dim() {
                last_err = Error::NotSemisimple(format!(
                    "block dimensions {:?} do not account for dim {}",
                    dims,
                    self.dim()
                ));
                continue 'attempt;
            }

            let mut mins = Vec::new();
            for (i, e) in centrals.iter().enumerate() {
                match self.minimal_projection_in_block(e, mults[i], rng) {
                    Ok(p) => mins.push(p),
                    Err(e) => {
                        last_err = e;
                        continue 'attempt;
                    }
                }
            }

            return Ok(WedderburnData {
                dims,
                multiplicities: mults,
                central_projections: centrals,
                min_projections: mins,
            });
        }
        Err(last_err)
    }

    /// Gram accumulator Σ bⱼbⱼ*: positive, central, with full support.
    fn basis_gram(&self) -> ComplexMatrix {
        let mut w = ComplexMatrix::zeros(self.ambient_dim(), self.ambient_dim());
        for b in self.space.basis() {
            w = w.add(&b.mul(&b.adjoint()).expect("shape")).expect("shape");
        }
        w
    }

    /// Random real combination of a self-adjoint center basis, normalized,
    /// verified to commute with every basis element.
    fn generic_central_selfadjoint(
        &self,
        center: &OperatorSubspace,
        rng: &mut SplitMix64,
    ) -> Result<ComplexMatrix> {
        let tol = self.tol();
        let mut sa = Vec::new();
        for z in center.basis() {
            sa.push(z.add(&z.adjoint())?.scale_re(0.5));
            sa.push(z.sub(&z.adjoint())?.scale(Complex64::new(0.0, -0.5)));
        }
        let sa_span = OperatorSubspace::span(self.ambient_dim(), &sa, tol)?;
        let mut h = ComplexMatrix::zeros(self.ambient_dim(), self.ambient_dim());
        for b in sa_span.basis() {
            h.axpy(Complex64::new(rng.next_signed(), 0.0), b);
        }
        let norm = h.norm();
        if norm <= tol {
            return Err(Error::DegenerateCenterSample);
        }
        let h = h.scale_re(1.0 / norm);
        let h = h.add(&h.adjoint())?.scale_re(0.5);
        if self.space.membership_residual(&h)? > 10.0 * tol {
            return Err(Error::DegenerateCenterSample);
        }
        for b in self.space.basis() {
            let comm = h.mul(b)?.sub(&b.mul(&h)?)?;
            if comm.norm() > 10.0 * tol {
                return Err(Error::DegenerateCenterSample);
            }
        }
        Ok(h)
    }

    /// Spectral projection of a single eigenvalue cluster of a generic
    /// self-adjoint element supported in the block of `e`.
    fn minimal_projection_in_block(
        &self,
        e: &ComplexMatrix,
        mult: usize,
        rng: &mut SplitMix64,
    ) -> Result<ComplexMatrix> {
        let tol = self.tol();
        let gap = 1e3 * tol;
        let int_tol = 100.0 * tol;
        let mut last_err = Error::DegenerateCenterSample;
        'attempt: for _ in 0..MAX_ATTEMPTS {
            let g = self.random_element(rng);
            let eg = e.mul(&g)?;
            let mut h = eg.add(&eg.adjoint())?.scale_re(0.5);
            let norm = h.norm();
            if norm <= tol {
                continue;
            }
            h = h.scale_re(1.0 / norm);
            let eig = hermitian_eigen(&h)?;
            let clusters = cluster_eigenvalues(&eig.values, gap);

            // Pick the cluster of largest |eigenvalue| that lies inside the
            // block; generic elements separate it cleanly from the ambient
            // kernel near zero.
            let mut best: Option<(f64, std::ops::Range<usize>)> = None;
            for c in clusters {
                let magnitude = eig.values[c.clone()]
                    .iter()
                    .fold(0.0_f64, |acc, v| acc.max(v.abs()));
                if magnitude <= gap {
                    continue;
                }
                if best.as_ref().is_none_or(|(m, _)| magnitude > *m) {
                    best = Some((magnitude, c));
                }
            }
            let Some((_, cluster)) = best else {
                continue;
            };
            let p = eig.spectral_projection(cluster);
            let pnorm = p.norm().max(1.0);
            if e.mul(&p)?.distance(&p) > 10.0 * tol * pnorm {
                continue;
            }
            if self.space.membership_residual(&p)? > 10.0 * tol * pnorm {
                continue;
            }
            if round_to_usize(p.trace().re, int_tol) != Some(mult) {
                last_err = Error::DegenerateCenterSample;
                continue 'attempt;
            }
            // Minimality: the map x ↦ pxp is an orthogonal projection of
            // the algebra onto pAp, so its trace is dim(pAp).
            let mut corner_dim = Complex64::ZERO;
            for b in self.space.basis() {
                let pbp = p.mul(b)?.mul(&p)?;
                corner_dim += inner_raw(&pbp, b);
            }
            if (corner_dim.re - 1.0).abs() > int_tol || corner_dim.im.abs() > int_tol {
                last_err = Error::NotSemisimple(format!(
                    "projection corner has dimension {:.6}, expected 1",
                    corner_dim.re
                ));
                continue 'attempt;
            }
            return Ok(p);
        }
        Err(last_err)
    }

    /// True when `ideal` is a two-sided ideal of the algebra: every
    /// product of a basis element with an ideal element stays in the
    /// ideal, on both sides.
    pub fn ideal_check(&self, ideal: &OperatorSubspace) -> Result<bool> {
        if !self.space.contains_subspace(ideal)? {
            return Err(Error::NotContained);
        }
        let tol = self.tol().max(ideal.tol());
        for a in self.space.basis() {
            for x in ideal.basis() {
                if ideal.membership_residual(&a.mul(x)?)? > tol {
                    return Ok(false);
                }
                if ideal.membership_residual(&x.mul(a)?)? > tol {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Quotient by a *-closed two-sided ideal, realized as the
    /// complementary corner (u−z)A(u−z) where z is the ideal's own unit.
    /// Returns the quotient algebra together with the quotient map.
    pub fn quotient_by_ideal(
        &self,
        ideal: &OperatorSubspace,
    ) -> Result<(FiniteAlgebra, AlgebraHom)> {
        for x in ideal.basis() {
            if ideal.membership_residual(&x.adjoint())? > ideal.tol() {
                return Err(Error::NotStarClosed);
            }
        }
        if !self.ideal_check(ideal)? {
            return Err(Error::InvalidArgument(
                "subspace is not a two-sided ideal".into(),
            ));
        }
        let z = support_unit(ideal)?;
        self.quotient_by_ideal_with_unit(ideal, &z)
    }

    /// Quotient where the ideal's unit is already known (avoids
    /// recomputing it when the ideal is carried as an algebra).
    pub fn quotient_by_ideal_with_unit(
        &self,
        ideal: &OperatorSubspace,
        ideal_unit: &ComplexMatrix,
    ) -> Result<(FiniteAlgebra, AlgebraHom)> {
        let tol = self.tol();
        let n = self.ambient_dim();
        let uq = self.unit.sub(ideal_unit)?;
        let compressed: Vec<ComplexMatrix> = self
            .space
            .basis()
            .iter()
            .map(|b| uq.mul(b).and_then(|m| m.mul(&uq)))
            .collect::<Result<_>>()?;
        let qspace = OperatorSubspace::span_with_scale(n, &compressed, tol, 1.0)?;
        if qspace.dim() != self.dim() - ideal.dim() {
            return Err(Error::Internal(format!(
                "quotient dimension {} != dim A ({}) - dim I ({})",
                qspace.dim(),
                self.dim(),
                ideal.dim()
            )));
        }
        let quotient = FiniteAlgebra {
            space: qspace,
            unit: uq.clone(),
            layout: None,
            blocks: OnceLock::new(),
        };
        let hom = AlgebraHom::compress(n, uq);
        Ok((quotient, hom))
    }
}

/// The unit of a *-closed subalgebra, computed as the support projection
/// of the positive central element w = Σ bᵢbᵢ*.
pub fn support_unit(space: &OperatorSubspace) -> Result<ComplexMatrix> {
    let n = space.ambient_dim();
    let tol = space.tol();
    if space.dim() == 0 {
        return Ok(ComplexMatrix::zeros(n, n));
    }
    let mut w = ComplexMatrix::zeros(n, n);
    for b in space.basis() {
        w = w.add(&b.mul(&b.adjoint())?)?;
    }
    let scale = w.norm().max(1.0);
    let eig = hermitian_eigen(&w)?;
    let first_support = eig
        .values
        .iter()
        .position(|&v| v > 1e3 * tol * scale)
        .unwrap_or(eig.values.len());
    let z = eig.spectral_projection(first_support..eig.values.len());
    // The support projection must act as a unit on the span.
    for b in space.basis() {
        if z.mul(b)?.distance(b) > 10.0 * tol || b.mul(&z)?.distance(b) > 10.0 * tol {
            return Err(Error::Internal(
                "support projection does not act as a unit; span is not a *-closed algebra".into(),
            ));
        }
    }
    if space.membership_residual(&z)? > 10.0 * tol * z.norm().max(1.0) {
        return Err(Error::Internal(
            "support projection is not in the span".into(),
        ));
    }
    Ok(z)
}

fn round_to_usize(x: f64, tol: f64) -> Option<usize> {
    let r = x.round();
    if (x - r).abs() <= tol && r >= 0.0 {
        Some(r as usize)
    } else {
        None
    }
}

/// A *-homomorphism between concrete algebras, carried in a form that can
/// be applied to ambient matrices directly.
#[derive(Debug, Clone)]
pub struct AlgebraHom {
    source_ambient: usize,
    target_ambient: usize,
    kind: HomKind,
}

#[derive(Debug, Clone)]
enum HomKind {
    /// Inclusion of a subalgebra sharing the ambient.
    Identity,
    /// Corner compression x ↦ pxp in a shared ambient.
    Compress(ComplexMatrix),
    /// Embedding into the lower-right corner of a larger ambient.
    EmbedLowerRight,
    /// General linear map given by a coefficient matrix between
    /// orthonormal bases.
    CoeffLinear {
        source: OperatorSubspace,
        target: OperatorSubspace,
        matrix: Vec<Vec<Complex64>>,
    },
}

impl AlgebraHom {
    pub fn identity(ambient: usize) -> Self {
        AlgebraHom {
            source_ambient: ambient,
            target_ambient: ambient,
            kind: HomKind::Identity,
        }
    }

    pub fn compress(ambient: usize, p: ComplexMatrix) -> Self {
        AlgebraHom {
            source_ambient: ambient,
            target_ambient: ambient,
            kind: HomKind::Compress(p),
        }
    }

    pub fn embed_lower_right(source_ambient: usize, target_ambient: usize) -> Self {
        AlgebraHom {
            source_ambient,
            target_ambient,
            kind: HomKind::EmbedLowerRight,
        }
    }

    /// Linear map defined by its coefficient matrix (target dim x source
    /// dim) between the orthonormal bases of the given spaces.
    pub fn coeff_linear(
        source: OperatorSubspace,
        target: OperatorSubspace,
        matrix: Vec<Vec<Complex64>>,
    ) -> Result<Self> {
        if matrix.len() != target.dim() || matrix.iter().any(|r| r.len() != source.dim()) {
            return Err(Error::InvalidArgument(
                "coefficient matrix shape mismatch".into(),
            ));
        }
        Ok(AlgebraHom {
            source_ambient: source.ambient_dim(),
            target_ambient: target.ambient_dim(),
            kind: HomKind::CoeffLinear {
                source,
                target,
                matrix,
            },
        })
    }

    pub fn source_ambient(&self) -> usize {
        self.source_ambient
    }

    pub fn target_ambient(&self) -> usize {
        self.target_ambient
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.source_ambient || x.cols() != self.source_ambient {
            return Err(Error::ShapeMismatch(
                x.rows(),
                x.cols(),
                self.source_ambient,
                self.source_ambient,
            ));
        }
        match &self.kind {
            HomKind::Identity => Ok(x.clone()),
            HomKind::Compress(p) => p.mul(x)?.mul(p),
            HomKind::EmbedLowerRight => Ok(x.embed_lower_right(self.target_ambient)),
            HomKind::CoeffLinear {
                source,
                target,
                matrix,
            } => {
                let c = source.coefficients(x)?;
                let out: Vec<Complex64> = matrix
                    .iter()
                    .map(|row| row.iter().zip(&c).map(|(m, ci)| m * ci).sum())
                    .collect();
                Ok(target.from_coefficients(&out))
            }
        }
    }
}

/// Worst multiplicative/star/membership residuals of a hom over the
/// source basis.
#[derive(Debug, Clone, Serialize)]
pub struct HomReport {
    pub multiplicative_residual: f64,
    pub star_residual: f64,
    pub range_residual: f64,
}

pub fn verify_hom(
    hom: &AlgebraHom,
    source: &FiniteAlgebra,
    target: &FiniteAlgebra,
) -> Result<HomReport> {
    let mut mult = 0.0_f64;
    let mut star = 0.0_f64;
    let mut range = 0.0_f64;
    for x in source.space().basis() {
        let fx = hom.apply(x)?;
        range = range.max(target.space().membership_residual(&fx)?);
        star = star.max(hom.apply(&x.adjoint())?.distance(&fx.adjoint()));
        for y in source.space().basis() {
            let fxy = hom.apply(&x.mul(y)?)?;
            let fx_fy = fx.mul(&hom.apply(y)?)?;
            mult = mult.max(fxy.distance(&fx_fy));
        }
    }
    Ok(HomReport {
        multiplicative_residual: mult,
        star_residual: star,
        range_residual: range,
    })
}
