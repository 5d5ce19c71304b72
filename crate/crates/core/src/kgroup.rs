//! Finitely generated abelian groups, induced K₀ maps, and exact
//! sequence checks — all in exact integer arithmetic on top of Smith
//! normal form.
//!
//! Groups are kept in canonical form ℤ^rank ⊕ ℤ/d₁ ⊕ … with d₁ | d₂ | …
//! and dᵢ ≥ 2. Canonical generators list the free part first, then one
//! generator per invariant factor. A homomorphism is an integer matrix on
//! those generators, validated to respect torsion.
//!
//! K₀ of a finite-dimensional C*-algebra is free of rank the Wedderburn
//! block count, generated by the classes of minimal projections, and K₁
//! vanishes (every invertible in a multi-matrix algebra connects to the
//! identity, as GL of each block is connected). Induced maps of
//! *-homomorphisms are computed by the ambient-trace multiplicity
//! formula, which stays correct when the representation carries
//! multiplicity.

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::algebra::{AlgebraHom, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::rng::SplitMix64;
use crate::snf::{kernel_basis, smith_normal_form, solve_integer, IntMat};

/// A finitely generated abelian group in invariant-factor form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgAbelianGroup {
    rank: usize,
    torsion: Vec<BigUint>,
}

impl FgAbelianGroup {
    pub fn zero() -> Self {
        FgAbelianGroup {
            rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    /// Builds ℤ^rank ⊕ ⊕ᵢ ℤ/tᵢ and canonicalizes (merging factors into a
    /// divisibility chain, dropping trivial ones, promoting zeros to free
    /// rank).
    pub fn new(rank: usize, torsion: &[u64]) -> Self {
        if torsion.is_empty() {
            return Self::free(rank);
        }
        let gens = rank + torsion.len();
        let mut rel = IntMat::zeros(gens, torsion.len());
        for (j, &t) in torsion.iter().enumerate() {
            rel[(rank + j, j)] = BigInt::from(t);
        }
        Self::from_presentation(gens, &rel)
    }

    /// The cokernel ℤ^gens / column-span(relations), in canonical form.
    pub fn from_presentation(gens: usize, relations: &IntMat) -> Self {
        debug_assert_eq!(relations.rows(), gens);
        let snf = smith_normal_form(relations);
        let mut torsion = Vec::new();
        let mut nonzero = 0;
        for d in snf.diagonal() {
            nonzero += 1;
            let d = d.to_biguint().expect("SNF diagonal is nonnegative");
            if d > BigUint::from(1u32) {
                torsion.push(d);
            }
        }
        FgAbelianGroup {
            rank: gens - nonzero,
            torsion,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigUint] {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Number of canonical generators (free then torsion).
    pub fn generator_count(&self) -> usize {
        self.rank + self.torsion.len()
    }

    /// Canonical relation matrix: one column dᵢ·e_{rank+i} per invariant
    /// factor.
    pub fn relation_matrix(&self) -> IntMat {
        let gens = self.generator_count();
        let mut rel = IntMat::zeros(gens, self.torsion.len());
        for (j, d) in self.torsion.iter().enumerate() {
            rel[(self.rank + j, j)] = BigInt::from(d.clone());
        }
        rel
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut torsion: Vec<u64> = Vec::new();
        let mut big = Vec::new();
        for t in self.torsion.iter().chain(&other.torsion) {
            match t.to_u64() {
                Some(v) => torsion.push(v),
                None => big.push(t.clone()),
            }
        }
        if big.is_empty() {
            Self::new(self.rank + other.rank, &torsion)
        } else {
            // Rare oversized-factor path: canonicalize through a
            // presentation built from BigInt directly.
            let all: Vec<BigUint> = self.torsion.iter().chain(&other.torsion).cloned().collect();
            let gens = self.rank + other.rank + all.len();
            let mut rel = IntMat::zeros(gens, all.len());
            for (j, d) in all.iter().enumerate() {
                rel[(self.rank + other.rank + j, j)] = BigInt::from(d.clone());
            }
            Self::from_presentation(gens, &rel)
        }
    }
}

impl std::fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for FgAbelianGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("FgAbelianGroup", 3)?;
        s.serialize_field("rank", &self.rank)?;
        let torsion: Vec<String> = self.torsion.iter().map(|d| d.to_string()).collect();
        s.serialize_field("torsion", &torsion)?;
        s.serialize_field("display", &self.to_string())?;
        s.end()
    }
}

/// The pair (K₀, K₁).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KPair {
    pub k0: FgAbelianGroup,
    pub k1: FgAbelianGroup,
}

impl KPair {
    pub fn new(k0: FgAbelianGroup, k1: FgAbelianGroup) -> Self {
        KPair { k0, k1 }
    }

    pub fn zero() -> Self {
        KPair {
            k0: FgAbelianGroup::zero(),
            k1: FgAbelianGroup::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.k0.is_zero() && self.k1.is_zero()
    }
}

impl std::fmt::Display for KPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(K0 = {}, K1 = {})", self.k0, self.k1)
    }
}

/// Homomorphism of finitely generated abelian groups as an integer matrix
/// on canonical generators (target generators x source generators).
#[derive(Debug, Clone)]
pub struct GroupHom {
    source: FgAbelianGroup,
    target: FgAbelianGroup,
    matrix: IntMat,
}

impl GroupHom {
    pub fn new(source: FgAbelianGroup, target: FgAbelianGroup, matrix: IntMat) -> Result<Self> {
        if matrix.rows() != target.generator_count() || matrix.cols() != source.generator_count() {
            return Err(Error::InvalidArgument(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.generator_count(),
                source.generator_count()
            )));
        }
        let hom = GroupHom {
            source,
            target,
            matrix,
        };
        if !hom.well_defined() {
            return Err(Error::IllDefinedHom);
        }
        Ok(hom)
    }

    pub fn from_rows(
        source: FgAbelianGroup,
        target: FgAbelianGroup,
        rows: &[Vec<i64>],
    ) -> Result<Self> {
        Self::new(source, target, IntMat::from_rows(rows))
    }

    pub fn zero(source: FgAbelianGroup, target: FgAbelianGroup) -> Self {
        let matrix = IntMat::zeros(target.generator_count(), source.generator_count());
        GroupHom {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(group: FgAbelianGroup) -> Self {
        let matrix = IntMat::identity(group.generator_count());
        GroupHom {
            source: group.clone(),
            target: group,
            matrix,
        }
    }

    pub fn source(&self) -> &FgAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbelianGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMat {
        &self.matrix
    }

    /// h(d·g) must be a target relation for every torsion generator g of
    /// order d.
    fn well_defined(&self) -> bool {
        let r_t = self.target.relation_matrix();
        for (j, d) in self.source.torsion().iter().enumerate() {
            let col = self.source.rank() + j;
            let image: Vec<BigInt> = (0..self.matrix.rows())
                .map(|i| &self.matrix[(i, col)] * BigInt::from(d.clone()))
                .collect();
            if solve_integer(&r_t, &image).is_none() {
                return false;
            }
        }
        true
    }

    /// self ∘ first.
    pub fn compose(&self, first: &GroupHom) -> Result<GroupHom> {
        if first.target != self.source {
            return Err(Error::NotComposable(0));
        }
        Ok(GroupHom {
            source: first.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&first.matrix),
        })
    }

    /// True when the matrix is square with exactly one 1 in each row and
    /// column and zeros elsewhere.
    pub fn matrix_is_permutation(&self) -> bool {
        let m = &self.matrix;
        if m.rows() != m.cols() {
            return false;
        }
        let one = BigInt::from(1);
        for i in 0..m.rows() {
            let mut count = 0;
            for j in 0..m.cols() {
                if m[(i, j)] == one {
                    count += 1;
                } else if !m[(i, j)].is_zero() {
                    return false;
                }
            }
            if count != 1 {
                return false;
            }
        }
        for j in 0..m.cols() {
            let count = (0..m.rows()).filter(|&i| m[(i, j)] == one).count();
            if count != 1 {
                return false;
            }
        }
        true
    }

    pub fn matrix_entries_i64(&self) -> Vec<Vec<i64>> {
        (0..self.matrix.rows())
            .map(|i| {
                (0..self.matrix.cols())
                    .map(|j| self.matrix[(i, j)].to_i64().unwrap_or(i64::MAX))
                    .collect()
            })
            .collect()
    }

    /// The lattice {x ∈ ℤ^p : M·x ∈ relations(target)}, i.e. the
    /// preimage of 0 in generator coordinates, returned as a column
    /// basis.
    fn kernel_lattice(&self) -> IntMat {
        let p = self.source.generator_count();
        let augmented = self.matrix.hcat(&self.target.relation_matrix());
        let big_kernel = kernel_basis(&augmented);
        let mut out = IntMat::zeros(p, big_kernel.cols());
        for j in 0..big_kernel.cols() {
            for i in 0..p {
                out[(i, j)] = big_kernel[(i, j)].clone();
            }
        }
        out
    }
}

/// Kernel, image, and cokernel of a homomorphism, all exact.
pub fn kernel_image_cokernel(
    h: &GroupHom,
) -> Result<(FgAbelianGroup, FgAbelianGroup, FgAbelianGroup)> {
    let p = h.source().generator_count();
    let kernel_lat = h.kernel_lattice();

    // Image = Z^p / kernel lattice.
    let image = FgAbelianGroup::from_presentation(p, &kernel_lat);

    // Kernel = kernel lattice / source relations: rewrite the source
    // relations in the lattice basis.
    let r_s = h.source().relation_matrix();
    let mut w = IntMat::zeros(kernel_lat.cols(), r_s.cols());
    for j in 0..r_s.cols() {
        let col = r_s.column(j);
        let sol = solve_integer(&kernel_lat, &col).ok_or_else(|| {
            Error::Internal("source relation not inside the kernel lattice".into())
        })?;
        for (i, v) in sol.into_iter().enumerate() {
            w[(i, j)] = v;
        }
    }
    let kernel = FgAbelianGroup::from_presentation(kernel_lat.cols(), &w);

    // Cokernel = Z^m / (image + target relations).
    let augmented = h.matrix().hcat(&h.target().relation_matrix());
    let cokernel = FgAbelianGroup::from_presentation(h.target().generator_count(), &augmented);

    Ok((kernel, image, cokernel))
}

/// Exactness report at one junction of a composable pair.
#[derive(Debug, Clone, Serialize)]
pub struct JunctionReport {
    pub position: usize,
    pub exact: bool,
}

/// Checks image = kernel at every interior junction of the sequence.
/// Subgroups of the middle group are compared as lattices in generator
/// coordinates (image + relations vs. kernel preimage).
pub fn exactness_check(sequence: &[GroupHom]) -> Result<Vec<JunctionReport>> {
    for (i, pair) in sequence.windows(2).enumerate() {
        if pair[0].target() != pair[1].source() {
            return Err(Error::NotComposable(i));
        }
    }
    let mut reports = Vec::new();
    for (i, pair) in sequence.windows(2).enumerate() {
        let f = &pair[0];
        let g = &pair[1];
        // Lattice generated by the image of f plus the middle relations.
        let l1 = f.matrix().hcat(&f.target().relation_matrix());
        // Kernel lattice of g.
        let l2 = g.kernel_lattice();
        let mut exact = true;
        for j in 0..l1.cols() {
            if solve_integer(&l2, &l1.column(j)).is_none() {
                exact = false;
                break;
            }
        }
        if exact {
            for j in 0..l2.cols() {
                if solve_integer(&l1, &l2.column(j)).is_none() {
                    exact = false;
                    break;
                }
            }
        }
        reports.push(JunctionReport { position: i, exact });
    }
    Ok(reports)
}

pub fn is_exact(sequence: &[GroupHom]) -> Result<bool> {
    Ok(exactness_check(sequence)?.iter().all(|j| j.exact))
}

/// Free K₀ generators of an algebra: one minimal projection per
/// Wedderburn block.
#[derive(Debug, Clone)]
pub struct K0Basis {
    pub projections: Vec<ComplexMatrix>,
    pub multiplicities: Vec<usize>,
    pub block_dims: Vec<usize>,
    pub ambient: usize,
}

/// K₀(A) = ℤ^m with m the Wedderburn block count, together with its
/// generating minimal projections. K₁ of a finite-dimensional algebra is
/// zero; [`kpair_of_algebra`] reports the pair.
pub fn k0_of_algebra(
    algebra: &FiniteAlgebra,
    rng: &mut SplitMix64,
) -> Result<(FgAbelianGroup, K0Basis)> {
    let w = algebra.wedderburn(rng)?;
    let group = FgAbelianGroup::free(w.block_count());
    let basis = K0Basis {
        projections: w.min_projections.clone(),
        multiplicities: w.multiplicities.clone(),
        block_dims: w.dims.clone(),
        ambient: algebra.ambient_dim(),
    };
    Ok((group, basis))
}

pub fn kpair_of_algebra(algebra: &FiniteAlgebra, rng: &mut SplitMix64) -> Result<KPair> {
    let (k0, _) = k0_of_algebra(algebra, rng)?;
    Ok(KPair::new(k0, FgAbelianGroup::zero()))
}

/// Induced map K₀(source) → K₀(target) of a *-homomorphism, by the
/// ambient-trace multiplicity formula
/// m_{ji} = tr(f_j·φ(p_i)) / tr(f_j·q_j), with p the source minimal
/// projections and f, q the target central/minimal projections. Entries
/// must come out as nonnegative integers.
pub fn induced_k0_map(
    hom: &AlgebraHom,
    source: &FiniteAlgebra,
    target: &FiniteAlgebra,
    rng: &mut SplitMix64,
) -> Result<GroupHom> {
    let ws = source.wedderburn(rng)?.clone();
    let wt = target.wedderburn(rng)?;
    let int_tol = 100.0 * source.tol().max(target.tol());

    let m_src = ws.dims.len();
    let m_tgt = wt.dims.len();
    let mut matrix = IntMat::zeros(m_tgt, m_src);
    for (i, p) in ws.min_projections.iter().enumerate() {
        let fp = hom.apply(p)?;
        for j in 0..m_tgt {
            let f = &wt.central_projections[j];
            let numerator = f.mul(&fp)?.trace().re;
            let denominator = wt.multiplicities[j] as f64;
            let value = numerator / denominator;
            let rounded = value.round();
            if (value - rounded).abs() > int_tol || rounded < -0.5 {
                return Err(Error::NotAHomomorphism(format!(
                    "multiplicity entry ({j},{i}) = {value:.6} is not a nonnegative integer"
                )));
            }
            matrix[(j, i)] = BigInt::from(rounded as i64);
        }
    }
    GroupHom::new(
        FgAbelianGroup::free(m_src),
        FgAbelianGroup::free(m_tgt),
        matrix,
    )
}
