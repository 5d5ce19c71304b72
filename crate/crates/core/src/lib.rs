//! Computational K-theory for crossed products of finite-dimensional
//! C*-algebras by finite cyclic groups.
//!
//! The crate works concretely: algebras are *-closed subspaces of complex
//! matrix space with all rank decisions made at an explicit tolerance, a
//! ℤₙ-action is a validated order-n automorphism, and the crossed product
//! `A ⋊ ℤₙ` is realized as a block matrix algebra through an explicit
//! embedding. K₀ groups are read off Wedderburn block data, homomorphisms
//! induce integer multiplicity matrices, and finitely generated abelian
//! groups are handled exactly through Smith normal form.
//!
//! The main entry points:
//!
//! - [`subspace::OperatorSubspace`] — span arithmetic for subspaces of
//!   matrix space under the Hilbert–Schmidt inner product.
//! - [`algebra::FiniteAlgebra`] — concrete *-closed matrix algebras with
//!   Wedderburn block decomposition.
//! - [`action::ZnAction`] — validated ℤₙ-actions with cached eigenspaces
//!   and spectral projections.
//! - [`crossed`] — the crossed-product embedding, the corner tower
//!   `B_k ⊇ J_k`, and the full-corner checks.
//! - [`kgroup`] — K₀ of algebras, induced maps, and exact integer group
//!   arithmetic.
//! - [`recursion`] — the recursive resolution of the tower of cyclic
//!   exact sequences, in concrete (verified) and symbolic modes.
//! - [`samples`] — built-in named examples and a deterministic random
//!   example generator.

pub mod action;
pub mod algebra;
pub mod crossed;
pub mod eigen;
pub mod error;
pub mod kgroup;
pub mod matrix;
pub mod recursion;
pub mod rng;
pub mod samples;
pub mod snf;
pub mod subspace;

pub use num_complex;

pub use action::{ActionSpec, ZnAction};
pub use algebra::{AlgebraHom, FiniteAlgebra, WedderburnData};
pub use crossed::{CornerTower, CrossedElement};
pub use error::{Error, Result};
pub use kgroup::{FgAbelianGroup, GroupHom, K0Basis, KPair};
pub use matrix::ComplexMatrix;
pub use recursion::{ConcreteRun, RecursionLedger, StepStatus};
pub use rng::SplitMix64;
pub use subspace::OperatorSubspace;

/// Default relative tolerance for all numeric rank decisions.
pub const DEFAULT_TOL: f64 = 1e-9;
