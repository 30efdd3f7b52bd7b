//! Exact rational geometry of finite-dimensional subspaces of `ℓ∞ⁿ`.
//!
//! A subspace `W = span{a₁,…,a_m} ⊂ ℓ∞ⁿ` is described by its basis rows. Reading the
//! basis column by column gives the *components* `cᵢ = (aᵢ¹,…,aᵢᵐ)`, and the norm of
//! `Σ βₖ aₖ` is `maxᵢ |⟨β, cᵢ⟩|`. Everything in this crate works in those coefficient
//! coordinates with arbitrary-precision rationals:
//!
//! * [`components`] classifies each `±` class of components as strictly dominant
//!   (star property), weakly dominant, or neither.
//! * [`polytope`] builds the unit ball as an H-polytope and enumerates its vertices,
//!   facets and minimal faces.
//! * [`spaces`] decides embeddability into `ℓ∞ˢ`, isometry with `ℓ∞ᵐ`, and builds
//!   `⊕∞` direct sums.
//! * [`opspace`] counts facets and extreme contractions of `L(X, ℓ∞ⁿ)` from the
//!   extreme points of a polyhedral `X`.
//!
//! [`lp`] is the exact simplex kernel underneath, [`ratlin`] the rational linear algebra.

pub mod components;
pub mod error;
pub mod lp;
pub mod opspace;
pub mod polytope;
pub mod ratlin;
pub mod spaces;

pub use components::{Basis, ComponentSet, EquivClass, StarReport, Verdict, WeakReport};
pub use error::{Error, Result};
pub use lp::{LinConstraint, LpOutcome, LpStatus, Redundancy, StarCertificate};
pub use opspace::{ExtremeSet, OpSpaceReport};
pub use polytope::{BallPolytope, FaceDescriptor, Sign, Vertex, VertexList};
pub use ratlin::{RatMat, RatVec, Rational};
pub use spaces::{EmbeddingMap, SpaceVerdict};
