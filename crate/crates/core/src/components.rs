//! Components of a basis and their dominance classification.
//!
//! For a basis `a₁,…,a_m ∈ ℓ∞ⁿ` the `i`-th component is the column
//! `cᵢ = (aᵢ¹,…,aᵢᵐ) ∈ ℚᵐ`. Components equal up to sign form one class. A class is
//! *strict* when some `β` makes `|⟨β, c⟩|` strictly larger than on every other class,
//! *weak* when `≥` can be achieved.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{self, StarCertificate};
use crate::ratlin::{RatMat, RatVec};

/// `m` linearly independent rows in `ℓ∞ⁿ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Basis {
    vectors: RatMat,
}

impl Basis {
    pub fn new(vectors: RatMat) -> Result<Self> {
        let (m, n) = (vectors.nrows(), vectors.ncols());
        if m > n {
            return Err(Error::Dimension(format!("{m} basis vectors cannot be independent in dimension {n}")));
        }
        let rank = vectors.rank();
        if rank < m {
            return Err(Error::DependentBasis { rank, m });
        }
        Ok(Self { vectors })
    }

    pub fn from_rows(rows: Vec<RatVec>) -> Result<Self> {
        Self::new(RatMat::from_rows(rows)?)
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(RatMat::from_ints(rows)?)
    }

    /// The basis whose components are exactly `components`, in order.
    pub fn from_components(components: &[RatVec]) -> Result<Self> {
        Self::new(RatMat::from_rows(components.to_vec())?.transpose())
    }

    pub fn identity(m: usize) -> Self {
        Self { vectors: RatMat::identity(m) }
    }

    /// Number of basis vectors (the dimension of the spanned space).
    pub fn m(&self) -> usize {
        self.vectors.nrows()
    }

    /// Ambient dimension.
    pub fn n(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn vectors(&self) -> &RatMat {
        &self.vectors
    }

    /// The element `Σ βₖ aₖ` of `ℓ∞ⁿ`.
    pub fn combine(&self, beta: &RatVec) -> RatVec {
        self.vectors.transpose().mul_vec(beta)
    }

    /// `‖Σ βₖ aₖ‖∞`.
    pub fn norm(&self, beta: &RatVec) -> crate::Rational {
        self.combine(beta).max_abs()
    }
}

/// The `n` components of a basis, indexed by coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentSet {
    components: Vec<RatVec>,
}

impl ComponentSet {
    pub fn new(components: Vec<RatVec>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::Input("component set is empty".into()));
        };
        let dim = first.dim();
        if dim == 0 {
            return Err(Error::Dimension("components must have positive dimension".into()));
        }
        if let Some((i, c)) = components.iter().enumerate().find(|(_, c)| c.dim() != dim) {
            return Err(Error::Dimension(format!("component {i} has dim {}, expected {dim}", c.dim())));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[RatVec] {
        &self.components
    }

    pub fn get(&self, coordinate: usize) -> &RatVec {
        &self.components[coordinate]
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Dimension `m` of each component.
    pub fn dim(&self) -> usize {
        self.components[0].dim()
    }

    /// `(⟨β, c₁⟩, …, ⟨β, cₙ⟩)`.
    pub fn evaluate(&self, beta: &RatVec) -> RatVec {
        RatVec::new(self.components.iter().map(|c| c.dot(beta)).collect())
    }
}

/// All `n` columns of the basis, in coordinate order.
pub fn components_of(basis: &Basis) -> ComponentSet {
    ComponentSet { components: basis.vectors().columns() }
}

/// The lexicographically larger of `c` and `−c`.
pub fn canonical_sign(c: &RatVec) -> RatVec {
    let neg = -c;
    if neg > *c {
        neg
    } else {
        c.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivClass {
    pub representative: RatVec,
    /// Coordinates (0-based) whose component is `±representative`.
    pub members: Vec<usize>,
    pub is_zero: bool,
}

/// Partitions components into `±` classes, sorted by representative.
pub fn equivalence_classes(cs: &ComponentSet) -> Vec<EquivClass> {
    let mut groups: BTreeMap<RatVec, Vec<usize>> = BTreeMap::new();
    for (i, c) in cs.components().iter().enumerate() {
        groups.entry(canonical_sign(c)).or_default().push(i);
    }
    groups
        .into_iter()
        .map(|(representative, members)| {
            let is_zero = representative.is_zero();
            EquivClass { representative, members, is_zero }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Strict,
    WeakOnly,
    None,
    Zero,
}

impl Verdict {
    pub fn is_weak(self) -> bool {
        matches!(self, Verdict::Strict | Verdict::WeakOnly)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassVerdict {
    pub class: EquivClass,
    pub verdict: Verdict,
    pub certificate: Option<StarCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarReport {
    pub classes: Vec<ClassVerdict>,
    /// Number of strict classes, `r`.
    pub strict_count: usize,
    /// Number of weak classes (strict included), `|P|`.
    pub weak_count: usize,
}

impl StarReport {
    pub fn strict_representatives(&self) -> Vec<RatVec> {
        self.with_verdict(|v| v == Verdict::Strict)
    }

    pub fn weak_representatives(&self) -> Vec<RatVec> {
        self.with_verdict(Verdict::is_weak)
    }

    /// Classes that are weakly but not strictly dominant.
    pub fn weak_only(&self) -> Vec<&ClassVerdict> {
        self.classes.iter().filter(|c| c.verdict == Verdict::WeakOnly).collect()
    }

    fn with_verdict(&self, keep: impl Fn(Verdict) -> bool) -> Vec<RatVec> {
        self.classes.iter().filter(|c| keep(c.verdict)).map(|c| c.class.representative.clone()).collect()
    }
}

fn nonzero_representatives(classes: &[EquivClass]) -> Result<Vec<RatVec>> {
    let reps: Vec<RatVec> = classes.iter().filter(|c| !c.is_zero).map(|c| c.representative.clone()).collect();
    if reps.is_empty() {
        return Err(Error::Input("every component is zero".into()));
    }
    Ok(reps)
}

/// Competitors of `target`: every nonzero representative except its own.
fn competitors<'a>(reps: &'a [RatVec], target: &'a RatVec) -> Vec<RatVec> {
    reps.iter().filter(|r| *r != target).cloned().collect()
}

/// Classifies every class by the strict-margin LP.
pub fn star_satisfiers(cs: &ComponentSet) -> Result<StarReport> {
    let classes = equivalence_classes(cs);
    let reps = nonzero_representatives(&classes)?;
    let analyzed = classes
        .into_par_iter()
        .map(|class| {
            if class.is_zero {
                return Ok(ClassVerdict { class, verdict: Verdict::Zero, certificate: None });
            }
            let others = competitors(&reps, &class.representative);
            let certificate = lp::strict_margin(&class.representative, &others)?;
            let verdict = match &certificate {
                Some(c) if c.margin.is_positive() => Verdict::Strict,
                Some(_) => Verdict::WeakOnly,
                None => Verdict::None,
            };
            Ok(ClassVerdict { class, verdict, certificate })
        })
        .collect::<Result<Vec<_>>>()?;
    let strict_count = analyzed.iter().filter(|c| c.verdict == Verdict::Strict).count();
    let weak_count = analyzed.iter().filter(|c| c.verdict.is_weak()).count();
    Ok(StarReport { classes: analyzed, strict_count, weak_count })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeakClass {
    pub class: EquivClass,
    pub weak: bool,
    pub certificate: Option<StarCertificate>,
}

/// Weak-property verdicts computed by plain feasibility, independent of the margin LP.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeakReport {
    pub classes: Vec<WeakClass>,
    pub weak_count: usize,
}

impl WeakReport {
    pub fn weak_representatives(&self) -> Vec<RatVec> {
        self.classes.iter().filter(|c| c.weak).map(|c| c.class.representative.clone()).collect()
    }
}

pub fn weak_star_satisfiers(cs: &ComponentSet) -> Result<WeakReport> {
    let classes = equivalence_classes(cs);
    let reps = nonzero_representatives(&classes)?;
    let analyzed = classes
        .into_par_iter()
        .map(|class| {
            if class.is_zero {
                return Ok(WeakClass { class, weak: false, certificate: None });
            }
            let others = competitors(&reps, &class.representative);
            let certificate = lp::weak_feasible(&class.representative, &others)?;
            Ok(WeakClass { class, weak: certificate.is_some(), certificate })
        })
        .collect::<Result<Vec<_>>>()?;
    let weak_count = analyzed.iter().filter(|c| c.weak).count();
    Ok(WeakReport { classes: analyzed, weak_count })
}

/// `max_i |⟨β, cᵢ⟩|` restricted to the given vectors.
pub fn max_abs_pairing(vectors: &[RatVec], beta: &RatVec) -> crate::Rational {
    vectors.iter().map(|c| c.dot(beta).abs()).max().unwrap_or_else(crate::Rational::zero)
}
