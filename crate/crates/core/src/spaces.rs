//! Space-level decisions: isometric embedding into `ℓ∞ʳ`, embeddability and
//! isometry verdicts, `⊕∞` direct sums.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::components::{self, Basis, StarReport, Verdict};
use crate::error::{Error, Result};
use crate::polytope::{self, VertexList};
use crate::ratlin::{rat, RatMat, RatVec, Rational};

/// Random coefficient vectors checked on top of the source-ball vertices.
pub const EMBED_RANDOM_SAMPLES: usize = 100;
const EMBED_SEED: u64 = 0x5eed_0ba11;

/// `Σ βₖ aₖ ↦ Σ βₖ bₖ` where the `bₖ ∈ ℓ∞ʳ` are read off the strict class representatives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingMap {
    pub source: Basis,
    pub strict_reps: Vec<RatVec>,
    pub image: Basis,
    /// Number of coefficient vectors on which the norm equality was checked.
    pub checked_points: usize,
}

impl EmbeddingMap {
    /// Target dimension `r`.
    pub fn target_dim(&self) -> usize {
        self.strict_reps.len()
    }

    /// The image of `Σ βₖ aₖ` in `ℓ∞ʳ`.
    pub fn apply(&self, beta: &RatVec) -> RatVec {
        self.image.combine(beta)
    }
}

pub(crate) fn random_rational_vector(rng: &mut impl Rng, dim: usize) -> RatVec {
    RatVec::new((0..dim).map(|_| rat(rng.gen_range(-20..=20), rng.gen_range(1..=7))).collect())
}

/// Builds the embedding and checks it is norm preserving on every vertex of the
/// source ball and on [`EMBED_RANDOM_SAMPLES`] seeded random coefficient vectors.
pub fn embed_into_linf(basis: &Basis) -> Result<EmbeddingMap> {
    let report = components::star_satisfiers(&components::components_of(basis))?;
    embed_with_report(basis, &report)
}

pub fn embed_with_report(basis: &Basis, report: &StarReport) -> Result<EmbeddingMap> {
    // Coordinate order of first occurrence keeps the identity basis fixed.
    let mut strict: Vec<_> = report.classes.iter().filter(|c| c.verdict == Verdict::Strict).collect();
    strict.sort_by_key(|c| c.class.members[0]);
    let strict_reps: Vec<RatVec> = strict.iter().map(|c| c.class.representative.clone()).collect();
    let image = Basis::from_components(&strict_reps)
        .map_err(|e| Error::Inconsistency(format!("strict representatives do not form a basis: {e}")))?;
    let vertices = polytope::enumerate_vertices(&polytope::unit_ball_hrep(basis));
    let mut rng = ChaCha8Rng::seed_from_u64(EMBED_SEED);
    let samples: Vec<RatVec> = vertices
        .betas()
        .into_iter()
        .chain((0..EMBED_RANDOM_SAMPLES).map(|_| random_rational_vector(&mut rng, basis.m())))
        .collect();
    for beta in &samples {
        let (lhs, rhs) = (basis.norm(beta), image.norm(beta));
        if lhs != rhs {
            return Err(Error::Inconsistency(format!("embedding changes the norm at beta = {beta}: {lhs} vs {rhs}")));
        }
    }
    Ok(EmbeddingMap { source: basis.clone(), strict_reps, image, checked_points: samples.len() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpaceVerdict {
    pub m: usize,
    pub n: usize,
    /// `r`, the number of strict classes.
    pub strict_count: usize,
    pub weak_count: usize,
    /// Counted by LP redundancy; always equal to `2r`.
    pub facet_count: usize,
    pub iso_to_linf_m: bool,
    /// Smallest `s` with an isometric embedding into `ℓ∞ˢ` (equal to `r`).
    pub embeddable_min_s: usize,
}

impl SpaceVerdict {
    pub fn embeddable_into(&self, s: usize) -> bool {
        self.strict_count <= s
    }
}

/// Computes every space-level verdict, cross-checking the facet count against `2r`.
pub fn space_verdict(basis: &Basis) -> Result<SpaceVerdict> {
    let report = components::star_satisfiers(&components::components_of(basis))?;
    let facets = polytope::facet_classes(&polytope::unit_ball_hrep(basis))?;
    let facet_count = polytope::facet_count(&facets);
    let r = report.strict_count;
    if facet_count != 2 * r {
        return Err(Error::Inconsistency(format!("facet count {facet_count} differs from 2r = {}", 2 * r)));
    }
    Ok(SpaceVerdict {
        m: basis.m(),
        n: basis.n(),
        strict_count: r,
        weak_count: report.weak_count,
        facet_count,
        iso_to_linf_m: r == basis.m(),
        embeddable_min_s: r,
    })
}

fn strict_count(basis: &Basis) -> Result<usize> {
    Ok(components::star_satisfiers(&components::components_of(basis))?.strict_count)
}

/// Whether the span of `basis` embeds isometrically into `ℓ∞ˢ`.
pub fn decide_embeddability(basis: &Basis, s: usize) -> Result<bool> {
    if s == 0 {
        return Err(Error::Input("target dimension s must be positive".into()));
    }
    Ok(strict_count(basis)? <= s)
}

pub fn decide_isometric_to_linfm(basis: &Basis) -> Result<bool> {
    Ok(strict_count(basis)? == basis.m())
}

/// Block-diagonal basis of `span(A₁) ⊕∞ … ⊕∞ span(A_k)`.
pub fn direct_sum_basis(bases: &[Basis]) -> Result<Basis> {
    if bases.is_empty() {
        return Err(Error::Input("direct sum needs at least one summand".into()));
    }
    let total_n: usize = bases.iter().map(Basis::n).sum();
    let mut rows = Vec::new();
    let mut offset = 0;
    for b in bases {
        for row in b.vectors().rows() {
            let mut e = vec![Rational::default(); total_n];
            e[offset..offset + b.n()].clone_from_slice(row.entries());
            rows.push(RatVec::new(e));
        }
        offset += b.n();
    }
    Basis::new(RatMat::from_rows(rows)?)
}

pub fn direct_sum_power(basis: &Basis, copies: usize) -> Result<Basis> {
    direct_sum_basis(&vec![basis.clone(); copies])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectSumExtremes {
    pub count: BigUint,
    /// Concatenated coefficient vectors, sorted; present only when requested.
    pub vertices: Option<Vec<RatVec>>,
}

/// Extreme points of a `⊕∞` sum are exactly the tuples of summand extreme points.
pub fn direct_sum_extremes(lists: &[VertexList], with_list: bool) -> DirectSumExtremes {
    let count = lists.iter().map(|l| BigUint::from(l.len())).product();
    let vertices = with_list.then(|| {
        let mut acc: Vec<RatVec> = vec![RatVec::new(Vec::new())];
        for list in lists {
            acc = acc
                .iter()
                .flat_map(|prefix| list.vertices.iter().map(move |v| RatVec::concat(&[prefix, &v.beta])))
                .collect();
        }
        acc.sort();
        acc
    });
    DirectSumExtremes { count, vertices }
}

/// Sufficient condition for isometry under the given basis correspondence: equal
/// sets of weakly dominant class representatives.
pub fn same_weak_components(b1: &Basis, b2: &Basis) -> Result<bool> {
    if b1.m() != b2.m() {
        return Err(Error::Input(format!("bases span spaces of different dimension ({} vs {})", b1.m(), b2.m())));
    }
    let weak = |b: &Basis| -> Result<BTreeSet<RatVec>> {
        Ok(components::weak_star_satisfiers(&components::components_of(b))?
            .weak_representatives()
            .into_iter()
            .collect())
    };
    Ok(weak(b1)? == weak(b2)?)
}
