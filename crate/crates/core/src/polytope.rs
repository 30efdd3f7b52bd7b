//! The unit ball of a subspace in coefficient coordinates.
//!
//! `B_W ≅ {β ∈ ℚᵐ : |⟨β, c⟩| ≤ 1 for every class representative c}`. Its vertices are
//! the maximal star constants, its facets come in `±` pairs from the irredundant
//! classes, and the minimal face of a boundary point is read off from the coordinates
//! where `|⟨β, cᵢ⟩| = 1`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::components::{self, Basis, ComponentSet, EquivClass};
use crate::error::{Error, Result};
use crate::lp::{self, LinConstraint, LpOutcome, Redundancy};
use crate::ratlin::{self, RatVec, Rational};

#[derive(Clone, Debug)]
pub struct BallPolytope {
    components: ComponentSet,
    /// Nonzero classes; constraints `2k` and `2k + 1` are `±⟨β, rep_k⟩ ≤ 1`.
    classes: Vec<EquivClass>,
    constraints: Vec<LinConstraint>,
}

impl BallPolytope {
    pub fn from_components(components: ComponentSet) -> Result<Self> {
        let classes: Vec<EquivClass> =
            components::equivalence_classes(&components).into_iter().filter(|c| !c.is_zero).collect();
        let reps: Vec<RatVec> = classes.iter().map(|c| c.representative.clone()).collect();
        let rank = ratlin::rank(&reps);
        if rank < components.dim() {
            return Err(Error::DependentBasis { rank, m: components.dim() });
        }
        let constraints = reps
            .iter()
            .flat_map(|r| [LinConstraint::new(r.clone(), Rational::one()), LinConstraint::new(-r, Rational::one())])
            .collect();
        Ok(Self { components, classes, constraints })
    }

    pub fn dim(&self) -> usize {
        self.components.dim()
    }

    pub fn components(&self) -> &ComponentSet {
        &self.components
    }

    /// The nonzero classes, one constraint pair each.
    pub fn classes(&self) -> &[EquivClass] {
        &self.classes
    }

    pub fn constraints(&self) -> &[LinConstraint] {
        &self.constraints
    }

    /// Class index of constraint `i`.
    pub fn class_of_constraint(&self, i: usize) -> usize {
        i / 2
    }

    fn representatives(&self) -> impl Iterator<Item = &RatVec> {
        self.classes.iter().map(|c| &c.representative)
    }

    /// The subspace norm `max_i |⟨β, cᵢ⟩|`.
    pub fn norm(&self, beta: &RatVec) -> Rational {
        self.representatives().map(|r| r.dot(beta).abs()).max().unwrap_or_else(Rational::zero)
    }

    fn check_dim(&self, beta: &RatVec) -> Result<()> {
        if beta.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "coefficient vector has dim {}, expected {}",
                beta.dim(),
                self.dim()
            )));
        }
        Ok(())
    }
}

pub fn unit_ball_hrep(basis: &Basis) -> BallPolytope {
    BallPolytope::from_components(components::components_of(basis))
        .expect("basis components span the coefficient space")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// The minimal face of `Σ βₖ aₖ` in the cube `B_{ℓ∞ⁿ}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceDescriptor {
    /// Coordinates (0-based) where `⟨β, cᵢ⟩ = ±1`, with that sign.
    pub tight: BTreeMap<usize, Sign>,
    /// Dimension of the face of `B_W` containing β in its relative interior:
    /// `m − rank{cᵢ : i tight}`.
    pub face_dim: usize,
}

impl FaceDescriptor {
    pub fn tight_set(&self) -> BTreeSet<usize> {
        self.tight.keys().copied().collect()
    }
}

pub fn minimal_face(p: &BallPolytope, beta: &RatVec) -> Result<FaceDescriptor> {
    p.check_dim(beta)?;
    let values = p.components.evaluate(beta);
    let norm = values.max_abs();
    if norm < Rational::one() {
        return Err(Error::NotOnSphere { norm: norm.to_string() });
    }
    if norm > Rational::one() {
        return Err(Error::NotInBall { norm: norm.to_string() });
    }
    let tight: BTreeMap<usize, Sign> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs().is_one())
        .map(|(i, v)| (i, if v.is_positive() { Sign::Plus } else { Sign::Minus }))
        .collect();
    let tight_components: Vec<RatVec> = tight.keys().map(|&i| p.components.get(i).clone()).collect();
    let face_dim = p.dim() - ratlin::rank(&tight_components);
    Ok(FaceDescriptor { tight, face_dim })
}

/// Rank criterion: the tight components span `ℚᵐ`.
pub fn is_extreme(p: &BallPolytope, beta: &RatVec) -> Result<bool> {
    Ok(minimal_face(p, beta)?.face_dim == 0)
}

/// Decides maximality of the star constant `beta` by searching for an extension.
///
/// Looks for `α` agreeing with `β` on the tight set `S` of `β`, staying in the ball,
/// and reaching `|⟨α, c_p⟩| = 1` on some class outside `S`. Independent of
/// [`is_extreme`]; the two must agree.
pub fn is_maximal_star_constant(p: &BallPolytope, beta: &RatVec) -> Result<bool> {
    let face = minimal_face(p, beta)?;
    let mut cons = p.constraints.clone();
    for &s in face.tight.keys() {
        let c = p.components.get(s);
        cons.extend(LinConstraint::equality(c, &c.dot(beta)));
    }
    let outside: Vec<&RatVec> = p
        .classes
        .iter()
        .filter(|class| !class.members.iter().any(|i| face.tight.contains_key(i)))
        .map(|class| &class.representative)
        .collect();
    for rep in outside {
        for direction in [rep.clone(), -rep] {
            match lp::lp_optimize(&direction, &cons)? {
                LpOutcome::Optimal { value, .. } if value.is_one() => return Ok(false),
                LpOutcome::Optimal { .. } => {}
                other => {
                    return Err(Error::Inconsistency(format!(
                        "extension LP over a bounded face returned {:?}",
                        other.status()
                    )))
                }
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Vertex {
    pub beta: RatVec,
    pub face: FaceDescriptor,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexList {
    pub vertices: Vec<Vertex>,
}

impl VertexList {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn betas(&self) -> Vec<RatVec> {
        self.vertices.iter().map(|v| v.beta.clone()).collect()
    }

    pub fn beta_set(&self) -> BTreeSet<RatVec> {
        self.vertices.iter().map(|v| v.beta.clone()).collect()
    }
}

/// Exact vertex enumeration over all `m`-subsets of classes and sign patterns.
pub fn enumerate_vertices(p: &BallPolytope) -> VertexList {
    let m = p.dim();
    let reps: Vec<RatVec> = p.representatives().cloned().collect();
    let subsets: Vec<Vec<usize>> = (0..reps.len()).combinations(m).collect();
    let found: BTreeSet<RatVec> = subsets
        .par_iter()
        .flat_map_iter(|subset| {
            let rows: Vec<RatVec> = subset.iter().map(|&k| reps[k].clone()).collect();
            let mut out = Vec::new();
            // Columns of the inverse; each sign pattern is a signed sum of them.
            let units: Vec<RatVec> = (0..m).map(|j| RatVec::unit(m, j)).collect();
            let Some(inverse_columns) = ratlin::solve_square_multi(&rows, &units) else {
                return out;
            };
            // pairings[k][j] · scale = ⟨rep_k, inverse column j⟩ with integer pairings, so each
            // sign pattern is checked with integer sums only.
            let exact: Vec<Vec<Rational>> =
                reps.iter().map(|c| inverse_columns.iter().map(|col| c.dot(col)).collect()).collect();
            let scale = exact.iter().flatten().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            let pairings: Vec<Vec<BigInt>> =
                exact.iter().map(|row| row.iter().map(|q| q.numer() * (&scale / q.denom())).collect()).collect();
            // Sign patterns with a leading +; the rest follow by central symmetry.
            for pattern in 0..(1u32 << (m - 1)) {
                let negated = |j: usize| j > 0 && pattern >> (j - 1) & 1 == 1;
                let inside = pairings.iter().all(|row| {
                    let value = row.iter().enumerate().fold(
                        BigInt::zero(),
                        |acc, (j, x)| {
                            if negated(j) {
                                acc - x
                            } else {
                                acc + x
                            }
                        },
                    );
                    value.abs() <= scale
                });
                if inside {
                    let beta = (1..m).fold(inverse_columns[0].clone(), |acc, j| {
                        if negated(j) {
                            acc.sub(&inverse_columns[j])
                        } else {
                            acc.add(&inverse_columns[j])
                        }
                    });
                    out.push(-&beta);
                    out.push(beta);
                }
            }
            out
        })
        .collect();
    let vertices = found
        .into_iter()
        .map(|beta| {
            let face = minimal_face(p, &beta).expect("vertex lies on the sphere");
            Vertex { beta, face }
        })
        .collect();
    VertexList { vertices }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetClass {
    pub class: EquivClass,
    pub facet: bool,
    pub redundancy: Redundancy,
}

impl FacetClass {
    /// A point with `⟨β, rep⟩ = 1` and `|⟨β, c⟩| < 1` on every other class, obtained
    /// by scaling the redundancy witness back onto the facet.
    pub fn interior_witness(&self, p: &BallPolytope) -> Option<RatVec> {
        if !self.facet {
            return None;
        }
        let rep = &self.class.representative;
        let value = rep.dot(&self.redundancy.witness);
        if !value.is_positive() {
            return None;
        }
        let beta = self.redundancy.witness.scale(&(Rational::one() / value));
        let ok = p
            .classes
            .iter()
            .filter(|c| c.representative != *rep)
            .all(|c| c.representative.dot(&beta).abs() < Rational::one());
        ok.then_some(beta)
    }
}

/// Facet decision per class by LP redundancy of its `+` constraint.
pub fn facet_classes(p: &BallPolytope) -> Result<Vec<FacetClass>> {
    (0..p.classes.len())
        .into_par_iter()
        .map(|k| {
            let redundancy = lp::redundancy_check(2 * k, &p.constraints)?;
            Ok(FacetClass { class: p.classes[k].clone(), facet: redundancy.irredundant, redundancy })
        })
        .collect()
}

pub fn facet_count(facets: &[FacetClass]) -> usize {
    2 * facets.iter().filter(|f| f.facet).count()
}

/// One star constant per nonempty proper face of the ball.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct StarConstant {
    pub beta: RatVec,
    /// Class index (into [`BallPolytope::classes`]) and sign for each tight class.
    pub star_set: BTreeMap<usize, Sign>,
}

/// Enumerates every star set of the ball with one star constant each.
///
/// Depth-first over sign-patterned class subsets: a node `(S, σ)` survives when
/// `⟨β, rep_k⟩ = σ_k` on `S` is compatible with the ball, and is recorded when the
/// margin LP finds `β` strictly inside on every class outside `S`.
pub fn star_constants(p: &BallPolytope) -> Result<Vec<StarConstant>> {
    let mut out = Vec::new();
    let mut stack: Vec<BTreeMap<usize, Sign>> = vec![BTreeMap::new()];
    while let Some(set) = stack.pop() {
        let Some((beta, margin)) = face_margin(p, &set)? else {
            continue;
        };
        if !set.is_empty() && margin.is_positive() {
            out.push(StarConstant { beta, star_set: set.clone() });
        }
        let next = set.keys().next_back().map_or(0, |&k| k + 1);
        for k in next..p.classes.len() {
            for sign in [Sign::Plus, Sign::Minus] {
                let mut child = set.clone();
                child.insert(k, sign);
                stack.push(child);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `max t` with the pattern tight and `|⟨β, c⟩| ≤ 1 − t` elsewhere; `None` if infeasible.
fn face_margin(p: &BallPolytope, set: &BTreeMap<usize, Sign>) -> Result<Option<(RatVec, Rational)>> {
    let m = p.dim();
    let lift = |v: &RatVec, t: i64| {
        let mut e = v.entries().to_vec();
        e.push(Rational::from_integer(t.into()));
        RatVec::new(e)
    };
    let one = Rational::one();
    let mut cons = Vec::new();
    for (k, class) in p.classes.iter().enumerate() {
        let rep = &class.representative;
        match set.get(&k) {
            Some(sign) => {
                let value = if *sign == Sign::Plus { one.clone() } else { -one.clone() };
                cons.extend(LinConstraint::equality(&lift(rep, 0), &value));
            }
            None => {
                cons.push(LinConstraint::new(lift(rep, 1), one.clone()));
                cons.push(LinConstraint::new(lift(&-rep, 1), one.clone()));
            }
        }
    }
    let t_axis = RatVec::unit(m + 1, m);
    cons.push(LinConstraint::new(-&t_axis, Rational::zero()));
    cons.push(LinConstraint::new(t_axis.clone(), one));
    Ok(match lp::lp_optimize(&t_axis, &cons)? {
        LpOutcome::Optimal { value, point } => Some((RatVec::new(point.entries()[..m].to_vec()), value)),
        _ => None,
    })
}
