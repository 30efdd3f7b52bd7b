//! Extreme contractions of `L(X, ℓ∞ⁿ)` for a polyhedral `X`.
//!
//! With `Ext(B_X) = {±v₁,…,±v_r}`, evaluating an operator at the `vᵢ` identifies
//! `L(X, ℓ∞ⁿ)` with the `n`-fold `⊕∞` power of `W ⊂ ℓ∞ʳ`, where `W` is spanned by the
//! rows of the matrix whose columns are the `vᵢ`. Facet and extreme-point counts of the
//! operator ball follow from those of `B_W`.

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};
use serde::Serialize;

use crate::components::{self, Basis};
use crate::error::{Error, Result};
use crate::lp::{self, LinConstraint};
use crate::polytope::{self, VertexList};
use crate::ratlin::{self, RatMat, RatVec, Rational};
use crate::spaces;

/// One representative per `±` pair of extreme points of `B_X`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremeSet {
    points: Vec<RatVec>,
}

impl ExtremeSet {
    pub fn points(&self) -> &[RatVec] {
        &self.points
    }

    /// Dimension of `X`.
    pub fn m(&self) -> usize {
        self.points[0].dim()
    }

    /// Number of `±` pairs.
    pub fn r(&self) -> usize {
        self.points.len()
    }

    /// `max_i |⟨β, vᵢ⟩|`: the support function of `B_X` at `β`.
    pub fn support(&self, beta: &RatVec) -> Rational {
        components::max_abs_pairing(&self.points, beta)
    }
}

/// Checks that `points` span `ℚᵐ` and that no point lies in the absolute convex hull
/// of the others.
pub fn validate_extreme_set(points: Vec<RatVec>) -> Result<ExtremeSet> {
    let Some(first) = points.first() else {
        return Err(Error::Input("extreme point list is empty".into()));
    };
    let m = first.dim();
    if m == 0 {
        return Err(Error::Dimension("extreme points must have positive dimension".into()));
    }
    if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.dim() != m) {
        return Err(Error::Dimension(format!("extreme point {i} has dim {}, expected {m}", p.dim())));
    }
    let rank = ratlin::rank(&points);
    if rank < m {
        return Err(Error::NotABall { rank, m });
    }
    for (i, p) in points.iter().enumerate() {
        let others: Vec<&RatVec> = points.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q).collect();
        if in_absolute_hull(p, &others)? {
            return Err(Error::NotExtreme { index: i, point: p.to_string() });
        }
    }
    Ok(ExtremeSet { points })
}

/// Feasibility of `p = Σ (λ⁺ⱼ − λ⁻ⱼ) qⱼ` with `λ ≥ 0`, `Σ λ ≤ 1`.
fn in_absolute_hull(p: &RatVec, others: &[&RatVec]) -> Result<bool> {
    let k = others.len();
    if k == 0 {
        return Ok(p.is_zero());
    }
    let vars = 2 * k;
    let mut cons = Vec::new();
    for row in 0..p.dim() {
        let normal =
            RatVec::new((0..vars).map(|j| if j < k { others[j][row].clone() } else { -&others[j - k][row] }).collect());
        cons.extend(LinConstraint::equality(&normal, &p[row]));
    }
    for j in 0..vars {
        cons.push(LinConstraint::new(-&RatVec::unit(vars, j), Rational::zero()));
    }
    cons.push(LinConstraint::new(RatVec::new(vec![Rational::one(); vars]), Rational::one()));
    Ok(lp::feasible_point(vars, &cons)?.is_some())
}

/// The `m × r` basis of `W` whose `i`-th component is `vᵢ`.
pub fn operator_space_basis(ext: &ExtremeSet) -> Basis {
    Basis::from_components(ext.points()).expect("validated extreme points span the space")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpSpaceReport {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub w_basis: Basis,
    /// Strict class count `q` of the `W` basis.
    pub strict_count: usize,
    /// `2·q·n`.
    pub facet_count: usize,
    pub w_vertices: VertexList,
    /// `|Ext(B_W)|`.
    pub ext_w: usize,
    /// `|Ext(B_W)|ⁿ`.
    pub extreme_contractions: BigUint,
    pub facet_formula: String,
    pub contraction_formula: String,
    /// Result of rerunning the pipeline on the `n`-fold direct sum, when small enough.
    pub direct_sum_cross_check: Option<bool>,
}

/// Largest `n`-fold sum (by coefficient dimension and constraint pairs) that is
/// recomputed from scratch as a cross-check.
const CROSS_CHECK_MAX_N: usize = 2;
const CROSS_CHECK_MAX_DIM: usize = 6;
const CROSS_CHECK_MAX_CLASSES: usize = 12;

pub fn analyze_operator_space(ext: &ExtremeSet, n: usize) -> Result<OpSpaceReport> {
    if n == 0 {
        return Err(Error::Input("target dimension n must be positive".into()));
    }
    let w_basis = operator_space_basis(ext);
    let report = components::star_satisfiers(&components::components_of(&w_basis))?;
    let q = report.strict_count;
    if q != ext.r() {
        return Err(Error::Inconsistency(format!("W has {q} strict classes but X has {} extreme pairs", ext.r())));
    }
    let w_vertices = polytope::enumerate_vertices(&polytope::unit_ball_hrep(&w_basis));
    let ext_w = w_vertices.len();
    if !ext_w.is_multiple_of(2) {
        return Err(Error::Inconsistency(format!("odd vertex count {ext_w} for a symmetric ball")));
    }
    let extreme_contractions = Pow::pow(BigUint::from(ext_w), n);

    let direct_sum_cross_check =
        if n <= CROSS_CHECK_MAX_N && ext.m() * n <= CROSS_CHECK_MAX_DIM && ext.r() * n <= CROSS_CHECK_MAX_CLASSES {
            let sum = spaces::direct_sum_power(&w_basis, n)?;
            let sum_strict = components::star_satisfiers(&components::components_of(&sum))?.strict_count;
            let sum_vertices = polytope::enumerate_vertices(&polytope::unit_ball_hrep(&sum)).len();
            let ok = sum_strict == q * n && BigUint::from(sum_vertices) == extreme_contractions;
            if !ok {
                return Err(Error::Inconsistency(format!(
                    "direct-sum rerun gave {sum_strict} strict classes and {sum_vertices} vertices, expected {} and {}",
                    q * n,
                    extreme_contractions
                )));
            }
            Some(true)
        } else {
            None
        };

    Ok(OpSpaceReport {
        m: ext.m(),
        n,
        r: ext.r(),
        w_basis,
        strict_count: q,
        facet_count: 2 * q * n,
        w_vertices,
        ext_w,
        extreme_contractions,
        facet_formula: format!("{}n", 2 * q),
        contraction_formula: format!("{ext_w}^n"),
        direct_sum_cross_check,
    })
}

/// `‖A‖ = max_i ‖A vᵢ‖∞` for `A : X → ℓ∞ⁿ` given as an `n × m` matrix.
pub fn operator_norm(a: &RatMat, ext: &ExtremeSet) -> Result<Rational> {
    if a.ncols() != ext.m() {
        return Err(Error::Dimension(format!("operator has {} columns, X has dimension {}", a.ncols(), ext.m())));
    }
    Ok(ext.points().iter().map(|v| a.mul_vec(v).max_abs()).max().unwrap_or_else(Rational::zero))
}
