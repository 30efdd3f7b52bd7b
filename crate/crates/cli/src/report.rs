//! Report sections. Coordinates are 1-based and every list is canonically sorted.

use std::collections::BTreeSet;

use serde::Serialize;

use polyball::components::{self, Basis, Verdict};
use polyball::opspace::{self, ExtremeSet};
use polyball::polytope::{self, FaceDescriptor, Sign};
use polyball::spaces;
use polyball::{RatVec, Rational};

use crate::error::CliResult;
use crate::problem::{InputEcho, Problem, Subject};

pub const LINEAR_INVARIANCE_NOTE: &str =
    "counts are invariant under invertible linear maps of X, so a rational affine model gives the same numbers as the metric polygon";

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<InputEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<ComponentsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub facets: Option<FacetsSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<VerticesSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embedding: Option<EmbeddingSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator_space: Option<OperatorSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub query: Option<QuerySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<crate::verify::VerifySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub demos: Option<Vec<DemoEntry>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, problem: Option<&Problem>) -> Self {
        Report {
            command: command.to_string(),
            input: problem.map(Problem::echo),
            provenance: problem.and_then(Problem::provenance),
            ..Report::default()
        }
    }

    /// Headline lines printed first in text output.
    pub fn summary(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(c) = &self.components {
            out.push(format!("strict_count: {}, weak_count: {}", c.strict_count, c.weak_count));
        }
        if let Some(f) = &self.facets {
            out.push(format!("facet_count: {}", f.facet_count));
        }
        if let Some(v) = &self.vertices {
            out.push(format!("vertex_count: {}", v.count));
        }
        if let Some(s) = &self.space {
            out.push(format!("iso_to_linf_m: {}, embeddable_min_s: {}", s.iso_to_linf_m, s.embeddable_min_s));
        }
        if let Some(o) = &self.operator_space {
            out.push(format!("extreme_contractions: {}, facets: {}", o.extreme_contractions, o.facet_count));
        }
        if let Some(q) = &self.query {
            out.push(format!("is_extreme: {}, face_dim: {}", q.is_extreme, q.face_dim));
        }
        if let Some(v) = &self.verify {
            out.push(format!("verify: {} passed, {} failed", v.passed, v.failed));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassRow {
    pub representative: RatVec,
    pub coordinates: Vec<usize>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<RatVec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentsSection {
    pub classes: Vec<ClassRow>,
    pub strict_count: usize,
    pub weak_count: usize,
    pub strict_classes: Vec<RatVec>,
    pub weak_classes: Vec<RatVec>,
    /// Weak verdicts recomputed by the plain feasibility route agree with the margin route.
    pub weak_routes_agree: bool,
    /// Classes that are weak but not strict.
    pub weak_only: Vec<RatVec>,
    pub weak_strict_divergence: bool,
}

fn one_based(members: &[usize]) -> Vec<usize> {
    members.iter().map(|i| i + 1).collect()
}

pub fn components_section(basis: &Basis) -> CliResult<ComponentsSection> {
    let cs = components::components_of(basis);
    let report = components::star_satisfiers(&cs)?;
    let weak = components::weak_star_satisfiers(&cs)?;
    let margin_route: BTreeSet<RatVec> = report.weak_representatives().into_iter().collect();
    let feasibility_route: BTreeSet<RatVec> = weak.weak_representatives().into_iter().collect();
    let classes: Vec<ClassRow> = report
        .classes
        .iter()
        .map(|c| ClassRow {
            representative: c.class.representative.clone(),
            coordinates: one_based(&c.class.members),
            verdict: c.verdict,
            margin: c.certificate.as_ref().map(|cert| cert.margin.to_string()),
            beta: c.certificate.as_ref().map(|cert| cert.beta.clone()),
        })
        .collect();
    let weak_only: Vec<RatVec> = report.weak_only().iter().map(|c| c.class.representative.clone()).collect();
    Ok(ComponentsSection {
        classes,
        strict_count: report.strict_count,
        weak_count: report.weak_count,
        strict_classes: sorted(report.strict_representatives()),
        weak_classes: sorted(report.weak_representatives()),
        weak_routes_agree: margin_route == feasibility_route,
        weak_strict_divergence: !weak_only.is_empty(),
        weak_only,
    })
}

pub fn divergence_note(section: &ComponentsSection) -> Option<String> {
    section.weak_strict_divergence.then(|| {
        let list: Vec<String> = section.weak_only.iter().map(RatVec::to_string).collect();
        format!(
            "weak and strict verdicts differ on {}: the weak property holds with margin 0 only; reported, not treated as a failure",
            list.join(", ")
        )
    })
}

fn sorted(mut v: Vec<RatVec>) -> Vec<RatVec> {
    v.sort();
    v
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetRow {
    pub representative: RatVec,
    pub coordinates: Vec<usize>,
    pub facet: bool,
    /// Point on the facet strictly inside every other class constraint.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interior_witness: Option<RatVec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub redundancy_optimum: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetsSection {
    pub facet_count: usize,
    pub classes: Vec<FacetRow>,
}

pub fn facets_section(basis: &Basis) -> CliResult<FacetsSection> {
    let ball = polytope::unit_ball_hrep(basis);
    let facets = polytope::facet_classes(&ball)?;
    let classes = facets
        .iter()
        .map(|f| FacetRow {
            representative: f.class.representative.clone(),
            coordinates: one_based(&f.class.members),
            facet: f.facet,
            interior_witness: f.interior_witness(&ball),
            redundancy_optimum: f.redundancy.optimum.as_ref().map(Rational::to_string),
        })
        .collect();
    Ok(FacetsSection { facet_count: polytope::facet_count(&facets), classes })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TightCoordinate {
    pub coordinate: usize,
    pub sign: Sign,
}

fn tight_list(face: &FaceDescriptor) -> Vec<TightCoordinate> {
    face.tight.iter().map(|(&i, &sign)| TightCoordinate { coordinate: i + 1, sign }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexRow {
    pub beta: RatVec,
    /// The vertex as a point of the ambient `ℓ∞ⁿ`.
    pub point: RatVec,
    pub tight: Vec<TightCoordinate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerticesSection {
    pub count: usize,
    pub vertices: Vec<VertexRow>,
}

pub fn vertices_section(basis: &Basis) -> VerticesSection {
    let ball = polytope::unit_ball_hrep(basis);
    let list = polytope::enumerate_vertices(&ball);
    let vertices = list
        .vertices
        .iter()
        .map(|v| VertexRow { beta: v.beta.clone(), point: basis.combine(&v.beta), tight: tight_list(&v.face) })
        .collect();
    VerticesSection { count: list.len(), vertices }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpaceSection {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub weak_count: usize,
    pub facet_count: usize,
    /// `|Ext(B_W)|`; with `facet_count` a fingerprint that isometric spaces share.
    pub extreme_count: usize,
    pub iso_to_linf_m: bool,
    pub verdict: String,
    pub embeddable_min_s: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub embeddable_into_s: Option<bool>,
}

pub fn space_section(basis: &Basis, s: Option<usize>) -> CliResult<SpaceSection> {
    let v = spaces::space_verdict(basis)?;
    let verdict = if v.iso_to_linf_m {
        format!("isometrically isomorphic to l_inf^{}", v.m)
    } else {
        format!("not isometrically isomorphic to l_inf^{}", v.m)
    };
    let embeddable_into_s = s.map(|s| spaces::decide_embeddability(basis, s)).transpose()?;
    Ok(SpaceSection {
        m: v.m,
        n: v.n,
        r: v.strict_count,
        weak_count: v.weak_count,
        facet_count: v.facet_count,
        extreme_count: polytope::enumerate_vertices(&polytope::unit_ball_hrep(basis)).len(),
        iso_to_linf_m: v.iso_to_linf_m,
        verdict,
        embeddable_min_s: v.embeddable_min_s,
        s,
        embeddable_into_s,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingSection {
    pub target_dim: usize,
    /// Strict class representatives in coordinate order; the `k`-th entries form `bₖ`.
    pub strict_representatives: Vec<RatVec>,
    /// Images `bₖ ∈ ℓ∞ʳ` of the basis vectors.
    pub image_basis: Vec<RatVec>,
    pub norm_checked_points: usize,
}

pub fn embedding_section(basis: &Basis) -> CliResult<EmbeddingSection> {
    let map = spaces::embed_into_linf(basis)?;
    Ok(EmbeddingSection {
        target_dim: map.target_dim(),
        strict_representatives: map.strict_reps.clone(),
        image_basis: map.image.vectors().rows().to_vec(),
        norm_checked_points: map.checked_points,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OperatorSection {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub w_basis: Vec<RatVec>,
    pub strict_count: usize,
    pub facet_count: usize,
    pub facet_formula: String,
    pub ext_w: usize,
    pub extreme_contractions: String,
    pub contraction_formula: String,
    pub w_vertices: Vec<RatVec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direct_sum_cross_check: Option<bool>,
}

pub fn operator_section(ext: &ExtremeSet, n: usize) -> CliResult<OperatorSection> {
    let rep = opspace::analyze_operator_space(ext, n)?;
    Ok(OperatorSection {
        m: rep.m,
        n: rep.n,
        r: rep.r,
        w_basis: rep.w_basis.vectors().rows().to_vec(),
        strict_count: rep.strict_count,
        facet_count: rep.facet_count,
        facet_formula: rep.facet_formula,
        ext_w: rep.ext_w,
        extreme_contractions: rep.extreme_contractions.to_string(),
        contraction_formula: rep.contraction_formula,
        w_vertices: rep.w_vertices.betas(),
        direct_sum_cross_check: rep.direct_sum_cross_check,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuerySection {
    pub beta: RatVec,
    pub norm: String,
    pub tight: Vec<TightCoordinate>,
    pub face_dim: usize,
    pub is_extreme: bool,
    /// Independent LP-extension decision; always equal to `is_extreme`.
    pub is_maximal_star_constant: bool,
}

pub fn query_section(basis: &Basis, beta: &RatVec) -> CliResult<QuerySection> {
    let ball = polytope::unit_ball_hrep(basis);
    let face = polytope::minimal_face(&ball, beta)?;
    let is_extreme = polytope::is_extreme(&ball, beta)?;
    let is_maximal = polytope::is_maximal_star_constant(&ball, beta)?;
    if is_extreme != is_maximal {
        return Err(crate::error::CliError::Inconsistency(format!(
            "rank criterion says extreme = {is_extreme}, LP extension says maximal = {is_maximal} at {beta}"
        )));
    }
    Ok(QuerySection {
        beta: beta.clone(),
        norm: ball.norm(beta).to_string(),
        tight: tight_list(&face),
        face_dim: face.face_dim,
        is_extreme,
        is_maximal_star_constant: is_maximal,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DemoEntry {
    pub name: String,
    pub source: String,
}

/// Every applicable section for a problem.
pub fn full_report(command: &str, problem: &Problem) -> CliResult<Report> {
    let basis = problem.basis()?;
    let mut report = Report::new(command, Some(problem));
    let comps = components_section(&basis)?;
    report.notes.extend(divergence_note(&comps));
    report.components = Some(comps);
    report.facets = Some(facets_section(&basis)?);
    report.vertices = Some(vertices_section(&basis));
    report.space = Some(space_section(&basis, problem.s)?);
    report.embedding = Some(embedding_section(&basis)?);
    if let Subject::Operator { ext, n } = &problem.subject {
        report.operator_space = Some(operator_section(ext, *n)?);
        report.notes.push(LINEAR_INVARIANCE_NOTE.to_string());
    }
    if let Some(beta) = &problem.query_beta {
        report.query = Some(query_section(&basis, beta)?);
    }
    Ok(report)
}
