//! Versioned JSON problem files.

use serde::{Deserialize, Serialize};

use polyball::components::{Basis, ComponentSet};
use polyball::opspace::{self, ExtremeSet};
use polyball::RatVec;

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;

/// Raw problem file as written on disk.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub version: u32,
    #[serde(default)]
    pub source: Option<String>,
    #[serde(default)]
    pub basis: Option<Vec<RatVec>>,
    #[serde(default)]
    pub component_set: Option<Vec<RatVec>>,
    #[serde(default)]
    pub extreme_points: Option<Vec<RatVec>>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub query_beta: Option<RatVec>,
    #[serde(default)]
    pub s: Option<usize>,
}

/// The space under study.
#[derive(Clone, Debug)]
pub enum Subject {
    /// Rows span a subspace of `ℓ∞ⁿ`.
    Basis(Basis),
    /// Components of a finite closure model, one vector in `ℚᵐ` per coordinate.
    ComponentSet(ComponentSet),
    /// `L(X, ℓ∞ⁿ)` with `X` given by one extreme point per `±` pair.
    Operator { ext: ExtremeSet, n: usize },
}

#[derive(Clone, Debug)]
pub struct Problem {
    pub subject: Subject,
    pub source: Option<String>,
    pub query_beta: Option<RatVec>,
    pub s: Option<usize>,
}

/// Canonical echo of the input in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputEcho {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    /// Dimension of the coefficient space.
    pub m: usize,
    /// Number of coordinates of the ambient `ℓ∞` (or extreme pairs for operator problems).
    pub coordinates: usize,
    pub vectors: Vec<RatVec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub query_beta: Option<RatVec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
}

impl Problem {
    pub fn parse(text: &str) -> CliResult<Self> {
        let raw: ProblemFile = serde_json::from_str(text)?;
        Self::from_file(raw)
    }

    pub fn from_file(raw: ProblemFile) -> CliResult<Self> {
        if raw.version != SCHEMA_VERSION {
            return Err(CliError::Input(format!(
                "unsupported schema version {}, expected {SCHEMA_VERSION}",
                raw.version
            )));
        }
        let given = [raw.basis.is_some(), raw.component_set.is_some(), raw.extreme_points.is_some()];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(CliError::Input("exactly one of basis, component_set, extreme_points must be given".into()));
        }
        if raw.n.is_some() != raw.extreme_points.is_some() {
            return Err(CliError::Input("n is required with extreme_points and only allowed there".into()));
        }
        let subject = if let Some(rows) = raw.basis {
            Subject::Basis(Basis::from_rows(rows)?)
        } else if let Some(components) = raw.component_set {
            Subject::ComponentSet(ComponentSet::new(components)?)
        } else {
            let ext = opspace::validate_extreme_set(raw.extreme_points.unwrap_or_default())?;
            let n = raw.n.unwrap_or_default();
            if n == 0 {
                return Err(CliError::Input("n must be positive".into()));
            }
            Subject::Operator { ext, n }
        };
        let problem = Problem { subject, source: raw.source, query_beta: raw.query_beta, s: raw.s };
        if let Some(beta) = &problem.query_beta {
            problem.check_beta_dim(beta)?;
        }
        Ok(problem)
    }

    /// The basis whose unit ball is analysed: the input basis, the closure model read as
    /// a basis of `ℓ∞ᴺ`, or the operator-space basis `W`.
    pub fn basis(&self) -> CliResult<Basis> {
        match &self.subject {
            Subject::Basis(b) => Ok(b.clone()),
            Subject::ComponentSet(cs) => Basis::from_components(cs.components()).map_err(|e| match e {
                polyball::Error::DependentBasis { rank, m } => CliError::Core(polyball::Error::NotABall { rank, m }),
                other => other.into(),
            }),
            Subject::Operator { ext, .. } => Ok(opspace::operator_space_basis(ext)),
        }
    }

    pub fn m(&self) -> usize {
        match &self.subject {
            Subject::Basis(b) => b.m(),
            Subject::ComponentSet(cs) => cs.dim(),
            Subject::Operator { ext, .. } => ext.m(),
        }
    }

    pub fn provenance(&self) -> Option<String> {
        matches!(self.subject, Subject::ComponentSet(_)).then(|| "user-supplied closure".to_string())
    }

    pub fn check_beta_dim(&self, beta: &RatVec) -> CliResult<()> {
        if beta.dim() != self.m() {
            return Err(CliError::Input(format!("query beta has dimension {}, expected {}", beta.dim(), self.m())));
        }
        Ok(())
    }

    pub fn echo(&self) -> InputEcho {
        let (kind, vectors, coordinates, n) = match &self.subject {
            Subject::Basis(b) => ("basis", b.vectors().rows().to_vec(), b.n(), None),
            Subject::ComponentSet(cs) => ("component_set", cs.components().to_vec(), cs.len(), None),
            Subject::Operator { ext, n } => ("extreme_points", ext.points().to_vec(), ext.r(), Some(*n)),
        };
        InputEcho {
            kind,
            source: self.source.clone(),
            m: self.m(),
            coordinates,
            vectors,
            n,
            query_beta: self.query_beta.clone(),
            s: self.s,
        }
    }
}
