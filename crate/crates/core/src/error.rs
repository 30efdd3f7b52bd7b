use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("basis vectors are linearly dependent (rank {rank} < {m})")]
    DependentBasis { rank: usize, m: usize },

    #[error("component is the zero vector")]
    ZeroComponent,

    #[error("point is interior to the unit ball (norm {norm} < 1)")]
    NotOnSphere { norm: String },

    #[error("point lies outside the unit ball (norm {norm} > 1)")]
    NotInBall { norm: String },

    #[error("extreme points do not span the space (rank {rank} < {m})")]
    NotABall { rank: usize, m: usize },

    #[error("point #{index} {point} is not extreme: it lies in the absolute convex hull of the others")]
    NotExtreme { index: usize, point: String },

    #[error("invalid input: {0}")]
    Input(String),

    /// Two independent computations disagreed. Always a bug or a falsified claim.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    /// Whether this error reports an oracle disagreement rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Inconsistency(_))
    }
}
