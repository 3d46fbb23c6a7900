use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("the origin is not strictly inside the hull of the given points")]
    OriginNotInterior,

    #[error("degenerate hull: {0}")]
    DegenerateHull(String),

    #[error("unsupported dimension {dim}: {reason}")]
    UnsupportedDimension { dim: usize, reason: &'static str },

    #[error("inconsistent dual pair: {0}")]
    InconsistentPair(String),

    #[error("point is not on the boundary (residual {residual:e})")]
    NotOnBoundary { residual: f64 },

    #[error("this boundary is unbounded; a sampling window is required")]
    WindowRequired,

    #[error("the boundary has a corner at this point; its normal is undefined")]
    CornerPoint,

    #[error("the boundary is not twice differentiable here")]
    NotTwiceDifferentiableHere,

    #[error("oracle budget {0} is below the minimum of 100 samples")]
    BudgetTooSmall(usize),

    #[error("the polytope is not inscribed in a sphere centred at the origin")]
    NotInscribed,

    #[error("every coordinate ended up in the zero set; the exterior scan cannot close")]
    EmptyComplement,

    #[error("point lies outside the domain of this setup")]
    OutsideDomain,

    #[error("support function is not differentiable at this direction ({ties} maximising vertices)")]
    SupportNotDifferentiable { ties: usize },

    #[error("point has {0} closest points; the derivative formula needs a unique one")]
    MultipleClosestPoints(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
