use alloc::boxed::Box;
use alloc::string::String;

use crate::minkowski::SpacetimePoint;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("curve segment {index} is not future-directed causal")]
    NonCausalSegment { index: usize },

    #[error("curve parameters must be strictly increasing (segment {index})")]
    NonIncreasingParameter { index: usize },

    #[error("a curve needs at least two samples")]
    CurveTooShort,

    #[error("({}, {}) does not causally precede ({}, {})", from.t, from.x, to.t, to.x)]
    NotCausallyOrdered { from: SpacetimePoint, to: SpacetimePoint },

    #[error("state vector is not normalised (|ξ|² = {norm_sq})")]
    NotNormalised { norm_sq: f64 },

    #[error("Bloch vector has norm {norm} > 1")]
    OutsideBlochBall { norm: f64 },

    #[error("matrix is not unitary (deviation {deviation})")]
    NotUnitary { deviation: f64 },

    #[error("parallel angle is undefined at a pole")]
    Pole,

    #[error("latitudes differ ({0} vs {1})")]
    LatitudeMismatch(f64, f64),

    #[error("syntax error at offset {offset}: expected {expected}, found {found}")]
    Syntax {
        offset: usize,
        expected: &'static str,
        found: String,
    },

    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("domain error in `{subexpr}` at ({}, {})", at.t, at.x)]
    Domain { subexpr: String, at: SpacetimePoint },

    #[error("field evaluation failed at grid node ({}, {}): {source}", at.t, at.x)]
    AtNode {
        at: SpacetimePoint,
        source: Box<Error>,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),

    #[error("matrix is not Hermitian (defect {defect})")]
    NotHermitian { defect: f64 },

    #[error("conformal factor must be positive, got {0}")]
    NonPositiveConformalFactor(f64),

    #[error("diagonal entries differ; the a = b check needs identical expressions")]
    DiagonalMismatch,

    #[error("the states are causally related; no separating element exists")]
    Related,

    #[error("the states are not causally related")]
    NotRelated,

    #[error("witness precondition failed: {0}")]
    WitnessPrecondition(&'static str),

    #[error("point ({}, {}) is not on the witness curve", at.t, at.x)]
    OffCurve { at: SpacetimePoint },

    #[error("point ({}, {}) lies outside the certified region", at.t, at.x)]
    OutsideRegion { at: SpacetimePoint },

    #[error("invalid sampler configuration: {0}")]
    Config(&'static str),

    #[error("generated element failed cone certification (min eigenvalue {min_eigenvalue})")]
    GeneratorCertification { min_eigenvalue: f64 },
}
