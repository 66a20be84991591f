use thiserror::Error;

use crate::surface::CurveId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid slope: {0}")]
    InvalidSlope(String),

    #[error("curve {0} is not an internal pants curve")]
    CurveNotInternal(CurveId),

    #[error("unknown curve {0}")]
    UnknownCurve(CurveId),

    #[error("move not applicable on {curve}: {reason}")]
    MoveNotApplicable { curve: CurveId, reason: String },

    #[error("invalid path at move {index}: {source}")]
    InvalidPath {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("path endpoint does not match the image of the base decomposition")]
    PathEndpointMismatch,

    #[error("end behavior does not sum to zero (sum = {0})")]
    UnbalancedEndBehavior(i64),

    #[error("end {0} has zero shift")]
    ZeroShiftEnd(String),

    #[error("unknown end {0}")]
    UnknownEnd(String),

    #[error("handle strips inconsistent with window: {0}")]
    InvalidStrips(String),

    #[error("decomposition is not compatible with the map's window: {0}")]
    SupportMismatch(String),

    #[error("curve {0} lies outside the support window")]
    CurveOutsideWindow(CurveId),

    #[error("window shape not supported by the pants action: {0}")]
    UnsupportedWindow(String),

    #[error("orbit of {curve} does not terminate: {reason}")]
    NonTerminatingOrbit { curve: CurveId, reason: String },

    #[error("empty subsurface projection: {0}")]
    EmptyProjection(String),

    #[error("convention violated: {0}")]
    ConventionViolation(String),

    #[error("orbit left the truncation window after {steps} steps")]
    OrbitEscapedWindow { steps: u32 },

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
