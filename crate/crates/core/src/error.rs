use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vector of length {found} in an ambient space of dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),

    #[error("ray index {index} out of range for a fan with {rays} rays")]
    RayOutOfRange { index: usize, rays: usize },

    #[error("cone dimension {k} out of range 0..={n}")]
    ConeDimOutOfRange { k: usize, n: usize },

    #[error("the zero cone has no boundary")]
    EmptyCone,

    #[error("character has length {found}, expected {expected}")]
    CharacterLength { expected: usize, found: usize },

    #[error("divisor has {found} coefficients, expected {expected}")]
    DivisorLength { expected: usize, found: usize },

    #[error("projective space must have dimension n >= 1")]
    InvalidFanDimension,

    #[error("bundles live on different fans (P^{0} vs P^{1})")]
    FanMismatch(usize, usize),

    #[error("invalid filtration on ray {ray}: {reason}")]
    InvalidFiltration { ray: usize, reason: String },

    #[error("invalid shifting indices {delta}: {reason}")]
    InvalidShiftingIndices { delta: String, reason: String },

    #[error("bundle splits, shifting indices are not defined")]
    SplitBundle,

    #[error("expected a rank-{expected} bundle, got rank {found}")]
    WrongRank { expected: usize, found: usize },

    #[error("operation requires the projective plane, got P^{0}")]
    NotPlane(usize),

    #[error("degree {p} out of range 0..={n}")]
    DegreeOutOfRange { p: usize, n: usize },

    #[error("invalid census parameter d = {d}: {reason}")]
    InvalidD { d: i64, reason: &'static str },

    #[error("{delta} is not in SI({d})")]
    NotInCensus { delta: String, d: i64 },

    #[error("empty twist range {0}..{1}")]
    InvalidTwistRange(i64, i64),

    #[error("parse error: {0}")]
    Parse(String),
}
