use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point {0:?} is not on the grid")]
    PointNotOnGrid(Vec<f64>),
    #[error("distributions live on different grids")]
    GridMismatch,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("not a probability vector: {0}")]
    NotProbability(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("value {value} is not representable on the target grid")]
    NotRepresentable { value: f64 },
    #[error("grid too large: {points} points exceeds limit {limit}")]
    GridTooLarge { points: usize, limit: usize },
    #[error("lattice construction failed: mass {mass} at point {point:?}")]
    ConstructionFailed { point: Vec<f64>, mass: f64 },
    #[error("validation failed at {location}: {message}")]
    Validation { location: String, message: String },
    #[error("no monotone selection exists for the given prior sets")]
    EmptySelection,
    #[error("opponent type profile {profile:?} has zero probability for player {player} type {ty}")]
    ZeroProbability { player: usize, ty: usize, profile: Vec<usize> },
    #[error("custom preferences have no scalar satisfaction value")]
    NoScalarSatisfaction,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("enumeration cap exceeded: {count} > {cap}")]
    CapExceeded { count: u128, cap: u128 },
    #[error("linear program failed: {0}")]
    LpFailure(String),
    #[error("iteration did not reach a fixed point within {sweeps} sweeps")]
    Oscillation { sweeps: usize },
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            location: location.into(),
            message: message.into(),
        }
    }
}
