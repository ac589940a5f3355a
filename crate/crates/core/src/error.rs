use thiserror::Error;

pub type Result<T> = std::result::Result<T, PofError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PofError {
    #[error("length mismatch: {limits} limits but {costs} costs")]
    LengthMismatch { limits: usize, costs: usize },

    #[error("need at least 2 players, got {0}")]
    TooFewPlayers(usize),

    #[error("limit L[{index}] = {value} must be positive and finite")]
    NonPositiveLimit { index: usize, value: f64 },

    #[error("cost c[{index}] = {value} must be nonnegative and finite")]
    NegativeCost { index: usize, value: f64 },

    #[error("player {index} cannot reach its maximum: c*L = {product} > 1")]
    UnachievableMaximum { index: usize, product: f64 },

    #[error("invalid number of players n = {0} (need n >= 2)")]
    InvalidN(usize),

    #[error("water-filling did not reach tolerance {tol:e} (residual {residual:e})")]
    ToleranceNotReached { tol: f64, residual: f64 },

    #[error("grid oracle supports n in {{2, 3}}, got {0}")]
    UnsupportedN(usize),

    #[error("invalid range {min}..={max}")]
    InvalidRange { min: usize, max: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}
