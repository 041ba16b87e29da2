use thiserror::Error;

use crate::model::ValidationReport;
use crate::numerics::NumericsError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid configuration: {0}")]
    Invalid(ValidationReport),
    #[error("singular parameter d = {d}: {reason}")]
    SingularParameter { d: f64, reason: &'static str },
    #[error("equilibrium system is singular at d = {d}")]
    SingularSystem { d: f64 },
    #[error("{what} index {index} out of range (len {len})")]
    IndexOutOfRange { what: &'static str, index: usize, len: usize },
    #[error("state shape {found_firms}x{found_markets} does not match game {firms}x{markets}")]
    ShapeMismatch { firms: usize, markets: usize, found_firms: usize, found_markets: usize },
    #[error("operation requires a duopoly, game has {0} firms")]
    NotDuopoly(usize),
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;
