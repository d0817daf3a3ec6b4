use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("oracle did not converge: {0}")]
    NonConvergence(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("degenerate null space: {0}")]
    DegenerateNullSpace(String),

    #[error("asymptotic populations disagree with the closed form: null space gives {null_space}, closed form gives {closed_form}")]
    ClosedFormMismatch { null_space: f64, closed_form: f64 },

    #[error("empty trajectory")]
    EmptyTrajectory,

    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
