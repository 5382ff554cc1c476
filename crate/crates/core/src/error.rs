use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point ({re}, {im}) is not inside the open unit disk")]
    NotInterior { re: f64, im: f64 },

    #[error("point ({re}, {im}) is not on the unit circle")]
    NotUnimodular { re: f64, im: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error(
        "truncation budget exceeded: tail bound at |z| = {radius} needs more than {budget} terms for tol {tol:e}"
    )]
    TruncationBudgetExceeded { radius: f64, budget: usize, tol: f64 },

    #[error("boundary point lies within {distance:e} of the spectrum")]
    SpectrumHit { distance: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("derivative vanishes at the boundary point (|u'| = {0:e})")]
    DerivativeVanishes(f64),

    #[error("sequence is not radial: {0}")]
    NotRadial(String),

    #[error("eta = {eta} outside (0, {eta_max})")]
    EtaOutOfRange { eta: f64, eta_max: f64 },

    #[error("error bound {bound:e} cannot be pushed below tol {tol:e} at this point")]
    PrecisionUnattainable { bound: f64, tol: f64 },

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: &std::path::Path, err: impl std::fmt::Display) -> Self {
        Error::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }
}

impl Error {
    /// Process exit status for the command-line front end: 2 for malformed
    /// input, 3 when a truncation certificate cannot be met, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidSpec(_)
            | Error::InvalidArgument(_)
            | Error::NotInterior { .. }
            | Error::NotUnimodular { .. }
            | Error::EtaOutOfRange { .. } => 2,
            Error::TruncationBudgetExceeded { .. } | Error::PrecisionUnattainable { .. } => 3,
            _ => 1,
        }
    }
}
