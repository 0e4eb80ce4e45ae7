use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The stenosis polynomial closes (or inverts) the lumen somewhere in [0, L].
    #[error("invalid geometry: wall radius ratio {eta:.6} at z = {z:.6} is not positive")]
    GeometryInvalid { z: f64, eta: f64 },

    #[error("series did not converge to tol {tol:e} within {n_max} terms at eta = {eta:.6}")]
    NoConvergence { eta: f64, tol: f64, n_max: usize },

    /// The viscosity factor a1 - a2*xi^m vanishes inside the lumen. The governing
    /// equation is singular there and the series about the axis cannot reach the wall.
    #[error(
        "viscosity vanishes at xi = {radius:.6} inside the lumen (eta = {eta:.6}); \
         the model is not defined here"
    )]
    SeriesDivergent { eta: f64, radius: f64 },

    #[error("radial coordinate {xi} outside [0, {eta}]")]
    Domain { xi: f64, eta: f64 },

    #[error("degenerate flow at eta = {eta:.6}: flux bracket {bracket:e} is not positive")]
    DegenerateFlow { eta: f64, bracket: f64 },

    #[error("finite-difference matrix is singular at row {row}")]
    SingularMatrix { row: usize },

    #[error("{} station(s) failed; first at index {} (z = {}): {}",
        .failures.len(), .failures[0].index, .failures[0].z, .failures[0].error)]
    Sweep { failures: Vec<StationFailure> },

    #[error("config error in `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {message}", .path.display())]
    Csv { path: PathBuf, message: String },
}

#[derive(Debug)]
pub struct StationFailure {
    pub index: usize,
    pub z: f64,
    pub error: Error,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. } | Error::Config { .. } => 2,
            Error::NoConvergence { .. } | Error::SeriesDivergent { .. } => 3,
            Error::GeometryInvalid { .. } => 4,
            Error::Sweep { failures } => failures[0].error.exit_code(),
            _ => 1,
        }
    }

    /// True when the failure means the model has no solution at this station,
    /// as opposed to a configuration or I/O problem.
    pub fn is_out_of_domain(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::SeriesDivergent { .. }
        )
    }
}
