use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// Energy at or above the lowest in-barrier channel edge.
    #[error("above barrier: E_k = {energy} MeV, ceiling = {ceiling} MeV")]
    AboveBarrier { energy: f64, ceiling: f64 },

    /// Total energy at or below the rest energy, so no incident plane wave exists.
    #[error("no propagating incident wave: E = {energy} MeV <= mc^2 = {rest_energy} MeV")]
    NoPropagatingWave { energy: f64, rest_energy: f64 },

    #[error("degenerate state: {0}")]
    DegenerateState(&'static str),

    #[error("ill-conditioned linear system: {0}")]
    IllConditioned(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("finite-difference step too small: h = {h}, floor = {floor}")]
    StepSize { h: f64, floor: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Stable machine-readable tag, used by the CLI error line.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::AboveBarrier { .. } => "above_barrier",
            Error::NoPropagatingWave { .. } => "no_propagating_wave",
            Error::DegenerateState(_) => "degenerate_state",
            Error::IllConditioned(_) => "ill_conditioned",
            Error::Quadrature(_) => "quadrature",
            Error::StepSize { .. } => "step_size",
            Error::InvalidConfig(_) => "invalid_config",
            Error::Io { .. } => "io",
        }
    }
}
