use thiserror::Error;

/// Errors produced by the simulation and analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Radial functions are only supported up to a fixed principal quantum number.
    #[error("unsupported: n = {n} exceeds the supported maximum {max}")]
    Unsupported { n: u32, max: u32 },

    #[error("invalid quantum defect {0}: must lie in [0, 1)")]
    InvalidDefect(f64),

    /// No integer level survived the weight-distribution cutoff.
    #[error("empty support: no level n >= 1 within the cutoff")]
    EmptySupport,

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    /// Requested sampling step would alias the Kepler beat.
    #[error("sampling too coarse: dt = {dt} must be below {limit}")]
    SamplingTooCoarse { dt: f64, limit: f64 },

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("peak separation {min_separation} is below twice the sample step {dt}")]
    SeparationTooSmall { min_separation: f64, dt: f64 },

    #[error("need at least {needed} peaks to estimate a period, found {found}")]
    InsufficientPeaks { needed: usize, found: usize },

    #[error("angular momentum l = {l} incompatible with level n = {n}")]
    IncompatibleL { n: u32, l: u32 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid signal: {0}")]
    InvalidSignal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
