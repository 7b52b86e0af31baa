//! Simulation and analysis of the long-time revival structure of radial
//! Rydberg wave packets: Kepler motion, full and fractional revivals, and the
//! superrevivals and fractional superrevivals that follow at `t ≫ t_rev`.
//!
//! Everything is in atomic units unless a function name says otherwise.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod io;
pub mod packet;
pub mod phase;
pub mod radial;
pub mod spectrum;
pub mod units;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use packet::{
    autocorrelation, autocorrelation_series, phase_expansion_terms, AutocorrelationSeries, Level,
    PhaseExpansionTerms, WeightDistribution,
};
pub use spectrum::{EnergyDerivatives, EnergyKind, EnergyModel, ExpansionPoint, TimeScales};
pub use units::{to_nanoseconds, to_si_seconds, ATOMIC_UNIT_OF_TIME_S};
