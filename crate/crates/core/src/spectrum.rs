//! Energy levels, their derivatives in the quantum number, and the three
//! characteristic time scales of a packet centred at an expansion point.
//!
//! All quantities are in atomic units. The energy law is
//! `E(ν) = -1 / (2 (ν - δ)²)` with a single quantum defect `δ ∈ [0, 1)`;
//! the hydrogenic case is `δ = 0`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest effective quantum number `ν - δ` accepted as an expansion point.
pub const MIN_EFFECTIVE_NU: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyKind {
    Hydrogenic,
    QuantumDefect,
}

/// Rule mapping a (possibly noninteger) quantum number to an energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyModel {
    kind: EnergyKind,
    delta: f64,
}

/// First three derivatives of `E(ν)` with respect to `ν`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyDerivatives {
    pub first: f64,
    pub second: f64,
    pub third: f64,
}

/// Centre of the Taylor expansion of the spectrum: an integer `n̄` for
/// resonant excitation or a noninteger `N*` for a detuned laser.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionPoint {
    nu: f64,
}

/// Kepler period, revival time and superrevival time, in atomic units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeScales {
    pub t_cl: f64,
    pub t_rev: f64,
    pub t_sr: f64,
}

impl EnergyModel {
    pub fn hydrogenic() -> Self {
        Self {
            kind: EnergyKind::Hydrogenic,
            delta: 0.0,
        }
    }

    /// Alkali-like levels shifted by a single quantum defect.
    ///
    /// Defects of one or more must be folded into the integer part of `n`
    /// by the caller.
    pub fn quantum_defect(delta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&delta) {
            return Err(Error::InvalidDefect(delta));
        }
        Ok(Self {
            kind: EnergyKind::QuantumDefect,
            delta,
        })
    }

    /// Hydrogenic for `delta == 0`, quantum-defect otherwise.
    pub fn with_delta(delta: f64) -> Result<Self> {
        if delta == 0.0 {
            Ok(Self::hydrogenic())
        } else {
            Self::quantum_defect(delta)
        }
    }

    pub fn kind(&self) -> EnergyKind {
        self.kind
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// `ν - δ`, or a domain error when it is not positive.
    fn effective(&self, nu: f64) -> Result<f64> {
        let x = nu - self.delta;
        if x > 0.0 && x.is_finite() {
            Ok(x)
        } else {
            Err(Error::Domain(format!(
                "effective quantum number nu - delta = {x} must be positive"
            )))
        }
    }

    pub fn energy(&self, nu: f64) -> Result<f64> {
        let x = self.effective(nu)?;
        Ok(-0.5 / (x * x))
    }

    /// Energy of integer level `n`. Always defined since `n >= 1 > δ`.
    pub(crate) fn level_energy(&self, n: u32) -> f64 {
        let x = f64::from(n) - self.delta;
        -0.5 / (x * x)
    }

    /// Derivatives at any `ν` with `ν - δ > 0`, without the expansion-point
    /// lower bound.
    pub(crate) fn derivatives_at(&self, nu: f64) -> Result<EnergyDerivatives> {
        let x = self.effective(nu)?;
        Ok(EnergyDerivatives {
            first: x.powi(-3),
            second: -3.0 * x.powi(-4),
            third: 12.0 * x.powi(-5),
        })
    }

    pub fn energy_derivatives(&self, point: ExpansionPoint) -> Result<EnergyDerivatives> {
        self.check_point(point)?;
        self.derivatives_at(point.nu)
    }

    pub fn time_scales(&self, point: ExpansionPoint) -> Result<TimeScales> {
        let d = self.energy_derivatives(point)?;
        Ok(TimeScales::from_derivatives(&d))
    }

    /// Kepler period `2π / E'` at an arbitrary positive effective `ν`.
    pub(crate) fn kepler_period_at(&self, nu: f64) -> Result<f64> {
        Ok(TAU / self.derivatives_at(nu)?.first.abs())
    }

    pub fn check_point(&self, point: ExpansionPoint) -> Result<()> {
        let x = point.nu - self.delta;
        if x >= MIN_EFFECTIVE_NU {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "expansion point nu - delta = {x} is below {MIN_EFFECTIVE_NU}"
            )))
        }
    }
}

impl Default for EnergyModel {
    fn default() -> Self {
        Self::hydrogenic()
    }
}

impl ExpansionPoint {
    pub fn new(nu: f64) -> Result<Self> {
        if nu.is_finite() {
            Ok(Self { nu })
        } else {
            Err(Error::Domain(format!("expansion point {nu} is not finite")))
        }
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }
}

impl TimeScales {
    /// Periods of the linear, quadratic and cubic terms of the expansion.
    /// Absolute values keep the periods positive whatever the derivative signs.
    pub fn from_derivatives(d: &EnergyDerivatives) -> Self {
        Self {
            t_cl: TAU / d.first.abs(),
            t_rev: TAU / (0.5 * d.second).abs(),
            t_sr: TAU / (d.third / 6.0).abs(),
        }
    }

    /// `t_sr / q`.
    pub fn fractional_time(&self, q: u32) -> f64 {
        self.t_sr / f64::from(q)
    }

    /// `(3 / q) t_rev`.
    pub fn fractional_period(&self, q: u32) -> f64 {
        3.0 * self.t_rev / f64::from(q)
    }
}
