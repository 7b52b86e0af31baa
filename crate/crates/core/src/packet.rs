//! Eigenstate superpositions and their exact time evolution.
//!
//! A radial packet is `Ψ(t) = Σ c_n φ_n exp(-i E_n t)`. By orthonormality of
//! the `φ_n`, its autocorrelation is `A(t) = Σ |c_n|² exp(-i E_n t)`, which is
//! evaluated here term by term from the exact level energies.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::reduced_phase;
use crate::spectrum::{EnergyModel, ExpansionPoint};

/// Default Gaussian width in units of `n`.
pub const DEFAULT_SIGMA: f64 = 2.5;
/// Default number of widths retained on each side of the centre.
pub const DEFAULT_CUTOFF: f64 = 5.0;
/// Sampling steps must stay below `T_cl / KEPLER_SAMPLES_MIN`.
pub const KEPLER_SAMPLES_MIN: f64 = 20.0;

const NORMALIZATION_TOL: f64 = 1e-12;

/// One populated level: principal quantum number and probability `|c_n|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub n: u32,
    pub w: f64,
}

/// Populations `|c_n|²` over integer levels, sorted by `n` and summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightDistribution {
    levels: Vec<Level>,
    center: f64,
    sigma: f64,
}

impl WeightDistribution {
    /// Gaussian populations `w_n ∝ exp(-(n - center)² / (2σ²))` on the
    /// integers within `center ± cutoff·σ`, `n >= 1`.
    ///
    /// The centre may be noninteger (detuned excitation); the support is
    /// always integer levels.
    pub fn gaussian(center: f64, sigma: f64, cutoff: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidWeights(format!(
                "sigma = {sigma} must be positive"
            )));
        }
        if !(cutoff >= 3.0 && cutoff.is_finite()) {
            return Err(Error::InvalidWeights(format!(
                "cutoff = {cutoff} must be at least 3"
            )));
        }
        if !center.is_finite() {
            return Err(Error::InvalidWeights(format!(
                "center = {center} is not finite"
            )));
        }
        let lo = (center - cutoff * sigma).ceil().max(1.0);
        let hi = (center + cutoff * sigma).floor();
        if hi < lo || hi > f64::from(u32::MAX) {
            return Err(Error::EmptySupport);
        }
        let levels: Vec<Level> = (lo as u32..=hi as u32)
            .map(|n| {
                let k = f64::from(n) - center;
                Level {
                    n,
                    w: (-k * k / (2.0 * sigma * sigma)).exp(),
                }
            })
            .collect();
        let mut dist = Self {
            levels,
            center,
            sigma,
        };
        dist.normalize()?;
        Ok(dist)
    }

    /// Arbitrary nonnegative populations, renormalised. Centre and width are
    /// the mean and standard deviation of `n`; the width of a single line is 0.
    pub fn from_levels(levels: impl IntoIterator<Item = (u32, f64)>) -> Result<Self> {
        let mut levels: Vec<Level> = levels.into_iter().map(|(n, w)| Level { n, w }).collect();
        if levels.is_empty() {
            return Err(Error::EmptySupport);
        }
        for l in &levels {
            if l.n == 0 {
                return Err(Error::InvalidWeights("level n = 0".into()));
            }
            if !(l.w >= 0.0 && l.w.is_finite()) {
                return Err(Error::InvalidWeights(format!(
                    "weight {} at n = {}",
                    l.w, l.n
                )));
            }
        }
        levels.sort_by_key(|l| l.n);
        if levels.windows(2).any(|p| p[0].n == p[1].n) {
            return Err(Error::InvalidWeights("duplicate level".into()));
        }
        let mut dist = Self {
            levels,
            center: 0.0,
            sigma: 0.0,
        };
        dist.normalize()?;
        let mean: f64 = dist.levels.iter().map(|l| l.w * f64::from(l.n)).sum();
        let var: f64 = dist
            .levels
            .iter()
            .map(|l| l.w * (f64::from(l.n) - mean).powi(2))
            .sum();
        dist.center = mean;
        dist.sigma = var.max(0.0).sqrt();
        Ok(dist)
    }

    pub fn single_line(n: u32) -> Result<Self> {
        Self::from_levels([(n, 1.0)])
    }

    fn normalize(&mut self) -> Result<()> {
        let total: f64 = self.levels.iter().map(|l| l.w).sum();
        if !(total > 0.0) {
            return Err(Error::InvalidWeights("weights sum to zero".into()));
        }
        for l in &mut self.levels {
            l.w /= total;
        }
        self.levels.retain(|l| l.w > 0.0);
        let check: f64 = self.levels.iter().map(|l| l.w).sum();
        debug_assert!((check - 1.0).abs() < NORMALIZATION_TOL);
        Ok(())
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn n_min(&self) -> u32 {
        self.levels[0].n
    }

    pub fn n_max(&self) -> u32 {
        self.levels[self.levels.len() - 1].n
    }

    pub fn total(&self) -> f64 {
        self.levels.iter().map(|l| l.w).sum()
    }

    /// Level with the largest population (lowest `n` on ties).
    pub fn mode(&self) -> u32 {
        let mut best = self.levels[0];
        for l in &self.levels[1..] {
            if l.w > best.w {
                best = *l;
            }
        }
        best.n
    }
}

/// `A(t) = Σ w_n exp(-i E_n t)` with every phase reduced modulo 2π.
pub fn autocorrelation(model: &EnergyModel, weights: &WeightDistribution, t: f64) -> Complex64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for l in weights.levels() {
        let phase = reduced_phase(model.level_energy(l.n), t);
        let (s, c) = phase.sin_cos();
        re += l.w * c;
        im -= l.w * s;
    }
    Complex64::new(re, im)
}

/// Uniformly sampled autocorrelation together with the parameters that
/// generated it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutocorrelationSeries {
    pub times: Vec<f64>,
    pub values: Vec<Complex64>,
    pub model: EnergyModel,
    pub weights: WeightDistribution,
}

impl AutocorrelationSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn abs(&self) -> Vec<f64> {
        self.values.iter().map(|a| a.norm()).collect()
    }

    pub fn dt(&self) -> Option<f64> {
        (self.times.len() > 1).then(|| self.times[1] - self.times[0])
    }
}

/// Uniform sample times `t_start + i·dt` covering `[t_start, t_end]`.
pub fn sample_times(t_start: f64, t_end: f64, dt: f64) -> Result<Vec<f64>> {
    if !(t_start.is_finite() && t_end.is_finite()) || t_end < t_start {
        return Err(Error::InvalidWindow(format!("[{t_start}, {t_end}]")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidWindow(format!("dt = {dt} must be positive")));
    }
    // tolerate a final sample that lands a few ulps past t_end
    let steps = ((t_end - t_start) / dt * (1.0 + 1e-12)).floor() as usize;
    Ok((0..=steps).map(|i| t_start + i as f64 * dt).collect())
}

/// Samples `A(t)` on `[t_start, t_end]` with step `dt`.
///
/// `dt` must be below `T_cl / 20`, with `T_cl` the Kepler period at the
/// distribution centre, or the Kepler beat aliases.
pub fn autocorrelation_series(
    model: &EnergyModel,
    weights: &WeightDistribution,
    t_start: f64,
    t_end: f64,
    dt: f64,
) -> Result<AutocorrelationSeries> {
    let limit = model.kepler_period_at(weights.center())? / KEPLER_SAMPLES_MIN;
    if !(dt < limit) {
        return Err(Error::SamplingTooCoarse { dt, limit });
    }
    let times = sample_times(t_start, t_end, dt)?;
    let values = times
        .par_iter()
        .map(|&t| autocorrelation(model, weights, t))
        .collect();
    Ok(AutocorrelationSeries {
        times,
        values,
        model: *model,
        weights: weights.clone(),
    })
}

/// Linear, quadratic and cubic contributions to the phase `(E_n - E_ν) t`
/// and what is left over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseExpansionTerms {
    pub n: u32,
    pub t: f64,
    pub linear: f64,
    pub quadratic: f64,
    pub cubic: f64,
    pub residual: f64,
    /// `(E_n - E_ν) t` without truncation.
    pub exact: f64,
}

impl PhaseExpansionTerms {
    pub fn truncated(&self) -> f64 {
        self.linear + self.quadratic + self.cubic
    }
}

pub fn phase_expansion_terms(
    model: &EnergyModel,
    point: ExpansionPoint,
    n: u32,
    t: f64,
) -> Result<PhaseExpansionTerms> {
    if n == 0 {
        return Err(Error::Domain("level n = 0".into()));
    }
    let d = model.energy_derivatives(point)?;
    let k = f64::from(n) - point.nu();
    let linear = d.first * k * t;
    let quadratic = 0.5 * d.second * k * k * t;
    let cubic = d.third / 6.0 * k * k * k * t;
    let exact = (model.level_energy(n) - model.energy(point.nu())?) * t;
    let residual = exact - (linear + quadratic + cubic);
    Ok(PhaseExpansionTerms {
        n,
        t,
        linear,
        quadratic,
        cubic,
        residual,
        exact,
    })
}
