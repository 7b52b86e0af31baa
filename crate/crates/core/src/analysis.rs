//! Revival structure extracted from sampled signals: peak trains, local
//! periods, and the scans that compare measured periods with `(3/q) t_rev`
//! near `t_sr / q`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::packet::{autocorrelation_series, WeightDistribution};
use crate::spectrum::{EnergyModel, ExpansionPoint, TimeScales};

/// Differences below this (relative to the sample magnitude) count as flat,
/// so round-off ripple on a constant signal is not reported as peaks.
const FLAT_TOL: f64 = 1e-12;

/// Local maxima of a uniformly sampled signal.
///
/// Times are refined by a three-point parabola; heights are the sampled
/// values, so they never exceed the signal's own range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakTrain {
    pub times: Vec<f64>,
    pub heights: Vec<f64>,
    pub min_height: f64,
    pub min_separation: f64,
}

impl PeakTrain {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_height(&self) -> Option<f64> {
        self.heights.iter().copied().reduce(f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakOptions {
    pub min_height: f64,
    pub min_separation: f64,
    /// Whether a first or last sample exceeding its single neighbour counts.
    /// Off for windows cut out of a longer signal, where the edges are arbitrary.
    pub include_endpoints: bool,
}

/// Peaks above `min_height`, at least `min_separation` apart, endpoints included.
pub fn find_peaks(
    times: &[f64],
    values: &[f64],
    min_height: f64,
    min_separation: f64,
) -> Result<PeakTrain> {
    find_peaks_with(
        times,
        values,
        &PeakOptions {
            min_height,
            min_separation,
            include_endpoints: true,
        },
    )
}

pub fn find_peaks_with(times: &[f64], values: &[f64], opts: &PeakOptions) -> Result<PeakTrain> {
    let dt = uniform_step(times, values)?;
    if opts.min_separation < 2.0 * dt * (1.0 - 1e-12) {
        return Err(Error::SeparationTooSmall {
            min_separation: opts.min_separation,
            dt,
        });
    }
    let m = values.len();
    let rises = |a: f64, b: f64| a - b > FLAT_TOL * a.abs().max(1.0);
    let not_below = |a: f64, b: f64| a - b >= -FLAT_TOL * a.abs().max(1.0);

    // (sample index, refined time)
    let mut candidates: Vec<(usize, f64)> = Vec::new();
    for i in 0..m {
        let y = values[i];
        if !(y >= opts.min_height) {
            continue;
        }
        let is_peak = if i == 0 {
            opts.include_endpoints && m > 1 && rises(y, values[1])
        } else if i == m - 1 {
            opts.include_endpoints && rises(y, values[i - 1])
        } else {
            rises(y, values[i - 1]) && not_below(y, values[i + 1])
        };
        if !is_peak {
            continue;
        }
        let t = if i == 0 || i == m - 1 {
            times[i]
        } else {
            times[i] + parabolic_offset(values[i - 1], y, values[i + 1]) * dt
        };
        candidates.push((i, t));
    }

    // Keep the tallest first; drop anything too close to an accepted peak.
    candidates.sort_by(|a, b| values[b.0].total_cmp(&values[a.0]).then(a.0.cmp(&b.0)));
    let mut kept: Vec<(usize, f64)> = Vec::new();
    for c in candidates {
        if kept
            .iter()
            .all(|k| (k.1 - c.1).abs() >= opts.min_separation)
        {
            kept.push(c);
        }
    }
    kept.sort_by_key(|k| k.0);

    Ok(PeakTrain {
        times: kept.iter().map(|k| k.1).collect(),
        heights: kept.iter().map(|k| values[k.0]).collect(),
        min_height: opts.min_height,
        min_separation: opts.min_separation,
    })
}

/// Vertex offset of the parabola through three equally spaced samples, in
/// units of the step, clamped to half a step.
fn parabolic_offset(left: f64, mid: f64, right: f64) -> f64 {
    let curvature = left - 2.0 * mid + right;
    if curvature >= 0.0 {
        return 0.0;
    }
    (0.5 * (left - right) / curvature).clamp(-0.5, 0.5)
}

fn uniform_step(times: &[f64], values: &[f64]) -> Result<f64> {
    if times.len() != values.len() {
        return Err(Error::InvalidSignal(format!(
            "{} times but {} values",
            times.len(),
            values.len()
        )));
    }
    if times.len() < 2 {
        return Err(Error::InvalidSignal("need at least two samples".into()));
    }
    let dt = times[1] - times[0];
    if !(dt > 0.0) {
        return Err(Error::InvalidSignal("times must increase".into()));
    }
    let scale = times[0].abs().max(times[times.len() - 1].abs());
    let tol = 1e-9 * dt + 8.0 * f64::EPSILON * scale;
    if times.windows(2).any(|p| ((p[1] - p[0]) - dt).abs() > tol) {
        return Err(Error::InvalidSignal("sampling is not uniform".into()));
    }
    Ok(dt)
}

/// Median spacing of a peak train and the spread of the spacings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodEstimate {
    pub period: f64,
    /// Standard deviation of the consecutive spacings.
    pub dispersion: f64,
    pub spacings: usize,
}

pub fn estimate_period(train: &PeakTrain) -> Result<PeriodEstimate> {
    if train.len() < 3 {
        return Err(Error::InsufficientPeaks {
            needed: 3,
            found: train.len(),
        });
    }
    let mut spacings: Vec<f64> = train.times.windows(2).map(|p| p[1] - p[0]).collect();
    let mean = spacings.iter().sum::<f64>() / spacings.len() as f64;
    let var = spacings.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / spacings.len() as f64;
    spacings.sort_by(f64::total_cmp);
    let k = spacings.len();
    let period = if k % 2 == 1 {
        spacings[k / 2]
    } else {
        0.5 * (spacings[k / 2 - 1] + spacings[k / 2])
    };
    Ok(PeriodEstimate {
        period,
        dispersion: var.sqrt(),
        spacings: k,
    })
}

/// Predicted fractional superrevival: time `t_sr / q` and period `(3/q) t_rev`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionalPrediction {
    pub q: u32,
    pub t_frac: f64,
    pub period: f64,
}

/// Predictions for `q = 3, 6, …, ≤ q_max`. Empty when `q_max < 3`.
pub fn predicted_fractional_times(scales: &TimeScales, q_max: u32) -> Vec<FractionalPrediction> {
    (1..=q_max / 3)
        .map(|j| {
            let q = 3 * j;
            FractionalPrediction {
                q,
                t_frac: scales.fractional_time(q),
                period: scales.fractional_period(q),
            }
        })
        .collect()
}

/// Sampling and detection settings for the revival scans.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanConfig {
    pub qs: Vec<u32>,
    /// Window half-width around `t_sr / q`, in predicted periods.
    pub half_width_periods: f64,
    /// Window half-width around `t_rev`, in units of `n̄ T_cl`.
    pub revival_half_width: f64,
    /// Window half-width around `t_sr / 6`, in units of `t_rev`.
    pub sixth_half_width: f64,
    /// Samples per Kepler period.
    pub samples_per_kepler: f64,
    pub min_height: f64,
    /// Minimum peak separation as a fraction of the predicted period.
    pub separation_fraction: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            qs: vec![3, 6, 9],
            half_width_periods: 1.5,
            revival_half_width: 0.1,
            sixth_half_width: 0.25,
            samples_per_kepler: 100.0,
            min_height: 0.1,
            separation_fraction: 0.5,
        }
    }
}

/// Measured versus predicted local period of `|A|` in one window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RevivalReport {
    /// `None` for the window centred on `t_sr / 6` that records the
    /// superrevival height.
    pub q: Option<u32>,
    pub window: (f64, f64),
    pub t_frac_predicted: f64,
    pub predicted_period: f64,
    pub measured_period: Option<f64>,
    pub relative_error: Option<f64>,
    pub dispersion: Option<f64>,
    pub peak_count: usize,
    /// Largest sampled `|A|` in the window.
    pub peak_max: f64,
    /// Fewer than three peaks: no period could be measured.
    pub insufficient_structure: bool,
}

/// Window `[lo, hi]` and the `|A|` samples in it.
struct WindowSignal {
    lo: f64,
    hi: f64,
    times: Vec<f64>,
    abs: Vec<f64>,
}

fn sample_abs(
    model: &EnergyModel,
    weights: &WeightDistribution,
    center: f64,
    half_width: f64,
    dt: f64,
) -> Result<WindowSignal> {
    let (lo, hi) = (center - half_width, center + half_width);
    let series = autocorrelation_series(model, weights, lo, hi, dt)?;
    let abs = series.abs();
    Ok(WindowSignal {
        lo,
        hi,
        times: series.times,
        abs,
    })
}

fn max_of(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

#[allow(clippy::too_many_arguments)]
fn window_report(
    model: &EnergyModel,
    weights: &WeightDistribution,
    q: Option<u32>,
    center: f64,
    half_width: f64,
    predicted_period: f64,
    dt: f64,
    cfg: &ScanConfig,
) -> Result<RevivalReport> {
    let w = sample_abs(model, weights, center, half_width, dt)?;
    let opts = PeakOptions {
        min_height: cfg.min_height,
        min_separation: (cfg.separation_fraction * predicted_period).max(2.0 * dt),
        include_endpoints: false,
    };
    let train = find_peaks_with(&w.times, &w.abs, &opts)?;
    let estimate = estimate_period(&train).ok();
    let measured = estimate.map(|e| e.period);
    Ok(RevivalReport {
        q,
        window: (w.lo, w.hi),
        t_frac_predicted: center,
        predicted_period,
        measured_period: measured,
        relative_error: measured.map(|m| (m - predicted_period).abs() / predicted_period),
        dispersion: estimate.map(|e| e.dispersion),
        peak_count: train.len(),
        peak_max: max_of(&w.abs),
        insufficient_structure: estimate.is_none(),
    })
}

/// Scan with the default settings: `q ∈ {3, 6, 9}` plus the `t_sr / 6`
/// superrevival window.
pub fn superrevival_scan(
    model: &EnergyModel,
    weights: &WeightDistribution,
    point: ExpansionPoint,
) -> Result<Vec<RevivalReport>> {
    superrevival_scan_with(model, weights, point, &ScanConfig::default())
}

/// For each `q`, samples `|A|` over `t_sr/q ± half_width·(3/q) t_rev`,
/// measures the median peak spacing with separations of at least half the
/// predicted period, and compares with `(3/q) t_rev`. The last report covers
/// `t_sr/6 ± sixth_half_width·t_rev` and carries `q = None`.
pub fn superrevival_scan_with(
    model: &EnergyModel,
    weights: &WeightDistribution,
    point: ExpansionPoint,
    cfg: &ScanConfig,
) -> Result<Vec<RevivalReport>> {
    let ts = model.time_scales(point)?;
    let dt = ts.t_cl / cfg.samples_per_kepler;
    let mut reports = cfg
        .qs
        .par_iter()
        .map(|&q| {
            let period = ts.fractional_period(q);
            window_report(
                model,
                weights,
                Some(q),
                ts.fractional_time(q),
                cfg.half_width_periods * period,
                period,
                dt,
                cfg,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    reports.push(window_report(
        model,
        weights,
        None,
        ts.fractional_time(6),
        cfg.sixth_half_width * ts.t_rev,
        ts.fractional_period(6),
        dt,
        cfg,
    )?);
    Ok(reports)
}

/// Largest `|A|` near the full revival and near `t_sr / 6`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RevivalComparison {
    pub revival_window: (f64, f64),
    pub revival_max: f64,
    pub revival_max_time: f64,
    pub superrevival_window: (f64, f64),
    pub superrevival_max: f64,
    pub superrevival_max_time: f64,
    /// Single-level packet or indistinguishable maxima.
    pub degenerate: bool,
}

impl RevivalComparison {
    /// Whether the packet near `t_sr/6` resembles the initial one more closely
    /// than the full revival does.
    pub fn superrevival_dominates(&self) -> bool {
        self.superrevival_max > self.revival_max
    }
}

pub fn compare_revival_vs_superrevival(
    model: &EnergyModel,
    weights: &WeightDistribution,
    point: ExpansionPoint,
) -> Result<RevivalComparison> {
    compare_revival_vs_superrevival_with(model, weights, point, &ScanConfig::default())
}

/// Scans `t_rev ± revival_half_width·n̄ T_cl` and
/// `t_sr/6 ± sixth_half_width·t_rev`, where `n̄` is the effective quantum
/// number `ν - δ` of the expansion point.
pub fn compare_revival_vs_superrevival_with(
    model: &EnergyModel,
    weights: &WeightDistribution,
    point: ExpansionPoint,
    cfg: &ScanConfig,
) -> Result<RevivalComparison> {
    let ts = model.time_scales(point)?;
    let dt = ts.t_cl / cfg.samples_per_kepler;
    let nbar = point.nu() - model.delta();
    let rev = sample_abs(
        model,
        weights,
        ts.t_rev,
        cfg.revival_half_width * nbar * ts.t_cl,
        dt,
    )?;
    let six = sample_abs(
        model,
        weights,
        ts.fractional_time(6),
        cfg.sixth_half_width * ts.t_rev,
        dt,
    )?;
    let argmax = |w: &WindowSignal| {
        let (i, v) = w
            .abs
            .iter()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
            );
        (w.times[i], v)
    };
    let (rt, rv) = argmax(&rev);
    let (st, sv) = argmax(&six);
    Ok(RevivalComparison {
        revival_window: (rev.lo, rev.hi),
        revival_max: rv,
        revival_max_time: rt,
        superrevival_window: (six.lo, six.hi),
        superrevival_max: sv,
        superrevival_max_time: st,
        degenerate: weights.len() == 1 || (rv - sv).abs() <= 1e-12,
    })
}

/// Peak train and period of `|A|` over the first `orbits` Kepler periods,
/// sampled at `T_cl / 200`, with the `t = 0` maximum included and peaks at
/// least half a Kepler period apart.
pub fn kepler_period(
    model: &EnergyModel,
    weights: &WeightDistribution,
    point: ExpansionPoint,
    orbits: f64,
) -> Result<(PeakTrain, Result<PeriodEstimate>)> {
    let ts = model.time_scales(point)?;
    let dt = ts.t_cl / 200.0;
    let series = autocorrelation_series(model, weights, 0.0, orbits * ts.t_cl, dt)?;
    let train = find_peaks(&series.times, &series.abs(), 0.1, 0.5 * ts.t_cl)?;
    let estimate = estimate_period(&train);
    Ok((train, estimate))
}
