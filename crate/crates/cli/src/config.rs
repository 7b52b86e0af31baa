//! Declarative run and sweep descriptions.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use revival_core::packet::{DEFAULT_CUTOFF, DEFAULT_SIGMA, KEPLER_SAMPLES_MIN};
use revival_core::radial::{DEFAULT_L, MAX_N};
use revival_core::{EnergyModel, ExpansionPoint, TimeScales, WeightDistribution};

use crate::error::{FieldError, RunError};

/// Time window, either explicit or one of the named regimes.
#[derive(Debug, Clone, PartialEq)]
pub enum WindowSpec {
    Explicit {
        t_lo: f64,
        t_hi: f64,
        dt: f64,
    },
    Kepler,
    Revival,
    /// Around `t_sr / q`, `q` a positive multiple of 3.
    Superrevival(u32),
    SuperrevivalSixth,
}

/// A window resolved against the run's time scales.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedWindow {
    pub label: String,
    pub t_lo: f64,
    pub t_hi: f64,
    pub dt: f64,
}

impl ResolvedWindow {
    pub fn center(&self) -> f64 {
        0.5 * (self.t_lo + self.t_hi)
    }
}

impl WindowSpec {
    pub fn label(&self) -> String {
        match self {
            Self::Explicit { .. } => "explicit".into(),
            Self::Kepler => "kepler".into(),
            Self::Revival => "revival".into(),
            Self::Superrevival(q) => format!("superrevival_q{q}"),
            Self::SuperrevivalSixth => "superrevival_sixth".into(),
        }
    }

    /// Named windows:
    /// `kepler` = `[0, 5 T_cl]` at `T_cl/200`;
    /// `revival` = `t_rev ± n̄ T_cl / 10` at `T_cl/100`;
    /// `superrevival_qN` = `t_sr/N ± 1.5 (3/N) t_rev` at `T_cl/100`;
    /// `superrevival_sixth` = `t_sr/6 ± t_rev/4` at `T_cl/100`.
    pub fn resolve(&self, scales: &TimeScales, nbar_effective: f64) -> ResolvedWindow {
        let fine = scales.t_cl / 100.0;
        let around = |c: f64, h: f64| (c - h, c + h);
        let ((t_lo, t_hi), dt) = match *self {
            Self::Explicit { t_lo, t_hi, dt } => ((t_lo, t_hi), dt),
            Self::Kepler => ((0.0, 5.0 * scales.t_cl), scales.t_cl / 200.0),
            Self::Revival => (
                around(scales.t_rev, nbar_effective * scales.t_cl / 10.0),
                fine,
            ),
            Self::Superrevival(q) => (
                around(scales.fractional_time(q), 1.5 * scales.fractional_period(q)),
                fine,
            ),
            Self::SuperrevivalSixth => {
                (around(scales.fractional_time(6), 0.25 * scales.t_rev), fine)
            }
        };
        ResolvedWindow {
            label: self.label(),
            t_lo,
            t_hi,
            dt,
        }
    }
}

impl fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Explicit { t_lo, t_hi, dt } => write!(f, "{t_lo}:{t_hi}:{dt}"),
            other => f.write_str(&other.label()),
        }
    }
}

impl FromStr for WindowSpec {
    type Err = String;

    /// A named window or `t_lo:t_hi:dt`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "kepler" => return Ok(Self::Kepler),
            "revival" => return Ok(Self::Revival),
            "superrevival_sixth" => return Ok(Self::SuperrevivalSixth),
            _ => {}
        }
        if let Some(q) = s.strip_prefix("superrevival_q") {
            let q: u32 = q.parse().map_err(|_| format!("bad q in window {s:?}"))?;
            if q == 0 || q % 3 != 0 {
                return Err(format!("window {s:?}: q must be a positive multiple of 3"));
            }
            return Ok(Self::Superrevival(q));
        }
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() == 3 {
            let num = |p: &str| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("bad number {p:?} in window {s:?}"))
            };
            return Ok(Self::Explicit {
                t_lo: num(parts[0])?,
                t_hi: num(parts[1])?,
                dt: num(parts[2])?,
            });
        }
        Err(format!("unknown window {s:?}"))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WindowRepr {
    Named(String),
    Explicit { t_lo: f64, t_hi: f64, dt: f64 },
}

impl Serialize for WindowSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            Self::Explicit { t_lo, t_hi, dt } => {
                WindowRepr::Explicit { t_lo, t_hi, dt }.serialize(s)
            }
            ref other => WindowRepr::Named(other.label()).serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for WindowSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match WindowRepr::deserialize(d)? {
            WindowRepr::Named(name) => name.parse().map_err(serde::de::Error::custom),
            WindowRepr::Explicit { t_lo, t_hi, dt } => Ok(Self::Explicit { t_lo, t_hi, dt }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmitFlags {
    pub series: bool,
    pub reports: bool,
    pub density_snapshots: bool,
    /// Add SI (seconds / nanoseconds) values next to atomic units.
    pub si_units: bool,
}

impl Default for EmitFlags {
    fn default() -> Self {
        Self {
            series: true,
            reports: true,
            density_snapshots: false,
            si_units: false,
        }
    }
}

fn default_sigma() -> f64 {
    DEFAULT_SIGMA
}
fn default_cutoff() -> f64 {
    DEFAULT_CUTOFF
}
fn default_l() -> u32 {
    DEFAULT_L
}
fn default_outputs() -> PathBuf {
    PathBuf::from("out")
}

/// One simulation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Centre of the excitation: integer `n̄`, or noninteger `N*` for a
    /// detuned laser.
    pub nbar: f64,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default)]
    pub delta: f64,
    #[serde(default = "default_l")]
    pub l: u32,
    #[serde(default = "default_cutoff")]
    pub cutoff: f64,
    #[serde(default)]
    pub windows: Vec<WindowSpec>,
    #[serde(default = "default_outputs")]
    pub outputs: PathBuf,
    #[serde(default)]
    pub emit: EmitFlags,
}

/// Physics objects built from a validated [`RunConfig`].
#[derive(Debug, Clone)]
pub struct Prepared {
    pub model: EnergyModel,
    pub weights: WeightDistribution,
    pub point: ExpansionPoint,
    pub scales: TimeScales,
    pub windows: Vec<ResolvedWindow>,
}

impl RunConfig {
    pub fn new(nbar: f64) -> Self {
        Self {
            nbar,
            sigma: DEFAULT_SIGMA,
            delta: 0.0,
            l: DEFAULT_L,
            cutoff: DEFAULT_CUTOFF,
            windows: Vec::new(),
            outputs: default_outputs(),
            emit: EmitFlags::default(),
        }
    }

    pub fn from_path(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| RunError::Parse {
            path: path.to_owned(),
            source,
        })
    }

    /// Validates every field, collecting all problems, and builds the
    /// model, weights, expansion point and resolved windows.
    pub fn prepare(&self) -> Result<Prepared, RunError> {
        let mut errors = Vec::new();
        let mut fail = |field: &str, message: String| {
            errors.push(FieldError {
                field: field.into(),
                message,
            })
        };

        let model = match EnergyModel::with_delta(self.delta) {
            Ok(m) => Some(m),
            Err(e) => {
                fail("delta", e.to_string());
                None
            }
        };
        if !self.nbar.is_finite() {
            fail("nbar", format!("{} is not finite", self.nbar));
        } else if self.nbar > f64::from(MAX_N) {
            fail("nbar", format!("{} exceeds {MAX_N}", self.nbar));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            fail("sigma", format!("{} must be positive", self.sigma));
        }
        if !(self.cutoff >= 3.0 && self.cutoff.is_finite()) {
            fail("cutoff", format!("{} must be at least 3", self.cutoff));
        }

        let point = ExpansionPoint::new(self.nbar).ok();
        let scales = match (model, point) {
            (Some(m), Some(p)) if self.nbar.is_finite() => match m.time_scales(p) {
                Ok(ts) => Some(ts),
                Err(e) => {
                    fail("nbar", e.to_string());
                    None
                }
            },
            _ => None,
        };

        let weights = if self.sigma > 0.0 && self.cutoff >= 3.0 && scales.is_some() {
            match WeightDistribution::gaussian(self.nbar, self.sigma, self.cutoff) {
                Ok(w) => Some(w),
                Err(e) => {
                    fail("sigma", e.to_string());
                    None
                }
            }
        } else {
            None
        };
        if let Some(w) = &weights {
            if w.n_max() > MAX_N {
                fail(
                    "sigma",
                    format!("support reaches n = {} above {MAX_N}", w.n_max()),
                );
            }
            if self.l >= w.n_min() {
                fail(
                    "l",
                    format!(
                        "l = {} needs every level n > l, lowest is {}",
                        self.l,
                        w.n_min()
                    ),
                );
            }
        }

        let mut windows = Vec::new();
        if let Some(ts) = scales {
            let nbar_eff = self.nbar - self.delta;
            let limit = ts.t_cl / KEPLER_SAMPLES_MIN;
            for (i, spec) in self.windows.iter().enumerate() {
                let w = spec.resolve(&ts, nbar_eff);
                let field = format!("windows[{i}]");
                if !(w.t_lo.is_finite() && w.t_hi.is_finite()) || w.t_hi < w.t_lo {
                    fail(
                        &field,
                        format!("[{}, {}] is not an interval", w.t_lo, w.t_hi),
                    );
                } else if !(w.dt > 0.0) {
                    fail(&field, format!("dt = {} must be positive", w.dt));
                } else if !(w.dt < limit) {
                    fail(
                        &field,
                        format!("dt = {} must be below T_cl/20 = {limit}", w.dt),
                    );
                }
                windows.push(w);
            }
        }

        match (model, point, scales, weights) {
            (Some(model), Some(point), Some(scales), Some(weights)) if errors.is_empty() => {
                Ok(Prepared {
                    model,
                    weights,
                    point,
                    scales,
                    windows,
                })
            }
            _ => Err(RunError::InvalidConfig(errors)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Nbar,
    Sigma,
    Delta,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Nbar => "nbar",
            Self::Sigma => "sigma",
            Self::Delta => "delta",
        }
    }
}

/// A family of runs differing in one parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub base: RunConfig,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

impl SweepConfig {
    pub fn from_path(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| RunError::Parse {
            path: path.to_owned(),
            source,
        })
    }

    /// The run for one axis value, writing into its own subdirectory.
    pub fn run_for(&self, value: f64) -> RunConfig {
        let mut cfg = self.base.clone();
        match self.axis {
            SweepAxis::Nbar => cfg.nbar = value,
            SweepAxis::Sigma => cfg.sigma = value,
            SweepAxis::Delta => cfg.delta = value,
        }
        cfg.outputs = self.base.outputs.join(self.subdir(value));
        cfg
    }

    pub fn subdir(&self, value: f64) -> String {
        format!("{}_{value}", self.axis.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_parsing() {
        assert_eq!("kepler".parse::<WindowSpec>().unwrap(), WindowSpec::Kepler);
        assert_eq!(
            "superrevival_q6".parse::<WindowSpec>().unwrap(),
            WindowSpec::Superrevival(6)
        );
        assert!("superrevival_q4".parse::<WindowSpec>().is_err());
        assert!("superrevival_q0".parse::<WindowSpec>().is_err());
        assert_eq!(
            "0:10:0.5".parse::<WindowSpec>().unwrap(),
            WindowSpec::Explicit {
                t_lo: 0.0,
                t_hi: 10.0,
                dt: 0.5
            }
        );
        assert!("nonsense".parse::<WindowSpec>().is_err());
    }

    #[test]
    fn config_json_round_trip() {
        let text = r#"{
            "nbar": 45, "sigma": 2.5, "delta": 0.0, "l": 1,
            "windows": ["kepler", "superrevival_q3", {"t_lo": 0, "t_hi": 100, "dt": 1}],
            "outputs": "out/run1",
            "emit": {"series": true, "reports": false, "density_snapshots": true, "si_units": true}
        }"#;
        let cfg: RunConfig = serde_json::from_str(text).unwrap();
        assert_eq!(cfg.windows.len(), 3);
        assert_eq!(cfg.windows[1], WindowSpec::Superrevival(3));
        let again: RunConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn defaults_fill_in() {
        let cfg: RunConfig = serde_json::from_str(r#"{"nbar": 45}"#).unwrap();
        assert_eq!(cfg, RunConfig::new(45.0));
        assert!(serde_json::from_str::<RunConfig>(r#"{"nbar": 45, "bogus": 1}"#).is_err());
    }

    #[test]
    fn itemized_errors() {
        let mut cfg = RunConfig::new(1.0);
        cfg.sigma = -1.0;
        cfg.delta = 1.5;
        match cfg.prepare() {
            Err(RunError::InvalidConfig(errs)) => {
                let fields: Vec<&str> = errs.iter().map(|e| e.field.as_str()).collect();
                assert!(fields.contains(&"delta"), "{fields:?}");
                assert!(fields.contains(&"sigma"), "{fields:?}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn l_must_fit_under_support() {
        let mut cfg = RunConfig::new(10.0);
        cfg.l = 6;
        match cfg.prepare() {
            Err(RunError::InvalidConfig(errs)) => assert_eq!(errs[0].field, "l"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn coarse_explicit_window_rejected() {
        let mut cfg = RunConfig::new(45.0);
        cfg.windows = vec![WindowSpec::Explicit {
            t_lo: 0.0,
            t_hi: 1e7,
            dt: 1e5,
        }];
        match cfg.prepare() {
            Err(RunError::InvalidConfig(errs)) => assert_eq!(errs[0].field, "windows[0]"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn named_windows_resolve() {
        let p = RunConfig::new(45.0);
        let mut cfg = p.clone();
        cfg.windows = vec![
            WindowSpec::Kepler,
            WindowSpec::Revival,
            WindowSpec::Superrevival(3),
            WindowSpec::SuperrevivalSixth,
        ];
        let prep = cfg.prepare().unwrap();
        let ts = prep.scales;
        let w = &prep.windows;
        assert_eq!(
            (w[0].t_lo, w[0].t_hi, w[0].dt),
            (0.0, 5.0 * ts.t_cl, ts.t_cl / 200.0)
        );
        assert!((w[1].center() - ts.t_rev).abs() < 1e-6 * ts.t_rev);
        assert!((w[1].t_hi - w[1].t_lo - 9.0 * ts.t_cl).abs() < 1e-6 * ts.t_cl);
        assert!((w[2].t_hi - w[2].t_lo - 3.0 * ts.t_rev).abs() < 1e-6 * ts.t_rev);
        assert!((w[3].center() - ts.t_sr / 6.0).abs() < 1e-6 * ts.t_sr);
    }

    #[test]
    fn sweep_overrides_axis() {
        let sweep = SweepConfig {
            base: RunConfig::new(45.0),
            axis: SweepAxis::Delta,
            values: vec![0.05],
        };
        let run = sweep.run_for(0.05);
        assert_eq!(run.delta, 0.05);
        assert_eq!(run.outputs, PathBuf::from("out/delta_0.05"));
    }
}
