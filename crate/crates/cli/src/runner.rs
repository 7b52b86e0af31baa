//! Executes runs and sweeps and writes their files.
//!
//! Layout of a run directory:
//!
//! ```text
//! manifest.json                  every input, resolved time scales, file list
//! series_NN_<label>.csv|.json    |A(t)| per window
//! reports.json, reports.csv      revival scans (when any window is requested)
//! density_NN_<label>.csv|.json   radial density snapshots
//! ```

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use revival_core::analysis::{
    compare_revival_vs_superrevival, kepler_period, predicted_fractional_times, superrevival_scan,
    FractionalPrediction, RevivalComparison, RevivalReport,
};
use revival_core::io::{
    fmt_f64, write_density_csv, write_json, write_reports_csv, write_series_csv, write_series_json,
};
use revival_core::packet::autocorrelation_series;
use revival_core::radial::RadialBasis;
use revival_core::{
    to_nanoseconds, to_si_seconds, EnergyModel, Level, TimeScales, ATOMIC_UNIT_OF_TIME_S,
};

use crate::config::{Prepared, ResolvedWindow, RunConfig, SweepConfig};
use crate::error::RunError;

pub const MANIFEST: &str = "manifest.json";
pub const SUMMARY: &str = "summary.csv";
pub const SUMMARY_HEADER: &str = "axis,value,status,nbar,sigma,delta,t_cl_au,t_rev_au,t_sr_au,t_sr6_au,t_sr6_ns,revival_max,superrevival_max,contrast,error";

const ARTIFACT: &str = env!("CARGO_PKG_NAME");
const VERSION: &str = env!("CARGO_PKG_VERSION");
const PREDICTION_Q_MAX: u32 = 9;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScalesOut {
    pub t_cl: f64,
    pub t_rev: f64,
    pub t_sr: f64,
    pub t_sr_over_6: f64,
}

impl ScalesOut {
    fn map(ts: &TimeScales, f: impl Fn(f64) -> f64) -> Self {
        Self {
            t_cl: f(ts.t_cl),
            t_rev: f(ts.t_rev),
            t_sr: f(ts.t_sr),
            t_sr_over_6: f(ts.t_sr / 6.0),
        }
    }
}

#[derive(Serialize)]
struct WeightsOut<'a> {
    center: f64,
    sigma: f64,
    cutoff: f64,
    levels: &'a [Level],
}

#[derive(Serialize)]
struct WindowOut<'a> {
    #[serde(flatten)]
    window: &'a ResolvedWindow,
    samples: usize,
    file: Option<String>,
}

#[derive(Serialize)]
struct SnapshotOut {
    label: String,
    t: f64,
    file: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    artifact: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    model: EnergyModel,
    expansion_point: f64,
    weights: WeightsOut<'a>,
    atomic_unit_of_time_s: f64,
    time_scales_au: ScalesOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    time_scales_s: Option<ScalesOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    time_scales_ns: Option<ScalesOut>,
    predicted_fractional: Vec<FractionalPrediction>,
    windows: Vec<WindowOut<'a>>,
    density_snapshots: Vec<SnapshotOut>,
    files: Vec<String>,
}

#[derive(Serialize)]
struct KeplerOut {
    peak_times: Vec<f64>,
    period: Option<f64>,
    dispersion: Option<f64>,
}

#[derive(Serialize)]
struct ReportsOut<'a> {
    scan: &'a [RevivalReport],
    comparison: &'a RevivalComparison,
    kepler: KeplerOut,
}

#[derive(Serialize)]
struct DensitySidecar<'a> {
    label: &'a str,
    t: f64,
    l: u32,
    model: EnergyModel,
    weights: WeightsOut<'a>,
    grid: GridOut,
    total_probability: f64,
    mean_r: f64,
}

#[derive(Serialize)]
struct GridOut {
    mapping: &'static str,
    r_min: f64,
    r_max: f64,
    points: usize,
}

/// What a completed run produced.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub prepared: Prepared,
    pub comparison: Option<RevivalComparison>,
    pub reports: Vec<RevivalReport>,
    pub files: Vec<PathBuf>,
}

fn create(path: &Path) -> Result<BufWriter<File>, RunError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| RunError::io(path, e))
}

fn write_file(
    dir: &Path,
    name: &str,
    files: &mut Vec<String>,
    body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<(), RunError> {
    let path = dir.join(name);
    let mut out = create(&path)?;
    body(&mut out)
        .and_then(|_| out.flush())
        .map_err(|e| RunError::io(&path, e))?;
    files.push(name.to_owned());
    Ok(())
}

/// Validates `config`, simulates every requested window and writes the
/// run directory.
pub fn run(config: &RunConfig) -> Result<RunOutcome, RunError> {
    let prep = config.prepare()?;
    let dir = &config.outputs;
    fs::create_dir_all(dir).map_err(|e| RunError::io(dir, e))?;

    let Prepared {
        model,
        weights,
        point,
        scales,
        windows,
    } = &prep;
    let weights_out = || WeightsOut {
        center: weights.center(),
        sigma: weights.sigma(),
        cutoff: config.cutoff,
        levels: weights.levels(),
    };

    let mut files = Vec::new();
    let mut window_out = Vec::with_capacity(windows.len());
    for (i, w) in windows.iter().enumerate() {
        let series = autocorrelation_series(model, weights, w.t_lo, w.t_hi, w.dt)?;
        let file = if config.emit.series {
            let stem = format!("series_{i:02}_{}", w.label);
            write_file(dir, &format!("{stem}.csv"), &mut files, |o| {
                write_series_csv(o, &series)
            })?;
            write_file(dir, &format!("{stem}.json"), &mut files, |o| {
                write_series_json(o, &series)
            })?;
            Some(format!("{stem}.csv"))
        } else {
            None
        };
        window_out.push(WindowOut {
            window: w,
            samples: series.len(),
            file,
        });
    }

    let mut comparison = None;
    let mut reports = Vec::new();
    if config.emit.reports && !windows.is_empty() {
        let scan = superrevival_scan(model, weights, *point)?;
        let cmp = compare_revival_vs_superrevival(model, weights, *point)?;
        let (train, estimate) = kepler_period(model, weights, *point, 5.0)?;
        let kepler = KeplerOut {
            peak_times: train.times,
            period: estimate.as_ref().ok().map(|e| e.period),
            dispersion: estimate.as_ref().ok().map(|e| e.dispersion),
        };
        write_file(dir, "reports.json", &mut files, |o| {
            write_json(
                o,
                &ReportsOut {
                    scan: &scan,
                    comparison: &cmp,
                    kepler,
                },
            )
        })?;
        write_file(dir, "reports.csv", &mut files, |o| {
            write_reports_csv(o, &scan)
        })?;
        comparison = Some(cmp);
        reports = scan;
    }

    let mut snapshots = Vec::new();
    if config.emit.density_snapshots && !windows.is_empty() {
        let basis = RadialBasis::with_default_grid(weights, config.l)?;
        let grid = basis.grid();
        let mut times = vec![("t0".to_owned(), 0.0)];
        times.extend(windows.iter().map(|w| (w.label.clone(), w.center())));
        for (i, (label, t)) in times.into_iter().enumerate() {
            let rho = basis.density(model, t);
            let stem = format!("density_{i:02}_{label}");
            write_file(dir, &format!("{stem}.csv"), &mut files, |o| {
                write_density_csv(o, grid, &rho)
            })?;
            let sidecar = DensitySidecar {
                label: &label,
                t,
                l: config.l,
                model: *model,
                weights: weights_out(),
                grid: GridOut {
                    mapping: "sqrt",
                    r_min: grid.r()[0],
                    r_max: grid.r()[grid.len() - 1],
                    points: grid.len(),
                },
                total_probability: grid.integrate(&rho),
                mean_r: basis.expectation_r(model, t),
            };
            write_file(dir, &format!("{stem}.json"), &mut files, |o| {
                write_json(o, &sidecar)
            })?;
            snapshots.push(SnapshotOut {
                label,
                t,
                file: format!("{stem}.csv"),
            });
        }
    }

    let si = config.emit.si_units;
    let manifest = Manifest {
        artifact: ARTIFACT,
        version: VERSION,
        config,
        model: *model,
        expansion_point: point.nu(),
        weights: weights_out(),
        atomic_unit_of_time_s: ATOMIC_UNIT_OF_TIME_S,
        time_scales_au: ScalesOut::map(scales, |t| t),
        time_scales_s: si.then(|| ScalesOut::map(scales, to_si_seconds)),
        time_scales_ns: si.then(|| ScalesOut::map(scales, to_nanoseconds)),
        predicted_fractional: predicted_fractional_times(scales, PREDICTION_Q_MAX),
        windows: window_out,
        density_snapshots: snapshots,
        files: files.clone(),
    };
    let mut all = files;
    write_file(dir, MANIFEST, &mut all, |o| write_json(o, &manifest))?;

    Ok(RunOutcome {
        comparison,
        reports,
        files: all.into_iter().map(|f| dir.join(f)).collect(),
        prepared: prep,
    })
}

/// One line of the sweep summary.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub outcome: Result<(TimeScales, RevivalComparison), String>,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub summary: PathBuf,
}

impl SweepOutcome {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.outcome.is_err()).count()
    }
}

#[derive(Serialize)]
struct SweepManifest<'a> {
    artifact: &'static str,
    version: &'static str,
    sweep: &'a SweepConfig,
    runs: Vec<String>,
}

/// Runs every axis value in its own subdirectory, then writes `summary.csv`.
/// Per-value failures are recorded in the summary rather than aborting.
pub fn sweep(config: &SweepConfig) -> Result<SweepOutcome, RunError> {
    if config.values.is_empty() {
        return Err(RunError::InvalidConfig(vec![crate::error::FieldError {
            field: "values".into(),
            message: "at least one value is required".into(),
        }]));
    }
    let dir = &config.base.outputs;
    fs::create_dir_all(dir).map_err(|e| RunError::io(dir, e))?;

    let rows: Vec<SweepRow> = config
        .values
        .par_iter()
        .map(|&value| {
            let cfg = config.run_for(value);
            let outcome = run(&cfg)
                .and_then(|out| {
                    let p = &out.prepared;
                    let cmp = match out.comparison {
                        Some(c) => c,
                        None => compare_revival_vs_superrevival(&p.model, &p.weights, p.point)?,
                    };
                    Ok((p.scales, cmp))
                })
                .map_err(|e| e.to_string());
            SweepRow { value, outcome }
        })
        .collect();

    let mut files = Vec::new();
    write_file(dir, SUMMARY, &mut files, |o| {
        write_summary(o, config, &rows)
    })?;
    let manifest = SweepManifest {
        artifact: ARTIFACT,
        version: VERSION,
        sweep: config,
        runs: config.values.iter().map(|&v| config.subdir(v)).collect(),
    };
    write_file(dir, "sweep_manifest.json", &mut files, |o| {
        write_json(o, &manifest)
    })?;

    Ok(SweepOutcome {
        rows,
        summary: dir.join(SUMMARY),
    })
}

fn write_summary<W: Write>(
    mut out: W,
    config: &SweepConfig,
    rows: &[SweepRow],
) -> std::io::Result<()> {
    writeln!(out, "{SUMMARY_HEADER}")?;
    let axis = config.axis.name();
    for row in rows {
        let cfg = config.run_for(row.value);
        let params = format!(
            "{},{},{}",
            fmt_f64(cfg.nbar),
            fmt_f64(cfg.sigma),
            fmt_f64(cfg.delta)
        );
        match &row.outcome {
            Ok((ts, cmp)) => writeln!(
                out,
                "{axis},{},ok,{params},{},{},{},{},{},{},{},{},",
                fmt_f64(row.value),
                fmt_f64(ts.t_cl),
                fmt_f64(ts.t_rev),
                fmt_f64(ts.t_sr),
                fmt_f64(ts.t_sr / 6.0),
                fmt_f64(to_nanoseconds(ts.t_sr / 6.0)),
                fmt_f64(cmp.revival_max),
                fmt_f64(cmp.superrevival_max),
                fmt_f64(cmp.superrevival_max - cmp.revival_max),
            )?,
            Err(msg) => {
                let msg: String = msg
                    .split_whitespace()
                    .collect::<Vec<_>>()
                    .join(" ")
                    .replace(',', ";");
                writeln!(
                    out,
                    "{axis},{},failed,{params},,,,,,,,,{msg}",
                    fmt_f64(row.value)
                )?
            }
        }
    }
    Ok(())
}
