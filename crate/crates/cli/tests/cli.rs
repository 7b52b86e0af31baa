use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::Command;

use serde_json::Value;

use revival_cli::{run, sweep, RunConfig, RunError, SweepAxis, SweepConfig, WindowSpec};

fn simulate(args: &[&str], cwd: &Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_simulate"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn sixth_ns(m: &Value) -> f64 {
    m["time_scales_ns"]["t_sr_over_6"].as_f64().unwrap()
}

fn summary_rows(dir: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(dir.join("summary.csv"))
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn col(rows: &[Vec<String>], i: usize) -> Vec<f64> {
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn manifest_records_superrevival_delay_in_ns() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(50.0);
    cfg.windows = vec![WindowSpec::SuperrevivalSixth];
    cfg.emit.si_units = true;
    cfg.outputs = tmp.path().join("n50");
    run(&cfg).unwrap();
    let m = manifest(&cfg.outputs);
    assert!((sixth_ns(&m) - 3.958).abs() < 1e-3);
    assert_eq!(m["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(m["config"]["nbar"], 50.0);

    cfg.nbar = 36.0;
    cfg.outputs = tmp.path().join("n36");
    run(&cfg).unwrap();
    assert!(sixth_ns(&manifest(&cfg.outputs)) < 1.0);
}

#[test]
fn si_block_only_when_requested() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(45.0);
    cfg.outputs = tmp.path().to_path_buf();
    run(&cfg).unwrap();
    let m = manifest(tmp.path());
    assert!(m.get("time_scales_ns").is_none());
    assert!(m["time_scales_au"]["t_sr"].as_f64().unwrap() > 0.0);
}

#[test]
fn empty_windows_emit_only_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(45.0);
    cfg.outputs = tmp.path().join("out");
    cfg.emit.density_snapshots = true;
    let out = run(&cfg).unwrap();
    assert_eq!(out.files, vec![cfg.outputs.join("manifest.json")]);
    let names: Vec<_> = fs::read_dir(&cfg.outputs).unwrap().collect();
    assert_eq!(names.len(), 1);
}

#[test]
fn series_files_follow_window_order() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(45.0);
    cfg.windows = vec![WindowSpec::Kepler, WindowSpec::Superrevival(3)];
    cfg.outputs = tmp.path().to_path_buf();
    run(&cfg).unwrap();
    let kepler = fs::read_to_string(tmp.path().join("series_00_kepler.csv")).unwrap();
    assert!(kepler.starts_with("t_au,re_A,im_A,abs_A\n"));
    // [0, 5 T_cl] at T_cl/200
    assert_eq!(kepler.lines().count(), 1 + 1001);
    assert!(tmp.path().join("series_01_superrevival_q3.csv").exists());
    let reports = fs::read_to_string(tmp.path().join("reports.csv")).unwrap();
    assert!(reports.starts_with("q,t_frac_pred,T_frac_pred,T_meas,rel_err,peak_max\n"));
}

#[test]
fn density_snapshots_have_sidecars() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(45.0);
    cfg.windows = vec![WindowSpec::Revival];
    cfg.emit.density_snapshots = true;
    cfg.outputs = tmp.path().to_path_buf();
    run(&cfg).unwrap();
    for stem in ["density_00_t0", "density_01_revival"] {
        let csv = fs::read_to_string(tmp.path().join(format!("{stem}.csv"))).unwrap();
        assert!(csv.starts_with("r,density\n"));
        let side: Value = serde_json::from_str(
            &fs::read_to_string(tmp.path().join(format!("{stem}.json"))).unwrap(),
        )
        .unwrap();
        assert!((side["total_probability"].as_f64().unwrap() - 1.0).abs() < 1e-4);
    }
}

#[test]
fn rerun_is_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::new(45.0);
    cfg.windows = vec![WindowSpec::Kepler, WindowSpec::SuperrevivalSixth];
    cfg.emit.density_snapshots = true;
    cfg.outputs = tmp.path().join("a");
    let first = run(&cfg).unwrap();
    let bytes: Vec<Vec<u8>> = first.files.iter().map(|f| fs::read(f).unwrap()).collect();
    let second = run(&cfg).unwrap();
    assert_eq!(first.files, second.files);
    for (f, b) in second.files.iter().zip(&bytes) {
        assert_eq!(&fs::read(f).unwrap(), b, "{}", f.display());
    }
}

#[test]
fn delta_sweep_matches_shifted_hydrogen() {
    let tmp = tempfile::tempdir().unwrap();
    let mut base = RunConfig::new(45.0);
    base.outputs = tmp.path().to_path_buf();
    let cfg = SweepConfig {
        base,
        axis: SweepAxis::Delta,
        values: vec![0.0, 0.05, 0.5],
    };
    let out = sweep(&cfg).unwrap();
    assert_eq!(out.failures(), 0);
    for sub in ["delta_0", "delta_0.05", "delta_0.5"] {
        assert!(tmp.path().join(sub).join("manifest.json").exists());
    }
    let rows = summary_rows(tmp.path());
    for (row, delta) in rows.iter().zip([0.0f64, 0.05, 0.5]) {
        let nu = 45.0 - delta;
        let expected = [
            2.0 * PI * nu.powi(3),
            4.0 * PI * nu.powi(4) / 3.0,
            PI * nu.powi(5),
        ];
        for (i, e) in (6..9).zip(expected) {
            let got: f64 = row[i].parse().unwrap();
            assert!(((got - e) / e).abs() < 1e-12, "{row:?}");
        }
    }
}

#[test]
fn sigma_sweep_records_contrast() {
    let tmp = tempfile::tempdir().unwrap();
    let mut base = RunConfig::new(45.0);
    base.outputs = tmp.path().to_path_buf();
    let cfg = SweepConfig {
        base,
        axis: SweepAxis::Sigma,
        values: vec![1.5, 2.5, 3.5],
    };
    sweep(&cfg).unwrap();
    let rows = summary_rows(tmp.path());
    // exact-sum oracle, revival and t_sr/6 windows sampled at T_cl/100
    let revival = [0.8475559998968261, 0.7075241673355822, 0.5942039321045544];
    let sixth = [0.9434838654293046, 0.7745046671039573, 0.6411491971105379];
    for (i, (r, s)) in col(&rows, 11).iter().zip(col(&rows, 12)).enumerate() {
        assert!((r - revival[i]).abs() < 1e-9);
        assert!((s - sixth[i]).abs() < 1e-9);
    }
    for row in &rows {
        let c: f64 = row[13].parse().unwrap();
        assert!(c > 0.0);
    }
}

#[test]
fn nbar_sweep_reports_nanoseconds() {
    let tmp = tempfile::tempdir().unwrap();
    let mut base = RunConfig::new(45.0);
    base.outputs = tmp.path().to_path_buf();
    let cfg = SweepConfig {
        base,
        axis: SweepAxis::Nbar,
        values: vec![36.0, 45.0, 50.0],
    };
    sweep(&cfg).unwrap();
    let ns = col(&summary_rows(tmp.path()), 10);
    for (got, want) in ns.iter().zip([0.766, 2.337, 3.958]) {
        assert!((got - want).abs() < 1e-3, "{got} vs {want}");
    }
}

#[test]
fn empty_sweep_is_config_error() {
    let cfg = SweepConfig {
        base: RunConfig::new(45.0),
        axis: SweepAxis::Sigma,
        values: vec![],
    };
    assert!(matches!(sweep(&cfg), Err(RunError::InvalidConfig(_))));
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    fs::write(dir.join("ok.json"), r#"{"nbar": 45, "outputs": "ok"}"#).unwrap();
    fs::write(dir.join("bad.json"), r#"{"nbar": 45, "sigma": 0, "l": 40}"#).unwrap();
    fs::write(
        dir.join("sweep.json"),
        r#"{"base": {"nbar": 45, "outputs": "sw"}, "axis": "delta", "values": [0, 1.5]}"#,
    )
    .unwrap();

    assert_eq!(simulate(&["run", "ok.json"], dir).status.code(), Some(0));

    let bad = simulate(&["run", "bad.json"], dir);
    assert_eq!(bad.status.code(), Some(1));
    let err = String::from_utf8_lossy(&bad.stderr);
    assert!(err.contains("sigma") && err.contains("l"), "{err}");

    assert_eq!(
        simulate(&["run", "missing.json"], dir).status.code(),
        Some(1)
    );

    assert_eq!(
        simulate(&["sweep", "sweep.json"], dir).status.code(),
        Some(2)
    );
    let rows = summary_rows(&dir.join("sw"));
    assert_eq!(rows[0][2], "ok");
    assert_eq!(rows[1][2], "failed");
}

#[test]
fn flags_override_config() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    fs::write(
        dir.join("c.json"),
        r#"{"nbar": 45, "windows": ["revival"]}"#,
    )
    .unwrap();
    let out = simulate(
        &[
            "run",
            "c.json",
            "--nbar",
            "40",
            "--sigma",
            "2",
            "--delta",
            "0.1",
            "--l",
            "2",
            "--window",
            "kepler",
            "--window",
            "0:1000:10",
            "--out",
            "o",
            "--si",
        ],
        dir,
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let m = manifest(&dir.join("o"));
    let c = &m["config"];
    assert_eq!(
        (c["nbar"].as_f64(), c["sigma"].as_f64(), c["delta"].as_f64()),
        (Some(40.0), Some(2.0), Some(0.1))
    );
    assert_eq!(c["l"], 2);
    assert_eq!(m["windows"].as_array().unwrap().len(), 2);
    assert!(m.get("time_scales_ns").is_some());
    assert!(dir.join("o/series_00_kepler.csv").exists());
    assert!(dir.join("o/series_01_explicit.csv").exists());
}
