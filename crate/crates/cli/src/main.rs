use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use revival_cli::{run, sweep, RunConfig, RunError, SweepConfig, WindowSpec};

#[derive(Parser)]
#[command(
    name = "simulate",
    version,
    about = "Rydberg wave-packet revival simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration.
    Run {
        /// JSON run description.
        config: PathBuf,
        /// Mean principal quantum number.
        #[arg(long)]
        nbar: Option<f64>,
        /// Gaussian width in n.
        #[arg(long)]
        sigma: Option<f64>,
        /// Quantum defect.
        #[arg(long)]
        delta: Option<f64>,
        /// Orbital angular momentum of the radial states.
        #[arg(long)]
        l: Option<u32>,
        /// Replaces the configured windows; repeatable. A named window
        /// (kepler, revival, superrevival_qN, superrevival_sixth) or t_lo:t_hi:dt.
        #[arg(long = "window")]
        windows: Vec<WindowSpec>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report time scales in SI units as well.
        #[arg(long)]
        si: bool,
    },
    /// Run a parameter sweep.
    Sweep {
        /// JSON sweep description.
        config: PathBuf,
    },
}

const EXIT_CONFIG: u8 = 1;
const EXIT_PARTIAL: u8 = 2;

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            config,
            nbar,
            sigma,
            delta,
            l,
            windows,
            out,
            si,
        } => {
            let result = RunConfig::from_path(&config).and_then(|mut cfg| {
                if let Some(v) = nbar {
                    cfg.nbar = v;
                }
                if let Some(v) = sigma {
                    cfg.sigma = v;
                }
                if let Some(v) = delta {
                    cfg.delta = v;
                }
                if let Some(v) = l {
                    cfg.l = v;
                }
                if !windows.is_empty() {
                    cfg.windows = windows;
                }
                if let Some(v) = out {
                    cfg.outputs = v;
                }
                cfg.emit.si_units |= si;
                run(&cfg)
            });
            match result {
                Ok(outcome) => {
                    for f in &outcome.files {
                        println!("{}", f.display());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&e),
            }
        }
        Command::Sweep { config } => {
            match SweepConfig::from_path(&config).and_then(|c| sweep(&c)) {
                Ok(outcome) => {
                    println!("{}", outcome.summary.display());
                    let failed = outcome.failures();
                    if failed > 0 {
                        eprintln!("{failed} of {} sweep values failed", outcome.rows.len());
                        for row in &outcome.rows {
                            if let Err(msg) = &row.outcome {
                                eprintln!("  {}: {msg}", row.value);
                            }
                        }
                        ExitCode::from(EXIT_PARTIAL)
                    } else {
                        ExitCode::SUCCESS
                    }
                }
                Err(e) => fail(&e),
            }
        }
    }
}

fn fail(e: &RunError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_CONFIG)
}
