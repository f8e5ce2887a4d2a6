// Copyright 2026 Pulseforge Contributors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pulseforge::commands::{self, Check};
use pulseforge::{Error, Result};

/// Train, verify and characterize single-qubit control pulses.
#[derive(Debug, Parser)]
#[command(name = "pulseforge", version)]
struct Cli {
    /// Overrides the seed of the experiment (or of the verification draw).
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train one pulse from an experiment spec (TOML or JSON).
    Train { spec: PathBuf },
    /// Train the ten-gate suite on a device and write table1.json.
    Suite { device: PathBuf, out: PathBuf },
    /// Re-simulate a run.json and compare against the ideal gate.
    Verify {
        run: PathBuf,
        /// Directory for verify.csv (default: next to the run file).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Simulate in the lab frame instead of the recorded frame.
        #[arg(long)]
        lab: bool,
    },
    /// Sweep the drive carrier over [fmin, fmax] Hz and locate the resonance.
    Sweep {
        device: PathBuf,
        fmin: f64,
        fmax: f64,
        n: usize,
        /// Directory for sweep.csv.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var("PULSEFORGE_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Spec(format!("PULSEFORGE_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::Spec(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Train { spec } => {
            let report = commands::train(&spec, cli.seed)?;
            println!(
                "{}: infidelity {:.3e} (threshold {:.1e})",
                report.record.gate, report.record.infidelity, report.threshold
            );
            println!(
                "wrote {} and {}",
                report.run_path.display(),
                report.trace_path.display()
            );
        }
        Command::Suite { device, out } => {
            let report = commands::suite(&device, &out, cli.seed)?;
            print!("{}", report.table);
            println!(
                "wrote {} and {}",
                report.json_path.display(),
                report.text_path.display()
            );
            if !report.failures.is_empty() {
                for (gate, reason) in &report.failures {
                    eprintln!("{gate}: {reason}");
                }
                return Err(Error::Numerical(format!(
                    "{} of 10 gates failed",
                    report.failures.len()
                )));
            }
        }
        Command::Verify { run, out, lab } => {
            let report = commands::verify(&run, out.as_deref(), lab, cli.seed)?;
            match report.check {
                Check::SxsIdentity { max_deviation } => {
                    println!(
                        "{}: S-SX-S max probability deviation from H {max_deviation:.3e}",
                        report.gate
                    )
                }
                Check::Process {
                    mean_fidelity,
                    max_deviation,
                } => println!(
                    "{}: mean fresh-state fidelity {mean_fidelity:.6}, max probability deviation {max_deviation:.3e}",
                    report.gate
                ),
            }
            println!("wrote {}", report.csv_path.display());
        }
        Command::Sweep {
            device,
            fmin,
            fmax,
            n,
            out,
        } => {
            let report = commands::sweep(&device, fmin, fmax, n, &out)?;
            println!("estimated resonance: {:.6} GHz", report.resonance_hz / 1e9);
            println!("wrote {}", report.csv_path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
