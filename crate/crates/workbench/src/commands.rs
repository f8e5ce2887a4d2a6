// Copyright 2026 Pulseforge Contributors
// SPDX-License-Identifier: Apache-2.0

//! The workbench commands. Each returns a report on success; a missed
//! quality target is reported through [`Error::Numerical`] only after all
//! artifacts have been written.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use num_complex::Complex64 as C64;
use pulseforge_core::device::{frequency_sweep, resonance_estimate, Frame};
use pulseforge_core::pulse::PulseSchedule;
use pulseforge_core::trainer::{
    compare_probabilities, process_check, train_suite, verify_s_sx_s, GateKind, ProbabilityReport, RunRecord,
    TrainerConfig,
};

use crate::artifacts::{self, SweepPoint};
use crate::config::{load_device, ExperimentSpec, DEFAULT_THRESHOLD};
use crate::{render_table, Error, Result};

/// Largest S·SX·S probability deviation accepted by `verify`.
pub const SXS_TOLERANCE: f64 = 0.02;
/// Smallest mean fresh-state fidelity accepted by `verify`.
pub const PROCESS_FIDELITY_FLOOR: f64 = 0.99;
/// Random inputs (after |0⟩) in the verification table.
pub const VERIFY_INPUTS: usize = 10;
/// Fresh states averaged by the process check.
pub const PROCESS_STATES: usize = 100;

/// Amplitude and length of the constant probe used by `sweep`.
pub const SWEEP_PROBE_AMPLITUDE: f64 = 0.05;
pub const SWEEP_PROBE_SAMPLES: usize = 100;

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn now() -> Option<u64> {
    SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
}

#[derive(Clone, Debug)]
pub struct TrainReport {
    pub record: RunRecord,
    pub run_path: PathBuf,
    pub trace_path: PathBuf,
    pub threshold: f64,
}

/// Trains the spec's target and writes `run.json` and `trace.csv` into
/// the spec's output directory.
pub fn train(spec_path: &Path, seed: Option<u64>) -> Result<TrainReport> {
    let spec = ExperimentSpec::load(spec_path)?;
    let base = spec_path.parent().unwrap_or(Path::new("."));
    let mut exp = spec.resolve(base)?;
    if let Some(seed) = seed {
        exp.trainer.seed = seed;
    }
    let run = pulseforge_core::trainer::train(&exp.target, &exp.trainer, &exp.device)?;
    ensure_dir(&exp.outputs)?;
    let mut record = run.record();
    record.timestamp = now();
    let run_path = exp.outputs.join(artifacts::RUN_FILE);
    let trace_path = exp.outputs.join(artifacts::TRACE_FILE);
    artifacts::write_run(&run_path, &record)?;
    artifacts::write_trace(&trace_path, &run.trace)?;
    let report = TrainReport {
        record,
        run_path,
        trace_path,
        threshold: exp.threshold,
    };
    if report.record.infidelity > exp.threshold {
        return Err(Error::Numerical(format!(
            "{}: final infidelity {:.3e} above threshold {:.1e} (artifacts in {})",
            report.record.gate,
            report.record.infidelity,
            exp.threshold,
            exp.outputs.display()
        )));
    }
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub records: Vec<RunRecord>,
    /// Gates that errored or missed the threshold, with the reason.
    pub failures: Vec<(String, String)>,
    pub table: String,
    pub json_path: PathBuf,
    pub text_path: PathBuf,
}

/// Trains the ten-gate suite and writes `table1.json` and `table1.txt`.
///
/// Per-gate failures do not stop the suite; they are returned in the
/// report and the caller decides the exit status.
pub fn suite(device_path: &Path, out_dir: &Path, seed: Option<u64>) -> Result<SuiteReport> {
    let dev = load_device(device_path)?;
    let mut cfg = TrainerConfig::default();
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    let stamp = now();
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for entry in train_suite(&dev, &cfg) {
        match entry.result {
            Ok(run) => {
                let mut record = run.record();
                record.timestamp = stamp;
                if record.infidelity > DEFAULT_THRESHOLD {
                    failures.push((
                        record.gate.clone(),
                        format!("infidelity {:.3e} above {DEFAULT_THRESHOLD:.1e}", record.infidelity),
                    ));
                }
                records.push(record);
            }
            Err(e) => failures.push((entry.gate.label.clone(), e.to_string())),
        }
    }
    ensure_dir(out_dir)?;
    let json_path = out_dir.join(artifacts::TABLE_JSON_FILE);
    let text_path = out_dir.join(artifacts::TABLE_TEXT_FILE);
    artifacts::write_table(&json_path, &records)?;
    let table = render_table(&records);
    fs::write(&text_path, &table).map_err(|e| Error::io(&text_path, e))?;
    Ok(SuiteReport {
        records,
        failures,
        table,
        json_path,
        text_path,
    })
}

#[derive(Clone, Debug)]
pub enum Check {
    /// S·SX·S against H; the value is the largest probability deviation.
    SxsIdentity { max_deviation: f64 },
    /// Mean fidelity to the target over fresh random states.
    Process { mean_fidelity: f64, max_deviation: f64 },
}

impl Check {
    pub fn passed(&self) -> bool {
        match *self {
            Check::SxsIdentity { max_deviation } => max_deviation <= SXS_TOLERANCE,
            Check::Process { mean_fidelity, .. } => mean_fidelity >= PROCESS_FIDELITY_FLOOR,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub gate: String,
    pub check: Check,
    pub csv_path: PathBuf,
}

/// Re-simulates a recorded run and compares it with the ideal gate.
///
/// SX runs get the S·SX·S test; everything else gets the process check.
/// `lab` re-simulates in the lab frame. Writes `verify.csv` next to the
/// run file unless `out_dir` is given.
pub fn verify(run_path: &Path, out_dir: Option<&Path>, lab: bool, seed: Option<u64>) -> Result<VerifyReport> {
    let record = artifacts::read_run(run_path)?;
    let run = record.to_run()?;
    let dev = if lab {
        run.device.in_frame(Frame::Lab)
    } else {
        run.device
    };
    let seed = seed.unwrap_or(run.config.seed);
    let (report, check): (ProbabilityReport, Check) = if run.gate.kind == GateKind::Sx {
        let report = verify_s_sx_s(&run, &dev, VERIFY_INPUTS, seed)?;
        let max_deviation = report.max_deviation;
        (report, Check::SxsIdentity { max_deviation })
    } else {
        let report = compare_probabilities(&run.target, &run.realized_unitary(&dev)?, VERIFY_INPUTS, seed)?;
        let mean_fidelity = process_check(&run, &dev, PROCESS_STATES, seed)?;
        let max_deviation = report.max_deviation;
        (
            report,
            Check::Process {
                mean_fidelity,
                max_deviation,
            },
        )
    };
    let dir = match out_dir {
        Some(d) => d.to_path_buf(),
        None => run_path.parent().unwrap_or(Path::new(".")).to_path_buf(),
    };
    ensure_dir(&dir)?;
    let csv_path = dir.join(artifacts::VERIFY_FILE);
    artifacts::write_verify(&csv_path, &report.rows)?;
    let out = VerifyReport {
        gate: record.gate,
        check,
        csv_path,
    };
    if !out.check.passed() {
        return Err(Error::Numerical(format!(
            "{}: verification failed ({:?})",
            out.gate, out.check
        )));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SweepReport {
    pub points: Vec<SweepPoint>,
    pub resonance_hz: f64,
    pub csv_path: PathBuf,
}

/// Drives |0⟩ with a weak constant probe at `n` carriers spanning
/// [f_min, f_max] (Hz) and writes `sweep.csv`.
pub fn sweep(device_path: &Path, f_min: f64, f_max: f64, n: usize, out_dir: &Path) -> Result<SweepReport> {
    let dev = load_device(device_path)?;
    let probe = PulseSchedule::from_samples(vec![C64::new(SWEEP_PROBE_AMPLITUDE, 0.0); SWEEP_PROBE_SAMPLES], 0.0)?;
    let raw = frequency_sweep(&dev, f_min, f_max, n, &probe)?;
    let resonance_hz = resonance_estimate(&raw).ok_or_else(|| Error::Numerical("empty sweep".into()))?;
    let points: Vec<SweepPoint> = raw
        .into_iter()
        .map(|(f_hz, excited_pop)| SweepPoint { f_hz, excited_pop })
        .collect();
    ensure_dir(out_dir)?;
    let csv_path = out_dir.join(artifacts::SWEEP_FILE);
    artifacts::write_sweep(&csv_path, &points)?;
    Ok(SweepReport {
        points,
        resonance_hz,
        csv_path,
    })
}
