// Copyright 2026 Pulseforge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Readers and writers for every file the workbench produces.
//!
//! Floats are written in shortest round-trip form, so each reader returns
//! exactly what the matching writer was given.

use std::fs;
use std::path::Path;

use pulseforge_core::trainer::{ProbabilityRow, RunRecord, TracePoint};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const RUN_FILE: &str = "run.json";
pub const TRACE_FILE: &str = "trace.csv";
pub const TABLE_JSON_FILE: &str = "table1.json";
pub const TABLE_TEXT_FILE: &str = "table1.txt";
pub const VERIFY_FILE: &str = "verify.csv";
pub const SWEEP_FILE: &str = "sweep.csv";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub f_hz: f64,
    pub excited_pop: f64,
}

fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Spec(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Spec(format!("{}: {e}", path.display())))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Spec(format!("{}: {other:?}", path.display())),
    }
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    for row in rows {
        w.serialize(row).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    r.deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(|e| csv_error(path, e))
}

pub fn write_run(path: &Path, record: &RunRecord) -> Result<()> {
    write_json(path, record)
}

pub fn read_run(path: &Path) -> Result<RunRecord> {
    read_json(path)
}

pub fn write_table(path: &Path, records: &[RunRecord]) -> Result<()> {
    write_json(path, records)
}

pub fn read_table(path: &Path) -> Result<Vec<RunRecord>> {
    read_json(path)
}

/// `epoch,infidelity`
pub fn write_trace(path: &Path, trace: &[TracePoint]) -> Result<()> {
    write_csv(path, trace)
}

pub fn read_trace(path: &Path) -> Result<Vec<TracePoint>> {
    read_csv(path)
}

/// `theta,phi,ideal_p0,ideal_p1,trained_p0,trained_p1`
pub fn write_verify(path: &Path, rows: &[ProbabilityRow]) -> Result<()> {
    write_csv(path, rows)
}

pub fn read_verify(path: &Path) -> Result<Vec<ProbabilityRow>> {
    read_csv(path)
}

/// `f_hz,excited_pop`
pub fn write_sweep(path: &Path, points: &[SweepPoint]) -> Result<()> {
    write_csv(path, points)
}

pub fn read_sweep(path: &Path) -> Result<Vec<SweepPoint>> {
    read_csv(path)
}
