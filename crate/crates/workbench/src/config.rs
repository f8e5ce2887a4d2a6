// Copyright 2026 Pulseforge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Experiment and device configuration files.
//!
//! TOML is canonical; a file whose name ends in `.json` is read as JSON.

use std::fs;
use std::path::{Path, PathBuf};

use pulseforge_core::device::{DeviceModel, Frame};
use pulseforge_core::trainer::{GateKind, TargetGate, TrainerConfig};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Final infidelity at or below which `train` reports success.
pub const DEFAULT_THRESHOLD: f64 = 1e-2;

/// Device description in laboratory units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceConfig {
    pub qubit_freq_ghz: f64,
    pub drive_strength_ghz: f64,
    pub dt_ns: f64,
    /// Integrator substeps per sample; the frame's default when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub substeps: Option<usize>,
    #[serde(default)]
    pub frame: Frame,
    /// Carrier frequency; the qubit frequency when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drive_freq_ghz: Option<f64>,
}

impl Default for DeviceConfig {
    fn default() -> Self {
        Self::from_model(&DeviceModel::default())
    }
}

impl DeviceConfig {
    pub fn from_model(dev: &DeviceModel) -> Self {
        Self {
            qubit_freq_ghz: dev.qubit_freq / 1e9,
            drive_strength_ghz: dev.drive_strength / 1e9,
            dt_ns: dev.dt / 1e-9,
            substeps: Some(dev.substeps),
            frame: dev.frame,
            drive_freq_ghz: dev.drive_freq.map(|f| f / 1e9),
        }
    }

    pub fn to_model(&self) -> Result<DeviceModel> {
        let dev = DeviceModel {
            qubit_freq: self.qubit_freq_ghz * 1e9,
            drive_strength: self.drive_strength_ghz * 1e9,
            dt: self.dt_ns * 1e-9,
            drive_freq: self.drive_freq_ghz.map(|f| f * 1e9),
            substeps: self.substeps.unwrap_or_else(|| self.frame.default_substeps()),
            frame: self.frame,
        };
        dev.validate()?;
        Ok(dev)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    /// One of X, SX, H, RZ, RY, RX, U, 3ROT, ID.
    pub gate: String,
    #[serde(default)]
    pub angles: Vec<f64>,
    /// Display name used in outputs; defaults to the gate name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl TargetSpec {
    pub fn resolve(&self) -> Result<TargetGate> {
        let kind = GateKind::parse(&self.gate).map_err(|e| Error::Spec(format!("target.gate: {e}")))?;
        let label = self.label.clone().unwrap_or_else(|| kind.name().to_string());
        TargetGate::labeled(label, kind, self.angles.clone()).map_err(|e| Error::Spec(format!("target.angles: {e}")))
    }
}

/// One training experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub target: TargetSpec,
    /// Device file, relative to the spec file. The default device when
    /// absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub device: Option<PathBuf>,
    #[serde(default)]
    pub trainer: TrainerConfig,
    /// Output directory, relative to the spec file.
    pub outputs: PathBuf,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

fn default_threshold() -> f64 {
    DEFAULT_THRESHOLD
}

/// A spec with its relative paths resolved and its parts validated.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub target: TargetGate,
    pub device: DeviceModel,
    pub trainer: TrainerConfig,
    pub outputs: PathBuf,
    pub threshold: f64,
}

impl ExperimentSpec {
    pub fn load(path: &Path) -> Result<Self> {
        read_config(path)
    }

    pub fn resolve(&self, base: &Path) -> Result<Experiment> {
        let target = self.target.resolve()?;
        let device = match &self.device {
            Some(p) => load_device(&base.join(p))?,
            None => DeviceModel::default(),
        };
        self.trainer
            .validate()
            .map_err(|e| Error::Spec(format!("trainer: {e}")))?;
        if !(self.threshold.is_finite() && self.threshold > 0.0) {
            return Err(Error::Spec(format!(
                "threshold must be positive, got {}",
                self.threshold
            )));
        }
        Ok(Experiment {
            target,
            device,
            trainer: self.trainer.clone(),
            outputs: base.join(&self.outputs),
            threshold: self.threshold,
        })
    }
}

pub fn load_device(path: &Path) -> Result<DeviceModel> {
    let cfg: DeviceConfig = read_config(path)?;
    cfg.to_model()
        .map_err(|e| Error::Spec(format!("{}: {e}", path.display())))
}

fn read_config<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let parsed = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        serde_json::from_str(&text).map_err(|e| e.to_string())
    } else {
        toml::from_str(&text).map_err(|e| e.to_string())
    };
    parsed.map_err(|e| Error::Spec(format!("{}: {}", path.display(), e.trim_end())))
}
