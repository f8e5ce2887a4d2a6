// Copyright 2026 Pulseforge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Driven two-level qubit simulator.
//!
//! The qubit Hamiltonian (ħ = 1, angular units) is
//!
//! ```text
//! H(t) = 2πν·|1⟩⟨1| + 2πΩ·D(t)·σx,    D(t) = Re[e^{i(2πf t + φ)}·d_j]
//! ```
//!
//! with the envelope sample d_j held for one dt. Two frames are offered:
//!
//! * [`Frame::RotatingRwa`]: rotating frame at the carrier f with the
//!   counter-rotating terms dropped,
//!   `H = 2π(ν − f)|1⟩⟨1| + πΩ(d̃|0⟩⟨1| + d̃*|1⟩⟨0|)`, d̃ = e^{iφ}d.
//!   Piecewise constant, cheap, used for training.
//! * [`Frame::Lab`]: the full Hamiltonian including counter-rotating terms.
//!   The static qubit term is removed exactly (interaction picture) and the
//!   remaining fast drive is integrated with a continuous carrier.
//!
//! Both frames report the final state in the frame of the drive channel:
//! rotating at f and shifted by the channel phase φ. A ShiftPhase before a
//! pulse therefore acts as a virtual Z rotation on the reported state.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pulse::PulseSchedule;
use crate::quantum::{PureState, Unitary2, NORM_TOL};

/// Largest pre-renormalization norm drift accepted from the integrator.
pub const NORM_DRIFT_LIMIT: f64 = 1e-9;

/// Default RK4 substeps per sample in the rotating frame.
pub const DEFAULT_RWA_SUBSTEPS: usize = 4;
/// Default RK4 substeps per sample in the lab frame.
pub const DEFAULT_LAB_SUBSTEPS: usize = 400;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    Lab,
    #[default]
    RotatingRwa,
}

impl Frame {
    pub fn default_substeps(self) -> usize {
        match self {
            Frame::Lab => DEFAULT_LAB_SUBSTEPS,
            Frame::RotatingRwa => DEFAULT_RWA_SUBSTEPS,
        }
    }
}

/// Physical model of the qubit and its drive line. Frequencies in Hz, dt in
/// seconds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviceModel {
    pub qubit_freq: f64,
    /// Rabi coupling: a unit-magnitude resonant sample rotates the qubit at
    /// `drive_strength` cycles per second.
    pub drive_strength: f64,
    pub dt: f64,
    /// Carrier frequency; `None` drives at `qubit_freq`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drive_freq: Option<f64>,
    pub substeps: usize,
    pub frame: Frame,
}

impl Default for DeviceModel {
    /// ν = 4.972 GHz, Ω = 57 MHz, dt = 0.222 ns, rotating frame.
    ///
    /// With this Ω a lifted Gaussian of width 80 dt, length 64 dt and
    /// effective modulus 0.93 is a π rotation.
    fn default() -> Self {
        Self {
            qubit_freq: 4.972e9,
            drive_strength: 0.057e9,
            dt: 0.222e-9,
            drive_freq: None,
            substeps: DEFAULT_RWA_SUBSTEPS,
            frame: Frame::RotatingRwa,
        }
    }
}

impl DeviceModel {
    pub fn carrier(&self) -> f64 {
        self.drive_freq.unwrap_or(self.qubit_freq)
    }

    /// Same device in another frame, with that frame's default substeps.
    pub fn in_frame(&self, frame: Frame) -> Self {
        Self {
            frame,
            substeps: frame.default_substeps(),
            ..*self
        }
    }

    pub fn with_drive_freq(&self, f: f64) -> Self {
        Self {
            drive_freq: Some(f),
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("qubit_freq", self.qubit_freq),
            ("drive_strength", self.drive_strength),
            ("dt", self.dt),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("device `{name}` must be positive, got {v}")));
            }
        }
        if let Some(f) = self.drive_freq {
            if !(f.is_finite() && f > 0.0) {
                return Err(Error::Config(format!("device `drive_freq` must be positive, got {f}")));
            }
        }
        if self.substeps == 0 {
            return Err(Error::Config("device `substeps` must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolutionResult {
    pub final_state: PureState,
    /// Largest |1 − ‖ψ‖| seen at sample boundaries before renormalization.
    pub norm_drift: f64,
    /// Integrator steps taken.
    pub wall_steps: usize,
}

type Vec2 = [C64; 2];

/// Hermitian operator stored as its diagonal and upper off-diagonal.
#[derive(Clone, Copy)]
struct Ham {
    d0: f64,
    d1: f64,
    off: C64,
}

impl Ham {
    /// −i·H·ψ
    #[inline]
    fn deriv(&self, psi: &Vec2) -> Vec2 {
        let h0 = psi[0] * self.d0 + self.off * psi[1];
        let h1 = self.off.conj() * psi[0] + psi[1] * self.d1;
        [C64::new(h0.im, -h0.re), C64::new(h1.im, -h1.re)]
    }
}

#[inline]
fn axpy(psi: &Vec2, k: &Vec2, h: f64) -> Vec2 {
    [psi[0] + k[0] * h, psi[1] + k[1] * h]
}

#[inline]
fn rk4_step(psi: &Vec2, h: f64, ham: impl Fn(f64) -> Ham, t: f64) -> Vec2 {
    let mid = ham(t + 0.5 * h);
    let k1 = ham(t).deriv(psi);
    let k2 = mid.deriv(&axpy(psi, &k1, 0.5 * h));
    let k3 = mid.deriv(&axpy(psi, &k2, 0.5 * h));
    let k4 = ham(t + h).deriv(&axpy(psi, &k3, h));
    [
        psi[0] + (k1[0] + (k2[0] + k3[0]) * 2.0 + k4[0]) * (h / 6.0),
        psi[1] + (k1[1] + (k2[1] + k3[1]) * 2.0 + k4[1]) * (h / 6.0),
    ]
}

fn norm(psi: &Vec2) -> f64 {
    (psi[0].norm_sqr() + psi[1].norm_sqr()).sqrt()
}

/// Integrates the Schrödinger equation for `sched` starting from `initial`.
///
/// The returned state is renormalized once at the end; the drift seen
/// before that is reported and must stay within [`NORM_DRIFT_LIMIT`].
pub fn evolve(initial: &PureState, sched: &PulseSchedule, dev: &DeviceModel) -> Result<EvolutionResult> {
    dev.validate()?;
    let drift0 = (initial.norm_sqr() - 1.0).abs();
    if drift0 > NORM_TOL {
        return Err(Error::Invariant(format!("initial state norm² drift {drift0:e}")));
    }
    let mut psi = initial.amplitudes();
    let h = dev.dt / dev.substeps as f64;
    let detuning = 2.0 * PI * (dev.qubit_freq - dev.carrier());
    let mut drift: f64 = 0.0;

    match dev.frame {
        Frame::RotatingRwa => {
            let coupling = PI * dev.drive_strength;
            let channel = C64::from_polar(1.0, sched.pre_phase());
            for d in sched.samples() {
                let ham = Ham {
                    d0: 0.0,
                    d1: detuning,
                    off: channel * d * coupling,
                };
                for _ in 0..dev.substeps {
                    psi = rk4_step(&psi, h, |_| ham, 0.0);
                }
                drift = drift.max((1.0 - norm(&psi)).abs());
            }
        }
        Frame::Lab => {
            let coupling = 2.0 * PI * dev.drive_strength;
            let w_drive = 2.0 * PI * dev.carrier();
            let w_qubit = 2.0 * PI * dev.qubit_freq;
            let phi = sched.pre_phase();
            for (j, d) in sched.samples().iter().enumerate() {
                let ham = |t: f64| {
                    let drive = (C64::from_polar(1.0, w_drive * t + phi) * d).re;
                    Ham {
                        d0: 0.0,
                        d1: 0.0,
                        off: C64::from_polar(coupling * drive, -w_qubit * t),
                    }
                };
                let t0 = j as f64 * dev.dt;
                for s in 0..dev.substeps {
                    psi = rk4_step(&psi, h, ham, t0 + s as f64 * h);
                }
                drift = drift.max((1.0 - norm(&psi)).abs());
            }
            // Interaction picture -> rotating frame at the carrier.
            let total = sched.len() as f64 * dev.dt;
            psi[1] *= C64::from_polar(1.0, (w_drive - w_qubit) * total);
        }
    }

    if !drift.is_finite() || drift > NORM_DRIFT_LIMIT {
        return Err(Error::IntegrationAccuracy {
            drift,
            limit: NORM_DRIFT_LIMIT,
        });
    }
    // Report in the channel frame.
    psi[1] *= C64::from_polar(1.0, sched.pre_phase());
    let n = norm(&psi);
    let final_state = PureState::from_raw([psi[0] / n, psi[1] / n]);
    Ok(EvolutionResult {
        final_state,
        norm_drift: drift,
        wall_steps: sched.len() * dev.substeps,
    })
}

/// Propagator of a schedule; column k is the evolution of basis state |k⟩.
pub fn unitary_of_schedule(sched: &PulseSchedule, dev: &DeviceModel) -> Result<Unitary2> {
    let c0 = evolve(&PureState::zero(), sched, dev)?.final_state.amplitudes();
    let c1 = evolve(&PureState::one(), sched, dev)?.final_state.amplitudes();
    let u = Unitary2::from_raw([[c0[0], c1[0]], [c0[1], c1[1]]]);
    let defect = u.unitarity_defect();
    if defect > 1e-8 {
        return Err(Error::IntegrationAccuracy {
            drift: defect,
            limit: 1e-8,
        });
    }
    Ok(u)
}

/// Excited-state population after driving |0⟩ with `probe` at each carrier
/// on a uniform grid over [f_min, f_max].
pub fn frequency_sweep(
    dev: &DeviceModel,
    f_min: f64,
    f_max: f64,
    n_points: usize,
    probe: &PulseSchedule,
) -> Result<Vec<(f64, f64)>> {
    if !(f_min.is_finite() && f_max.is_finite() && f_min > 0.0 && f_min < f_max) {
        return Err(Error::Config(format!(
            "sweep range must satisfy 0 < f_min < f_max, got [{f_min}, {f_max}]"
        )));
    }
    if n_points < 3 {
        return Err(Error::Config(format!("sweep needs at least 3 points, got {n_points}")));
    }
    let step = (f_max - f_min) / (n_points - 1) as f64;
    (0..n_points)
        .map(|k| {
            let f = f_min + step * k as f64;
            let out = evolve(&PureState::zero(), probe, &dev.with_drive_freq(f))?;
            Ok((f, out.final_state.amplitudes()[1].norm_sqr()))
        })
        .collect()
}

/// Carrier with the largest response; the first one wins ties.
pub fn resonance_estimate(sweep: &[(f64, f64)]) -> Option<f64> {
    sweep
        .iter()
        .fold(None, |best: Option<(f64, f64)>, &(f, p)| match best {
            Some((_, bp)) if bp >= p => best,
            _ => Some((f, p)),
        })
        .map(|(f, _)| f)
}
