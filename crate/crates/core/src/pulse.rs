// Copyright 2026 Pulseforge Contributors
// SPDX-License-Identifier: Apache-2.0

//! DRAG pulse parameterization and drive-channel sampling.
//!
//! A pulse is described by six real trainables (see [`PulseParams`]). The
//! complex amplitude is `squash(r)·e^{iα}`, which keeps the pulse magnitude
//! inside the unit disc without a discontinuity at zero amplitude. The
//! envelope is an endpoint-lifted Gaussian with an imaginary derivative
//! (DRAG) term, sampled at sample midpoints.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Peak magnitude that over-cap pulses are rescaled to during training.
pub const CAPPED_PEAK: f64 = 0.999;
/// Loss penalty per unit of peak magnitude above 1.
pub const CAP_PENALTY_WEIGHT: f64 = 10.0;

/// Signed-modulus squashing, `tanh(x/2) = (e^x − 1)/(e^x + 1)`.
pub fn squash(x: f64) -> f64 {
    (0.5 * x).tanh()
}

/// Inverse of [`squash`] on (−1, 1).
pub fn unsquash(y: f64) -> f64 {
    2.0 * y.atanh()
}

/// Sign convention of the squashing map.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusConvention {
    /// `tanh(x/2)`; positive raw modulus gives positive effective modulus.
    #[default]
    Tanh,
    /// `(1 − e^x)/(1 + e^x) = −tanh(x/2)`, kept for compatibility with
    /// records written under the opposite sign.
    Printed,
}

impl ModulusConvention {
    pub fn squash(self, x: f64) -> f64 {
        match self {
            ModulusConvention::Tanh => squash(x),
            ModulusConvention::Printed => -squash(x),
        }
    }
}

/// The six trainable parameters of one DRAG pulse.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseParams {
    /// Pulse length in units of dt. Continuous; the schedule uses
    /// `round(duration)` samples.
    pub duration: f64,
    /// Raw (pre-squash) signed modulus r.
    pub signed_modulus: f64,
    /// Argument α of the complex amplitude, radians.
    pub argument: f64,
    /// Gaussian width σ in units of dt.
    #[serde(rename = "variance")]
    pub sigma: f64,
    /// DRAG derivative weight β, in units of dt.
    pub correction_amplitude: f64,
    /// ShiftPhase applied to the drive channel before the pulse, radians.
    pub phase: f64,
}

/// Parameter names in vector order.
pub const PARAM_NAMES: [&str; 6] = [
    "duration",
    "signed_modulus",
    "argument",
    "variance",
    "correction_amplitude",
    "phase",
];

impl PulseParams {
    pub fn to_array(&self) -> [f64; 6] {
        [
            self.duration,
            self.signed_modulus,
            self.argument,
            self.sigma,
            self.correction_amplitude,
            self.phase,
        ]
    }

    pub fn from_array(v: [f64; 6]) -> Self {
        Self {
            duration: v[0],
            signed_modulus: v[1],
            argument: v[2],
            sigma: v[3],
            correction_amplitude: v[4],
            phase: v[5],
        }
    }

    /// Effective signed modulus r_e = squash(r).
    pub fn effective_modulus(&self) -> f64 {
        squash(self.signed_modulus)
    }

    /// Complex amplitude r_e·e^{iα}.
    pub fn amplitude(&self, convention: ModulusConvention) -> C64 {
        C64::from_polar(convention.squash(self.signed_modulus), self.argument)
    }

    /// Number of schedule samples, `round(duration)` but at least 1.
    pub fn sample_count(&self) -> usize {
        (self.duration.round() as usize).max(1)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(name) = PARAM_NAMES
            .iter()
            .zip(self.to_array())
            .find_map(|(n, v)| (!v.is_finite()).then_some(*n))
        {
            return Err(Error::Invariant(format!("pulse parameter `{name}` is not finite")));
        }
        if self.duration <= 0.0 {
            return Err(Error::Invariant(format!(
                "pulse duration must be positive, got {}",
                self.duration
            )));
        }
        if self.sigma < 1.0 {
            return Err(Error::Invariant(format!(
                "pulse width (variance) must be at least 1 dt, got {}",
                self.sigma
            )));
        }
        Ok(())
    }
}

/// Box constraints applied to parameters after every optimizer update.
/// Angles are not boxed but wrapped into (−π, π].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamBounds {
    pub duration: (f64, f64),
    pub signed_modulus: (f64, f64),
    #[serde(rename = "variance")]
    pub sigma: (f64, f64),
    pub correction_amplitude: (f64, f64),
}

impl Default for ParamBounds {
    fn default() -> Self {
        Self {
            duration: (8.0, 512.0),
            signed_modulus: (-8.0, 8.0),
            sigma: (1.0, 512.0),
            correction_amplitude: (-20.0, 20.0),
        }
    }
}

/// Wraps an angle into (−π, π].
pub fn wrap_angle(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(2.0 * PI) - PI;
    if w == -PI {
        PI
    } else {
        w
    }
}

impl ParamBounds {
    pub fn validate(&self) -> Result<()> {
        let ranges = [
            ("duration", self.duration),
            ("signed_modulus", self.signed_modulus),
            ("variance", self.sigma),
            ("correction_amplitude", self.correction_amplitude),
        ];
        for (name, (lo, hi)) in ranges {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Config(format!("bounds for `{name}` are invalid: [{lo}, {hi}]")));
            }
        }
        if self.duration.0 <= 0.0 {
            return Err(Error::Config("duration lower bound must be positive".into()));
        }
        if self.sigma.0 < 1.0 {
            return Err(Error::Config("variance lower bound must be at least 1".into()));
        }
        Ok(())
    }

    pub fn clamp(&self, p: &PulseParams) -> PulseParams {
        PulseParams {
            duration: p.duration.clamp(self.duration.0, self.duration.1),
            signed_modulus: p.signed_modulus.clamp(self.signed_modulus.0, self.signed_modulus.1),
            argument: wrap_angle(p.argument),
            sigma: p.sigma.clamp(self.sigma.0, self.sigma.1),
            correction_amplitude: p
                .correction_amplitude
                .clamp(self.correction_amplitude.0, self.correction_amplitude.1),
            phase: wrap_angle(p.phase),
        }
    }
}

/// Lifted Gaussian g(t) and its time derivative g'(t).
///
/// g(t) = (G(t) − G(0)) / (1 − G(0)) with G(t) = exp(−(t − D/2)²/(2σ²)), so
/// g vanishes at both endpoints and peaks at 1 in the centre. Both terms
/// are formed with `expm1` so wide Gaussians (σ ≫ D) keep full precision.
fn lifted_gaussian(duration: f64, sigma: f64, t: f64) -> (f64, f64) {
    let center = 0.5 * duration;
    let two_var = 2.0 * sigma * sigma;
    let log_edge = -(center * center) / two_var;
    let x = t - center;
    let log_g = -(x * x) / two_var;
    let lift = -log_edge.exp_m1();
    if lift <= 0.0 {
        // Degenerate width: the lifted shape tends to the parabola
        // 1 − (x/center)².
        let u = x / center;
        return (1.0 - u * u, -2.0 * x / (center * center));
    }
    let g = (log_g.exp_m1() - log_edge.exp_m1()) / lift;
    let dg = -x / (sigma * sigma) * log_g.exp() / lift;
    (g, dg)
}

fn envelope_unchecked(p: &PulseParams, t: f64, convention: ModulusConvention) -> C64 {
    let (g, dg) = lifted_gaussian(p.duration, p.sigma, t);
    p.amplitude(convention) * C64::new(g, p.correction_amplitude * dg)
}

/// DRAG envelope A·(g(t) + iβ·g'(t)) with A = squash(r)·e^{iα}.
///
/// Fails with [`Error::AmplitudeCap`] when the magnitude at `t` exceeds 1.
pub fn drag_envelope(p: &PulseParams, t: f64) -> Result<C64> {
    drag_envelope_with(p, t, ModulusConvention::Tanh)
}

pub fn drag_envelope_with(p: &PulseParams, t: f64, convention: ModulusConvention) -> Result<C64> {
    p.validate()?;
    let value = envelope_unchecked(p, t, convention);
    if value.norm() > 1.0 {
        return Err(Error::AmplitudeCap { peak: value.norm() });
    }
    Ok(value)
}

/// A sampled drive waveform preceded by a ShiftPhase.
#[derive(Clone, Debug, PartialEq)]
pub struct PulseSchedule {
    samples: Vec<C64>,
    pre_phase: f64,
    params: Option<PulseParams>,
}

impl PulseSchedule {
    /// Builds a schedule from explicit samples. Every sample must have
    /// magnitude at most 1 and there must be at least one.
    pub fn from_samples(samples: Vec<C64>, pre_phase: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Invariant("a schedule needs at least one sample".into()));
        }
        if !pre_phase.is_finite() {
            return Err(Error::Invariant("schedule pre-phase is not finite".into()));
        }
        if let Some(bad) = samples.iter().find(|d| !d.norm().is_finite()) {
            return Err(Error::Invariant(format!("schedule sample {bad} is not finite")));
        }
        let peak = peak_magnitude(&samples);
        if peak > 1.0 {
            return Err(Error::AmplitudeCap { peak });
        }
        Ok(Self {
            samples,
            pre_phase,
            params: None,
        })
    }

    /// `n` zero-valued samples.
    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_samples(vec![C64::new(0.0, 0.0); n], 0.0)
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Accumulated channel phase in effect while the samples play.
    pub fn pre_phase(&self) -> f64 {
        self.pre_phase
    }

    pub fn params(&self) -> Option<&PulseParams> {
        self.params.as_ref()
    }

    pub fn peak(&self) -> f64 {
        peak_magnitude(&self.samples)
    }

    /// The same schedule after an additional ShiftPhase of `delta`.
    pub fn with_shift_phase(mut self, delta: f64) -> Self {
        self.pre_phase = shift_phase(self.pre_phase, delta);
        self
    }

    /// Samples reversed in time and complex-conjugated, with the channel
    /// phase negated. For a phase-free schedule this undoes the evolution
    /// of the original on a conjugated state.
    pub fn time_reversed(&self) -> Self {
        Self {
            samples: self.samples.iter().rev().map(|d| d.conj()).collect(),
            pre_phase: -self.pre_phase,
            params: None,
        }
    }

    pub fn to_record(&self, dt: f64) -> ScheduleRecord {
        ScheduleRecord {
            n: self.samples.len(),
            dt,
            pre_phase: self.pre_phase,
            samples: self.samples.iter().map(|d| [d.re, d.im]).collect(),
            params: self.params,
        }
    }

    pub fn from_record(record: &ScheduleRecord) -> Result<Self> {
        if record.n != record.samples.len() {
            return Err(Error::Invariant(format!(
                "schedule record declares n = {} but carries {} samples",
                record.n,
                record.samples.len()
            )));
        }
        let samples = record.samples.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        let mut sched = Self::from_samples(samples, record.pre_phase)?;
        sched.params = record.params;
        Ok(sched)
    }
}

/// JSON interchange form of a [`PulseSchedule`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScheduleRecord {
    pub n: usize,
    /// Sample period in seconds.
    pub dt: f64,
    pub pre_phase: f64,
    pub samples: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<PulseParams>,
}

fn peak_magnitude(samples: &[C64]) -> f64 {
    samples.iter().map(|d| d.norm()).fold(0.0, f64::max)
}

fn raw_samples(p: &PulseParams, convention: ModulusConvention) -> Vec<C64> {
    (0..p.sample_count())
        .map(|j| envelope_unchecked(p, j as f64 + 0.5, convention))
        .collect()
}

/// Samples the envelope at midpoints, d_j = envelope(j + 0.5) for
/// j = 0..round(duration). The ShiftPhase parameter becomes the schedule's
/// pre-phase.
pub fn sample_schedule(p: &PulseParams) -> Result<PulseSchedule> {
    sample_schedule_with(p, ModulusConvention::Tanh)
}

pub fn sample_schedule_with(p: &PulseParams, convention: ModulusConvention) -> Result<PulseSchedule> {
    p.validate()?;
    let samples = raw_samples(p, convention);
    let peak = peak_magnitude(&samples);
    if peak > 1.0 {
        return Err(Error::AmplitudeCap { peak });
    }
    Ok(PulseSchedule {
        samples,
        pre_phase: p.phase,
        params: Some(*p),
    })
}

/// Like [`sample_schedule_with`], but an over-cap pulse is rescaled to a
/// peak of [`CAPPED_PEAK`] and the returned penalty is
/// `CAP_PENALTY_WEIGHT · (peak − 1)`.
pub fn sample_schedule_capped(p: &PulseParams, convention: ModulusConvention) -> Result<(PulseSchedule, f64)> {
    p.validate()?;
    let mut samples = raw_samples(p, convention);
    let peak = peak_magnitude(&samples);
    let mut penalty = 0.0;
    if peak > 1.0 {
        let scale = CAPPED_PEAK / peak;
        samples.iter_mut().for_each(|d| *d *= scale);
        penalty = CAP_PENALTY_WEIGHT * (peak - 1.0);
    }
    Ok((
        PulseSchedule {
            samples,
            pre_phase: p.phase,
            params: Some(*p),
        },
        penalty,
    ))
}

/// Real drive value at timestep `j`: Re[e^{i(2πf·j·dt + φ)}·d_j], with φ the
/// schedule's accumulated channel phase. `f` in Hz, `dt` in seconds.
pub fn drive_signal(sched: &PulseSchedule, f: f64, j: usize, dt: f64) -> Result<f64> {
    let d = sched.samples.get(j).ok_or(Error::IndexOutOfRange {
        index: j,
        len: sched.samples.len(),
    })?;
    let carrier = C64::from_polar(1.0, 2.0 * PI * f * j as f64 * dt + sched.pre_phase);
    Ok((carrier * d).re)
}

/// ShiftPhase: the channel phase after adding `delta`.
pub fn shift_phase(channel_phase: f64, delta: f64) -> f64 {
    channel_phase + delta
}
