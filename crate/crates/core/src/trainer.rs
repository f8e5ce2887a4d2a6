// Copyright 2026 Pulseforge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Supervised training of a single DRAG pulse.
//!
//! A dataset pairs random Bloch states with their images under the target
//! gate (as density matrices). The loss is the mean infidelity between the
//! simulated outputs and those targets; gradients come from central finite
//! differences, and Adam (or plain gradient descent) updates the six pulse
//! parameters once per epoch.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::device::{evolve, unitary_of_schedule, DeviceModel};
use crate::error::{Error, Result};
use crate::pulse::{sample_schedule_capped, ModulusConvention, ParamBounds, PulseParams, PulseSchedule, PARAM_NAMES};
use crate::quantum::{
    apply, bloch_state, density_of, fidelity, gate_h, gate_id, gate_rx, gate_ry, gate_rz, gate_s, gate_sx, gate_u,
    gate_x, measure_probs, three_rot, DensityMatrix, PureState, Unitary2,
};

/// Central-difference steps per parameter, in parameter order.
pub const FD_STEPS: [f64; 6] = [0.25, 1e-3, 1e-3, 1e-2, 1e-3, 1e-3];

/// Loss resolution used to zero out finite-difference components that are
/// pure rounding noise: a component is dropped when |g| < this / step.
pub const FD_NOISE_FLOOR: f64 = 1e-14;

/// The duration step is coarse next to the loss's length scale in that
/// direction, so its central difference is Richardson-extrapolated with a
/// second, half-size step.
const EXTRAPOLATED_PARAM: usize = 0;

const ADAM_BETA1: f64 = 0.9;
const ADAM_BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

/// Loss ratio and streak length that abort a run as diverged.
const DIVERGENCE_RATIO: f64 = 10.0;
const DIVERGENCE_EPOCHS: usize = 10;
/// Reference loss below which the divergence ratio is measured against
/// this floor instead, so a run starting at zero loss is not flagged.
const DIVERGENCE_FLOOR: f64 = 1e-3;

/// Step halvings tried before an epoch leaves the parameters unchanged.
const MAX_BACKTRACKS: usize = 10;

/// Gates that can be used as training targets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    #[serde(rename = "X")]
    X,
    #[serde(rename = "SX")]
    Sx,
    #[serde(rename = "H")]
    H,
    #[serde(rename = "RZ")]
    Rz,
    #[serde(rename = "RY")]
    Ry,
    #[serde(rename = "RX")]
    Rx,
    #[serde(rename = "U")]
    U,
    #[serde(rename = "3ROT")]
    ThreeRot,
    #[serde(rename = "ID")]
    Id,
}

impl GateKind {
    pub const ALL: [GateKind; 9] = [
        GateKind::X,
        GateKind::Sx,
        GateKind::H,
        GateKind::Rz,
        GateKind::Ry,
        GateKind::Rx,
        GateKind::U,
        GateKind::ThreeRot,
        GateKind::Id,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Sx => "SX",
            GateKind::H => "H",
            GateKind::Rz => "RZ",
            GateKind::Ry => "RY",
            GateKind::Rx => "RX",
            GateKind::U => "U",
            GateKind::ThreeRot => "3ROT",
            GateKind::Id => "ID",
        }
    }

    /// Case-insensitive lookup in the registered set.
    pub fn parse(name: &str) -> Result<Self> {
        let upper = name.trim().to_ascii_uppercase();
        Self::ALL.into_iter().find(|g| g.name() == upper).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|g| g.name()).collect();
            Error::Config(format!(
                "unknown gate `{name}`; the registered set is {{{}}}",
                names.join(", ")
            ))
        })
    }

    /// Number of angles the gate takes.
    pub fn arity(self) -> usize {
        match self {
            GateKind::Rz | GateKind::Ry | GateKind::Rx | GateKind::ThreeRot => 1,
            GateKind::U => 3,
            GateKind::X | GateKind::Sx | GateKind::H | GateKind::Id => 0,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A named training target: gate kind plus its angles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetGate {
    /// Display label, e.g. `U_Rx` for a U gate configured as an x rotation.
    pub label: String,
    pub kind: GateKind,
    #[serde(default)]
    pub angles: Vec<f64>,
}

impl TargetGate {
    pub fn new(kind: GateKind, angles: Vec<f64>) -> Result<Self> {
        Self::labeled(kind.name(), kind, angles)
    }

    pub fn labeled(label: impl Into<String>, kind: GateKind, angles: Vec<f64>) -> Result<Self> {
        if angles.len() != kind.arity() {
            return Err(Error::Config(format!(
                "gate {kind} takes {} angle(s), got {}",
                kind.arity(),
                angles.len()
            )));
        }
        if let Some(a) = angles.iter().find(|a| !a.is_finite()) {
            return Err(Error::Config(format!("gate {kind} angle {a} is not finite")));
        }
        Ok(Self {
            label: label.into(),
            kind,
            angles,
        })
    }

    pub fn unitary(&self) -> Unitary2 {
        let a = &self.angles;
        match self.kind {
            GateKind::X => gate_x(),
            GateKind::Sx => gate_sx(),
            GateKind::H => gate_h(),
            GateKind::Rz => gate_rz(a[0]),
            GateKind::Ry => gate_ry(a[0]),
            GateKind::Rx => gate_rx(a[0]),
            GateKind::U => gate_u(a[0], a[1], a[2]),
            GateKind::ThreeRot => three_rot(a[0]),
            GateKind::Id => gate_id(),
        }
    }
}

/// The ten targets of the reference suite. Parameterized rotations use
/// π/2; the `U_R*` rows express the same rotations through the general
/// U gate; 3-Rot uses w = π/4.
pub fn suite_targets() -> Vec<TargetGate> {
    let q = FRAC_PI_2;
    let rows: [(&str, GateKind, Vec<f64>); 10] = [
        ("X", GateKind::X, vec![]),
        ("SX", GateKind::Sx, vec![]),
        ("H", GateKind::H, vec![]),
        ("R_z", GateKind::Rz, vec![q]),
        ("R_y", GateKind::Ry, vec![q]),
        ("R_x", GateKind::Rx, vec![q]),
        ("U_Rx", GateKind::U, vec![q, -q, q]),
        ("U_Ry", GateKind::U, vec![q, 0.0, 0.0]),
        ("U_Rz", GateKind::U, vec![0.0, 0.0, q]),
        ("3-Rot", GateKind::ThreeRot, vec![FRAC_PI_4]),
    ];
    rows.into_iter()
        .map(|(label, kind, angles)| TargetGate::labeled(label, kind, angles).expect("suite rows are well formed"))
        .collect()
}

/// One supervised pair: an input state and the target output density.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainingExample {
    pub input: PureState,
    pub target: DensityMatrix,
}

/// Draws `n` inputs with θ ~ U[0, π], φ ~ U[0, 2π) from a ChaCha8 stream
/// seeded by `seed`, paired with `density_of(target · input)`.
pub fn generate_dataset(target: &Unitary2, n: usize, seed: u64) -> Result<Vec<TrainingExample>> {
    if n == 0 {
        return Err(Error::Config("dataset size must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let theta = rng.random_range(0.0..=PI);
            let phi = rng.random_range(0.0..TAU);
            let input = bloch_state(theta, phi)?;
            let target = density_of(&apply(target, &input)?);
            Ok(TrainingExample { input, target })
        })
        .collect()
}

/// Loss and gradient evaluation for one dataset on one device.
#[derive(Clone, Copy, Debug)]
pub struct Objective<'a> {
    pub dataset: &'a [TrainingExample],
    pub device: &'a DeviceModel,
    pub convention: ModulusConvention,
}

impl<'a> Objective<'a> {
    pub fn new(dataset: &'a [TrainingExample], device: &'a DeviceModel) -> Self {
        Self {
            dataset,
            device,
            convention: ModulusConvention::Tanh,
        }
    }

    /// Mean infidelity over the dataset plus the amplitude-cap penalty.
    pub fn loss(&self, params: &PulseParams) -> Result<f64> {
        let (sched, penalty) = sample_schedule_capped(params, self.convention)?;
        let mut total = 0.0;
        for ex in self.dataset {
            let out = evolve(&ex.input, &sched, self.device)?;
            total += 1.0 - fidelity(&density_of(&out.final_state), &ex.target)?;
        }
        Ok(total / self.dataset.len() as f64 + penalty)
    }

    /// Central finite differences with [`FD_STEPS`] scaled by `step_scale`
    /// (extrapolated for the duration).
    pub fn gradient_with_scale(&self, params: &PulseParams, step_scale: f64) -> Result<[f64; 6]> {
        let base = params.to_array();
        let mut grad = [0.0; 6];
        let mut center = None;
        for k in 0..6 {
            let h = FD_STEPS[k] * step_scale;
            let probe = |delta: f64| -> Result<f64> {
                let mut v = base;
                v[k] += delta;
                let value = self.loss(&PulseParams::from_array(v))?;
                if value.is_finite() {
                    Ok(value)
                } else {
                    Err(Error::GradientEvaluation { param: PARAM_NAMES[k] })
                }
            };
            let plus = probe(h)?;
            let mut lower = base;
            lower[k] -= h;
            grad[k] = if PulseParams::from_array(lower).validate().is_ok() {
                let coarse = (plus - probe(-h)?) / (2.0 * h);
                if k == EXTRAPOLATED_PARAM {
                    let fine = (probe(0.5 * h)? - probe(-0.5 * h)?) / h;
                    (4.0 * fine - coarse) / 3.0
                } else {
                    coarse
                }
            } else {
                // Probe would leave the valid domain (σ < 1): one-sided.
                let c = match center {
                    Some(c) => c,
                    None => {
                        let c = probe(0.0)?;
                        center = Some(c);
                        c
                    }
                };
                (plus - c) / h
            };
            if grad[k].abs() < FD_NOISE_FLOOR / h {
                grad[k] = 0.0;
            }
        }
        Ok(grad)
    }

    pub fn gradient(&self, params: &PulseParams) -> Result<[f64; 6]> {
        self.gradient_with_scale(params, 1.0)
    }
}

/// Mean infidelity of `params` on `dataset` (plus cap penalty).
pub fn loss(params: &PulseParams, dataset: &[TrainingExample], dev: &DeviceModel) -> Result<f64> {
    Objective::new(dataset, dev).loss(params)
}

/// Central finite-difference gradient of [`loss`].
pub fn gradient(params: &PulseParams, dataset: &[TrainingExample], dev: &DeviceModel) -> Result<[f64; 6]> {
    Objective::new(dataset, dev).gradient(params)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimizerKind {
    #[default]
    Adam,
    Gd,
}

/// Starting point of a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Init {
    /// [`default_init`] with seeded Gaussian jitter.
    #[default]
    Default,
    /// Uniform draw inside the parameter bounds.
    Random,
    /// Exactly these parameters (no jitter).
    Params(PulseParams),
}

/// Weak Gaussian pulse used as the default starting point.
pub fn default_init() -> PulseParams {
    PulseParams {
        duration: 64.0,
        signed_modulus: 0.5,
        argument: 0.0,
        sigma: 16.0,
        correction_amplitude: 0.0,
        phase: 0.0,
    }
}

const INIT_JITTER: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainerConfig {
    pub epochs: usize,
    pub dataset_size: usize,
    pub seed: u64,
    pub learning_rate: f64,
    pub optimizer: OptimizerKind,
    pub init: Init,
    pub bounds: ParamBounds,
    /// Natural scale of each parameter. The optimizer works in coordinates
    /// divided by these, so one Adam step moves parameter k by about
    /// `learning_rate · param_scales[k]`.
    pub param_scales: [f64; 6],
    pub modulus_convention: ModulusConvention,
    /// Shrink optimizer steps that would raise the loss.
    pub backtracking: bool,
}

impl Default for TrainerConfig {
    fn default() -> Self {
        Self {
            epochs: 100,
            dataset_size: 10,
            seed: 7,
            learning_rate: 0.05,
            optimizer: OptimizerKind::Adam,
            init: Init::Default,
            bounds: ParamBounds::default(),
            param_scales: [8.0, 1.0, 1.0, 8.0, 1.0, 1.0],
            modulus_convention: ModulusConvention::Tanh,
            backtracking: true,
        }
    }
}

impl TrainerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        if self.dataset_size == 0 {
            return Err(Error::Config("dataset_size must be at least 1".into()));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::Config(format!(
                "learning_rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if let Some(s) = self.param_scales.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
            return Err(Error::Config(format!("param_scales must be positive, got {s}")));
        }
        self.bounds.validate()?;
        if let Init::Params(p) = &self.init {
            p.validate()?;
        }
        Ok(())
    }

    fn initial_params(&self) -> PulseParams {
        // Stream 1 of the run seed; stream 0 draws the dataset.
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(1);
        let b = &self.bounds;
        match self.init {
            Init::Params(p) => self.bounds.clamp(&p),
            Init::Default => {
                let mut v = default_init().to_array();
                for (x, scale) in v.iter_mut().zip(self.param_scales) {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    *x += INIT_JITTER * scale * z;
                }
                b.clamp(&PulseParams::from_array(v))
            }
            Init::Random => {
                let mut draw = |(lo, hi): (f64, f64)| if lo < hi { rng.random_range(lo..hi) } else { lo };
                let duration = draw(b.duration);
                let signed_modulus = draw(b.signed_modulus);
                let argument = draw((-PI, PI));
                let sigma = draw(b.sigma);
                let correction_amplitude = draw(b.correction_amplitude);
                let phase = draw((-PI, PI));
                PulseParams {
                    duration,
                    signed_modulus,
                    argument,
                    sigma,
                    correction_amplitude,
                    phase,
                }
            }
        }
    }
}

/// Optimizer state over the scaled coordinates.
#[derive(Clone, Debug)]
struct Optimizer {
    kind: OptimizerKind,
    lr: f64,
    scales: [f64; 6],
    m: [f64; 6],
    v: [f64; 6],
    t: i32,
}

impl Optimizer {
    fn new(cfg: &TrainerConfig) -> Self {
        Self {
            kind: cfg.optimizer,
            lr: cfg.learning_rate,
            scales: cfg.param_scales,
            m: [0.0; 6],
            v: [0.0; 6],
            t: 0,
        }
    }

    /// Advances the optimizer state and returns the proposed parameter
    /// change (to be subtracted), in parameter units.
    fn direction(&mut self, grad: &[f64; 6]) -> [f64; 6] {
        self.t += 1;
        let mut out = [0.0; 6];
        for k in 0..6 {
            // Gradient with respect to the scaled coordinate x_k / scale_k.
            let g = grad[k] * self.scales[k];
            let delta = match self.kind {
                OptimizerKind::Gd => self.lr * g,
                OptimizerKind::Adam => {
                    self.m[k] = ADAM_BETA1 * self.m[k] + (1.0 - ADAM_BETA1) * g;
                    self.v[k] = ADAM_BETA2 * self.v[k] + (1.0 - ADAM_BETA2) * g * g;
                    let m_hat = self.m[k] / (1.0 - ADAM_BETA1.powi(self.t));
                    let v_hat = self.v[k] / (1.0 - ADAM_BETA2.powi(self.t));
                    self.lr * m_hat / (v_hat.sqrt() + ADAM_EPS)
                }
            };
            out[k] = delta * self.scales[k];
        }
        out
    }
}

fn displaced(params: &PulseParams, direction: &[f64; 6], factor: f64) -> PulseParams {
    let mut x = params.to_array();
    for (xk, dk) in x.iter_mut().zip(direction) {
        *xk -= factor * dk;
    }
    PulseParams::from_array(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub epoch: usize,
    pub infidelity: f64,
}

/// Full output of one training run.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainingRun {
    pub gate: TargetGate,
    pub target: Unitary2,
    pub trace: Vec<TracePoint>,
    /// Parameters at which the last trace point was evaluated.
    pub final_params: PulseParams,
    pub final_infidelity: f64,
    pub device: DeviceModel,
    pub config: TrainerConfig,
}

impl TrainingRun {
    /// The (capped) schedule the trained parameters play.
    pub fn schedule(&self) -> Result<PulseSchedule> {
        Ok(sample_schedule_capped(&self.final_params, self.config.modulus_convention)?.0)
    }

    /// Unitary realized by the trained pulse on `dev`.
    pub fn realized_unitary(&self, dev: &DeviceModel) -> Result<Unitary2> {
        unitary_of_schedule(&self.schedule()?, dev)
    }

    pub fn record(&self) -> RunRecord {
        let p = &self.final_params;
        RunRecord {
            gate: self.gate.label.clone(),
            duration: p.duration,
            signed_modulus: p.signed_modulus,
            effective_signed_modulus: self.config.modulus_convention.squash(p.signed_modulus),
            argument: p.argument,
            variance: p.sigma,
            correction_amplitude: p.correction_amplitude,
            phase: p.phase,
            infidelity: self.final_infidelity,
            kind: self.gate.kind,
            angles: self.gate.angles.clone(),
            device: self.device,
            config: self.config.clone(),
            timestamp: None,
        }
    }
}

/// Serialized form of a run: the trained-parameter row plus the metadata
/// needed to rebuild the target and re-simulate the pulse.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub gate: String,
    pub duration: f64,
    pub signed_modulus: f64,
    pub effective_signed_modulus: f64,
    pub argument: f64,
    pub variance: f64,
    pub correction_amplitude: f64,
    pub phase: f64,
    pub infidelity: f64,
    pub kind: GateKind,
    pub angles: Vec<f64>,
    pub device: DeviceModel,
    pub config: TrainerConfig,
    /// Seconds since the Unix epoch; the only field allowed to differ
    /// between reruns.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl RunRecord {
    pub fn params(&self) -> PulseParams {
        PulseParams {
            duration: self.duration,
            signed_modulus: self.signed_modulus,
            argument: self.argument,
            sigma: self.variance,
            correction_amplitude: self.correction_amplitude,
            phase: self.phase,
        }
    }

    pub fn target_gate(&self) -> Result<TargetGate> {
        TargetGate::labeled(self.gate.clone(), self.kind, self.angles.clone())
    }

    /// Rebuilds the run; the trace is not part of the record and comes
    /// back empty.
    pub fn to_run(&self) -> Result<TrainingRun> {
        let gate = self.target_gate()?;
        let params = self.params();
        params.validate()?;
        self.device.validate()?;
        Ok(TrainingRun {
            target: gate.unitary(),
            gate,
            trace: Vec::new(),
            final_params: params,
            final_infidelity: self.infidelity,
            device: self.device,
            config: self.config.clone(),
        })
    }
}

/// Trains one pulse toward `target`.
///
/// Each epoch records the loss at the current parameters and (except after
/// the last epoch) takes one optimizer step on the full dataset followed by
/// bound clamping. With `backtracking` the step is halved until the loss
/// does not increase. The run is deterministic in `(cfg, dev)`.
pub fn train(target: &TargetGate, cfg: &TrainerConfig, dev: &DeviceModel) -> Result<TrainingRun> {
    cfg.validate()?;
    dev.validate()?;
    let unitary = target.unitary();
    let dataset = generate_dataset(&unitary, cfg.dataset_size, cfg.seed)?;
    let objective = Objective {
        dataset: &dataset,
        device: dev,
        convention: cfg.modulus_convention,
    };
    let mut params = cfg.initial_params();
    let mut optimizer = Optimizer::new(cfg);
    let mut trace = Vec::with_capacity(cfg.epochs);
    let mut initial = None;
    let mut streak = 0;

    let mut value = objective.loss(&params)?;
    for epoch in 0..cfg.epochs {
        trace.push(TracePoint {
            epoch,
            infidelity: value,
        });
        let first = *initial.get_or_insert(value);
        if value > DIVERGENCE_RATIO * first.max(DIVERGENCE_FLOOR) {
            streak += 1;
            if streak >= DIVERGENCE_EPOCHS {
                return Err(Error::Divergence {
                    epoch,
                    loss: value,
                    initial: first,
                });
            }
        } else {
            streak = 0;
        }
        if epoch + 1 == cfg.epochs {
            break;
        }
        let grad = objective.gradient(&params)?;
        let direction = optimizer.direction(&grad);
        if cfg.backtracking {
            // Halve the step until the loss does not increase; if no trial
            // succeeds the parameters stay where they are this epoch.
            let mut factor = 1.0;
            for _ in 0..=MAX_BACKTRACKS {
                let candidate = cfg.bounds.clamp(&displaced(&params, &direction, factor));
                let trial = objective.loss(&candidate)?;
                if trial <= value {
                    params = candidate;
                    value = trial;
                    break;
                }
                factor *= 0.5;
            }
        } else {
            params = cfg.bounds.clamp(&displaced(&params, &direction, 1.0));
            value = objective.loss(&params)?;
        }
    }

    let final_infidelity = trace.last().map(|p| p.infidelity).unwrap_or(f64::NAN);
    Ok(TrainingRun {
        gate: target.clone(),
        target: unitary,
        trace,
        final_params: params,
        final_infidelity,
        device: *dev,
        config: cfg.clone(),
    })
}

/// Outcome of one suite row.
#[derive(Debug, Clone)]
pub struct SuiteEntry {
    pub gate: TargetGate,
    pub result: Result<TrainingRun>,
}

/// Trains every [`suite_targets`] row. Rows run in parallel on the current
/// rayon pool; a failing row does not stop the others.
pub fn train_suite(dev: &DeviceModel, cfg: &TrainerConfig) -> Vec<SuiteEntry> {
    suite_targets()
        .into_par_iter()
        .map(|gate| {
            let result = train(&gate, cfg, dev);
            SuiteEntry { gate, result }
        })
        .collect()
}

/// Measurement statistics of one input under an ideal and an actual gate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityRow {
    pub theta: f64,
    pub phi: f64,
    pub ideal_p0: f64,
    pub ideal_p1: f64,
    pub trained_p0: f64,
    pub trained_p1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityReport {
    pub rows: Vec<ProbabilityRow>,
    /// max over inputs of |p_trained − p_ideal|.
    pub max_deviation: f64,
}

/// Compares measurement probabilities of `actual` against `ideal` on |0⟩
/// followed by `n_random` seeded random Bloch states.
pub fn compare_probabilities(
    ideal: &Unitary2,
    actual: &Unitary2,
    n_random: usize,
    seed: u64,
) -> Result<ProbabilityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut angles = vec![(0.0, 0.0)];
    angles.extend((0..n_random).map(|_| (rng.random_range(0.0..=PI), rng.random_range(0.0..TAU))));
    let mut rows = Vec::with_capacity(angles.len());
    let mut max_deviation: f64 = 0.0;
    for (theta, phi) in angles {
        let input = bloch_state(theta, phi)?;
        let (ideal_p0, ideal_p1) = measure_probs(&apply(ideal, &input)?);
        let (trained_p0, trained_p1) = measure_probs(&apply(actual, &input)?);
        max_deviation = max_deviation
            .max((trained_p0 - ideal_p0).abs())
            .max((trained_p1 - ideal_p1).abs());
        rows.push(ProbabilityRow {
            theta,
            phi,
            ideal_p0,
            ideal_p1,
            trained_p0,
            trained_p1,
        });
    }
    Ok(ProbabilityReport { rows, max_deviation })
}

/// S·`sx`·S against the ideal Hadamard, S applied as an exact matrix.
pub fn s_sx_s_report(sx: &Unitary2, n_random: usize, seed: u64) -> Result<ProbabilityReport> {
    compare_probabilities(&gate_h(), &(gate_s() * *sx * gate_s()), n_random, seed)
}

/// S–SX–S identity check for a trained SX run, simulated on `dev`.
pub fn verify_s_sx_s(run: &TrainingRun, dev: &DeviceModel, n_random: usize, seed: u64) -> Result<ProbabilityReport> {
    if run.target.phase_insensitive_overlap(&gate_sx()) < 1.0 - 1e-12 {
        return Err(Error::Config(format!(
            "S-SX-S verification needs an SX run, got {}",
            run.gate.label
        )));
    }
    s_sx_s_report(&run.realized_unitary(dev)?, n_random, seed)
}

/// Mean state fidelity between the trained pulse and the target over
/// `n_states` fresh random inputs (drawn from a stream disjoint from the
/// training data).
pub fn process_check(run: &TrainingRun, dev: &DeviceModel, n_states: usize, seed: u64) -> Result<f64> {
    let realized = run.realized_unitary(dev)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2);
    let mut total = 0.0;
    for _ in 0..n_states {
        let input = bloch_state(rng.random_range(0.0..=PI), rng.random_range(0.0..TAU))?;
        let want = density_of(&apply(&run.target, &input)?);
        let got = density_of(&apply(&realized, &input)?);
        total += fidelity(&got, &want)?;
    }
    Ok(total / n_states.max(1) as f64)
}
