// Copyright 2026 Pulseforge Contributors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64 as C64;
use pulseforge_core::device::{evolve, frequency_sweep, resonance_estimate, DeviceModel, Frame};
use pulseforge_core::pulse::{sample_schedule, squash, PulseParams, PulseSchedule};
use pulseforge_core::quantum::{
    density_of, fidelity, gate_h, gate_sx, gate_x, matrix_sqrt_psd, DensityMatrix, Mat2, PureState,
};
use pulseforge_core::trainer::{
    generate_dataset, s_sx_s_report, train, verify_s_sx_s, GateKind, Objective, TargetGate, TrainerConfig, TrainingRun,
    FD_STEPS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Reference (signed modulus, effective signed modulus) pairs, one per suite gate.
const SQUASH_COLUMN: [(&str, f64, f64); 10] = [
    ("X", 3.280, 0.9275),
    ("SX", -1.167, -0.5254),
    ("H", 0.2154, 0.1073),
    ("R_z", 1.070, 0.4888),
    ("R_y", 2.606, 0.8625),
    ("R_x", 1.204, 0.5384),
    ("U_Rx", 2.601, 0.8618),
    ("U_Ry", 2.977, 0.9031),
    ("U_Rz", 1.987, 0.7589),
    ("3-Rot", 2.491, 0.8470),
];

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: &str, title: &str, ok: bool, detail: String) {
        if !ok {
            self.failures += 1;
        }
        println!("[{}] {id} {title}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn random_state(rng: &mut ChaCha8Rng) -> PureState {
    let mut c = || C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    PureState::normalized(c(), c()).unwrap()
}

fn random_schedule(rng: &mut ChaCha8Rng, n: usize) -> PulseSchedule {
    let samples = (0..n)
        .map(|_| C64::from_polar(rng.random_range(0.0..1.0), rng.random_range(0.0..2.0 * PI)))
        .collect();
    PulseSchedule::from_samples(samples, 0.0).unwrap()
}

fn distance(a: &PureState, b: &PureState) -> f64 {
    let (a, b) = (a.amplitudes(), b.amplitudes());
    ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt()
}

fn state_fidelity(a: &PureState, b: &PureState) -> f64 {
    fidelity(&density_of(a), &density_of(b)).unwrap()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

fn squash_column(r: &mut Report) {
    let (worst, secs) = timed(|| {
        SQUASH_COLUMN
            .iter()
            .map(|&(_, x, y)| (squash(x) - y).abs())
            .fold(0.0, f64::max)
    });
    r.line(
        "1",
        "squash column",
        worst <= 5e-4 && secs < 1e-3,
        format!(
            "max |squash(r) - r_e| = {worst:.2e} (tol 5e-4) over 10 rows in {:.1} us",
            secs * 1e6
        ),
    );
}

fn basis_gates(r: &mut Report, dev: &DeviceModel) -> Option<TrainingRun> {
    let cfg = TrainerConfig::default();
    let mut sx_run = None;
    let mut best = f64::INFINITY;
    let mut all_ok = true;
    let mut parts = Vec::new();
    for kind in [GateKind::X, GateKind::Sx, GateKind::H] {
        let target = TargetGate::new(kind, vec![]).unwrap();
        let (run, secs) = timed(|| train(&target, &cfg, dev));
        match run {
            Ok(run) => {
                let inf = run.final_infidelity;
                all_ok &= inf <= 1e-2 && secs <= 60.0;
                best = best.min(inf);
                parts.push(format!("{}={inf:.3e} ({secs:.2}s)", kind.name()));
                if kind == GateKind::Sx {
                    sx_run = Some(run);
                }
            }
            Err(e) => {
                all_ok = false;
                parts.push(format!("{}: {e}", kind.name()));
            }
        }
    }
    r.line(
        "2",
        "basis-gate training",
        all_ok && best <= 5e-3,
        format!(
            "{} epochs; {} (tol 1e-2 each, best <= 5e-3, <= 60 s/gate)",
            cfg.epochs,
            parts.join(", ")
        ),
    );
    sx_run
}

fn composite(r: &mut Report, dev: &DeviceModel) {
    let target = TargetGate::new(GateKind::ThreeRot, vec![PI / 4.0]).unwrap();
    let (run, secs) = timed(|| train(&target, &TrainerConfig::default(), dev));
    match run {
        Ok(run) => r.line(
            "3",
            "composite condensation",
            run.final_infidelity <= 1e-2 && secs <= 60.0,
            format!(
                "3-Rot(pi/4) infidelity {:.3e} (tol 1e-2) in {secs:.2}s",
                run.final_infidelity
            ),
        ),
        Err(e) => r.line("3", "composite condensation", false, e.to_string()),
    }
}

fn s_sx_s(r: &mut Report, dev: &DeviceModel, sx_run: Option<&TrainingRun>) {
    let exact = s_sx_s_report(&gate_sx(), 10, 5).unwrap().max_deviation;
    let trained = sx_run.map(|run| verify_s_sx_s(run, dev, 10, 5).unwrap().max_deviation);
    let ok = exact <= 1e-10 && trained.is_some_and(|d| d <= 0.02);
    r.line(
        "4",
        "S-SX-S identity",
        ok,
        format!(
            "trained max deviation {} (tol 0.02), exact {exact:.1e} (tol 1e-10)",
            trained.map_or("n/a".into(), |d| format!("{d:.2e}"))
        ),
    );
}

fn resonance(r: &mut Report, dev: &DeviceModel) {
    let probe = PulseSchedule::from_samples(vec![C64::new(0.05, 0.0); 100], 0.0).unwrap();
    let nu = dev.qubit_freq;
    let (sweep, secs) = timed(|| frequency_sweep(dev, nu - 50e6, nu + 50e6, 101, &probe).unwrap());
    let step = 100e6 / 100.0;
    let peak = resonance_estimate(&sweep).unwrap();
    let off = (peak - nu).abs();
    r.line(
        "5",
        "resonance sweep",
        off <= step * (1.0 + 1e-9) && secs <= 5.0,
        format!(
            "argmax {:.6} GHz, |f - nu| = {off:.3e} Hz (tol one step = {step:.0} Hz) in {secs:.3}s",
            peak / 1e9
        ),
    );
}

fn physics(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let dev = DeviceModel::default();

    // Norm drift: full-scale random schedules of 512 samples, both frames.
    let mut drift: f64 = 0.0;
    for (frame, detuning) in [(Frame::RotatingRwa, 0.0), (Frame::RotatingRwa, 50e6), (Frame::Lab, 0.0)] {
        let d = dev.in_frame(frame).with_drive_freq(dev.qubit_freq + detuning);
        let out = evolve(&random_state(&mut rng), &random_schedule(&mut rng, 512), &d);
        drift = drift.max(out.map_or(f64::INFINITY, |o| o.norm_drift));
    }

    // Convergence order from substep halving against a 10x reference.
    let sched = random_schedule(&mut rng, 64);
    let psi = random_state(&mut rng);
    let base = dev.with_drive_freq(dev.qubit_freq - 5e6);
    let run = |substeps| {
        evolve(&psi, &sched, &DeviceModel { substeps, ..base })
            .unwrap()
            .final_state
    };
    let reference = run(40);
    let ratio = distance(&run(2), &reference) / distance(&run(4), &reference);

    // Rabi oscillation under a constant resonant drive.
    let mut rabi: f64 = 0.0;
    for amp in [0.2, 0.55, 1.0] {
        for n in [10usize, 64, 200] {
            let s = PulseSchedule::from_samples(vec![C64::new(amp, 0.0); n], 0.0).unwrap();
            let p1 = evolve(&PureState::zero(), &s, &dev).unwrap().final_state.amplitudes()[1].norm_sqr();
            let expected = (PI * dev.drive_strength * amp * n as f64 * dev.dt).sin().powi(2);
            rabi = rabi.max((p1 - expected).abs());
        }
    }

    // Frame agreement at drive_strength / qubit_freq = 1e-3.
    let weak = DeviceModel {
        drive_strength: dev.qubit_freq * 1e-3,
        ..dev
    };
    let pulse = sample_schedule(&PulseParams {
        duration: 400.0,
        signed_modulus: 4.0,
        argument: 0.3,
        sigma: 100.0,
        correction_amplitude: 2.0,
        phase: 0.4,
    })
    .unwrap();
    let mut frames: f64 = 1.0;
    for _ in 0..3 {
        let psi = random_state(&mut rng);
        let a = evolve(&psi, &pulse, &weak).unwrap().final_state;
        let b = evolve(&psi, &pulse, &weak.in_frame(Frame::Lab)).unwrap().final_state;
        frames = frames.min(state_fidelity(&a, &b));
    }

    let ok = drift <= 1e-9 && (12.0..=20.0).contains(&ratio) && rabi <= 1e-6 && frames >= 1.0 - 1e-3;
    r.line(
        "6",
        "simulator physics",
        ok,
        format!(
            "norm drift {drift:.1e} (tol 1e-9); RK4 halving ratio {ratio:.2} (expect ~16, accept 12-20); \
             Rabi error {rabi:.1e} (tol 1e-6); lab/RWA fidelity {frames:.8} (tol 1-1e-3)"
        ),
    );
}

fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn random_mixture(rng: &mut ChaCha8Rng) -> DensityMatrix {
    let (a, b) = (
        density_of(&random_state(rng)).matrix(),
        density_of(&random_state(rng)).matrix(),
    );
    let p: f64 = rng.random_range(0.0..=1.0);
    let mut m = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][j] * p + b[i][j] * (1.0 - p);
        }
    }
    DensityMatrix::new(m).unwrap()
}

fn fidelity_suite(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let mut axioms = true;
    let mut pure_err: f64 = 0.0;
    let mut sqrt_err: f64 = 0.0;
    for _ in 0..200 {
        let (rho, sigma) = (random_mixture(&mut rng), random_mixture(&mut rng));
        let f = fidelity(&rho, &sigma).unwrap();
        axioms &= (0.0..=1.0).contains(&f);
        axioms &= (f - fidelity(&sigma, &rho).unwrap()).abs() <= 1e-12;
        axioms &= (fidelity(&rho, &rho).unwrap() - 1.0).abs() <= 1e-9;

        let (a, b) = (random_state(&mut rng), random_state(&mut rng));
        let pf = fidelity(&density_of(&a), &density_of(&b)).unwrap();
        pure_err = pure_err.max((pf - a.inner(&b).norm_sqr()).abs());

        let m = rho.matrix();
        let s = matrix_sqrt_psd(&m).unwrap();
        let back = mat_mul(&s, &s);
        for i in 0..2 {
            for j in 0..2 {
                sqrt_err = sqrt_err.max((back[i][j] - m[i][j]).norm());
            }
        }
    }
    r.line(
        "7",
        "fidelity suite",
        axioms && pure_err <= 1e-9 && sqrt_err <= 1e-9,
        format!(
            "axioms {} over 200 pairs; pure-state error {pure_err:.1e} (tol 1e-9); sqrt reconstruction {sqrt_err:.1e} (tol 1e-9)",
            if axioms { "hold" } else { "violated" }
        ),
    );
}

fn gradient_suite(r: &mut Report, dev: &DeviceModel) {
    let mut rng = ChaCha8Rng::seed_from_u64(81);
    let targets = [
        gate_x(),
        gate_h(),
        TargetGate::new(GateKind::ThreeRot, vec![PI / 4.0]).unwrap().unitary(),
    ];
    let mut worst_ratio: f64 = 0.0;
    for i in 0..20 {
        let data = generate_dataset(&targets[i % 3], 10, i as u64).unwrap();
        let obj = Objective::new(&data, dev);
        // Durations stay 0.2 away from the sample-count rounding boundary.
        let p = PulseParams {
            duration: rng.random_range(40..120) as f64 + rng.random_range(-0.2..0.2),
            signed_modulus: rng.random_range(-2.5..2.5),
            argument: rng.random_range(-3.0..3.0),
            sigma: rng.random_range(10.0..60.0),
            correction_amplitude: rng.random_range(-3.0..3.0),
            phase: rng.random_range(-3.0..3.0),
        };
        let grad = obj.gradient(&p).unwrap();
        for k in 0..6 {
            let central = |h: f64| {
                let (mut up, mut down) = (p.to_array(), p.to_array());
                up[k] += h;
                down[k] -= h;
                (obj.loss(&PulseParams::from_array(up)).unwrap() - obj.loss(&PulseParams::from_array(down)).unwrap())
                    / (2.0 * h)
            };
            let h = FD_STEPS[k];
            let (c1, c2, c4) = (central(h), central(0.5 * h), central(0.25 * h));
            let (r1, r2) = ((4.0 * c2 - c1) / 3.0, (4.0 * c4 - c2) / 3.0);
            let oracle = (16.0 * r2 - r1) / 15.0;
            let allowed = (1e-4 * oracle.abs()).max(1e-7);
            worst_ratio = worst_ratio.max((grad[k] - oracle).abs() / allowed);
        }
    }
    r.line(
        "8",
        "gradient suite",
        worst_ratio <= 1.0,
        format!("120 components at 20 points; worst error / allowance = {worst_ratio:.3} (tol 1e-4 rel, 1e-7 abs)"),
    );
}

fn determinism(r: &mut Report, dev: &DeviceModel) {
    let target = TargetGate::new(GateKind::Sx, vec![]).unwrap();
    let cfg = TrainerConfig {
        seed: 1234,
        ..TrainerConfig::default()
    };
    let encode = || serde_json::to_string(&train(&target, &cfg, dev).unwrap().record()).unwrap();
    let (a, b) = (encode(), encode());
    r.line(
        "9",
        "determinism",
        a == b,
        format!(
            "two SX runs with seed 1234: records {}",
            if a == b { "byte-identical" } else { "differ" }
        ),
    );
}

fn main() -> ExitCode {
    let dev = DeviceModel::default();
    let mut report = Report { failures: 0 };
    squash_column(&mut report);
    let sx_run = basis_gates(&mut report, &dev);
    composite(&mut report, &dev);
    s_sx_s(&mut report, &dev, sx_run.as_ref());
    resonance(&mut report, &dev);
    physics(&mut report);
    fidelity_suite(&mut report);
    gradient_suite(&mut report, &dev);
    determinism(&mut report, &dev);
    if report.failures == 0 {
        println!("acceptance: all 9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} of 9 criteria failed", report.failures);
        ExitCode::FAILURE
    }
}
