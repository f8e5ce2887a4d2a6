// Copyright 2026 Pulseforge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Single-qubit states, gates and the Uhlmann fidelity.
//!
//! Everything here is exact 2×2 linear algebra on `Complex64`. Rotations
//! follow R_a(α) = exp(−iασ_a/2).

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major 2×2 complex matrix.
pub type Mat2 = [[C64; 2]; 2];

/// Norm tolerance accepted by [`apply`].
pub const NORM_TOL: f64 = 1e-10;
/// Unitarity tolerance for [`Unitary2::new`].
pub const UNITARY_TOL: f64 = 1e-10;
/// Hermiticity and trace tolerance for [`DensityMatrix::new`].
pub const DENSITY_TOL: f64 = 1e-12;
/// Negative eigenvalue dust tolerated (and clamped) in PSD inputs.
pub const EIGEN_DUST: f64 = 1e-10;
/// Fidelity overshoot above 1 that is treated as rounding.
pub const FIDELITY_OVERSHOOT: f64 = 1e-9;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

pub(crate) fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

pub(crate) fn dagger(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

fn identity() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

fn trace(a: &Mat2) -> C64 {
    a[0][0] + a[1][1]
}

fn det(a: &Mat2) -> C64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

fn max_abs_diff(a: &Mat2, b: &Mat2) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn hermiticity_defect(a: &Mat2) -> f64 {
    max_abs_diff(a, &dagger(a))
}

/// Eigenvalues (ascending) of a Hermitian 2×2 matrix.
fn hermitian_eigenvalues(a: &Mat2) -> (f64, f64) {
    let p = a[0][0].re;
    let q = a[1][1].re;
    let mean = 0.5 * (p + q);
    let radius = (0.25 * (p - q) * (p - q) + a[0][1].norm_sqr()).sqrt();
    (mean - radius, mean + radius)
}

/// A normalized single-qubit state vector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    amps: [C64; 2],
}

impl PureState {
    /// Builds a state from amplitudes that must already be normalized.
    pub fn new(a0: C64, a1: C64) -> Result<Self> {
        let state = Self { amps: [a0, a1] };
        let drift = (state.norm_sqr() - 1.0).abs();
        if !drift.is_finite() || drift > NORM_TOL {
            return Err(Error::Invariant(format!("state norm² deviates from 1 by {drift:e}")));
        }
        Ok(state)
    }

    /// Builds a state by rescaling arbitrary non-zero amplitudes.
    pub fn normalized(a0: C64, a1: C64) -> Result<Self> {
        let norm = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::Invariant("cannot normalize a zero vector".into()));
        }
        Ok(Self {
            amps: [a0 / norm, a1 / norm],
        })
    }

    pub(crate) fn from_raw(amps: [C64; 2]) -> Self {
        Self { amps }
    }

    pub fn zero() -> Self {
        Self { amps: [ONE, ZERO] }
    }

    pub fn one() -> Self {
        Self { amps: [ZERO, ONE] }
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps[0].norm_sqr() + self.amps[1].norm_sqr()
    }

    /// Complex conjugate of the amplitudes.
    pub fn conj(&self) -> Self {
        Self {
            amps: [self.amps[0].conj(), self.amps[1].conj()],
        }
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amps[0].conj() * other.amps[0] + self.amps[1].conj() * other.amps[1]
    }
}

/// Point on the Bloch sphere: cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩.
///
/// θ is reduced modulo 2π; values in (π, 2π) are reflected to 2π − θ with
/// φ advanced by π, which changes the result only by a global phase. φ is
/// reduced modulo 2π. Non-finite angles yield an error.
pub fn bloch_state(theta: f64, phi: f64) -> Result<PureState> {
    if !theta.is_finite() || !phi.is_finite() {
        return Err(Error::Invariant(format!(
            "Bloch angles must be finite, got θ={theta}, φ={phi}"
        )));
    }
    let mut theta = theta.rem_euclid(TAU);
    let mut phi = phi;
    if theta > PI {
        theta = TAU - theta;
        phi += PI;
    }
    let phi = phi.rem_euclid(TAU);
    let half = 0.5 * theta;
    Ok(PureState {
        amps: [C64::new(half.cos(), 0.0), C64::from_polar(half.sin(), phi)],
    })
}

/// A 2×2 unitary gate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Unitary2 {
    m: Mat2,
}

impl Unitary2 {
    /// Validates U†U = I within [`UNITARY_TOL`].
    pub fn new(m: Mat2) -> Result<Self> {
        let u = Self { m };
        let defect = u.unitarity_defect();
        if !defect.is_finite() || defect > UNITARY_TOL {
            return Err(Error::Invariant(format!(
                "matrix is not unitary: max |U†U − I| = {defect:e}"
            )));
        }
        Ok(u)
    }

    pub(crate) fn from_raw(m: Mat2) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        Self { m: identity() }
    }

    pub fn matrix(&self) -> Mat2 {
        self.m
    }

    pub fn dagger(&self) -> Self {
        Self { m: dagger(&self.m) }
    }

    /// max |U†U − I| over entries.
    pub fn unitarity_defect(&self) -> f64 {
        max_abs_diff(&mat_mul(&dagger(&self.m), &self.m), &identity())
    }

    /// |tr(A†B)/2|², which is 1 exactly when the gates agree up to a global
    /// phase.
    pub fn phase_insensitive_overlap(&self, other: &Unitary2) -> f64 {
        (trace(&mat_mul(&dagger(&self.m), &other.m)) * 0.5).norm_sqr()
    }

    /// Average state fidelity over the Haar measure, (2·overlap + 1) / 3.
    pub fn average_gate_fidelity(&self, other: &Unitary2) -> f64 {
        (2.0 * self.phase_insensitive_overlap(other) + 1.0) / 3.0
    }

    fn act(&self, state: &PureState) -> PureState {
        let [a0, a1] = state.amps;
        PureState {
            amps: [
                self.m[0][0] * a0 + self.m[0][1] * a1,
                self.m[1][0] * a0 + self.m[1][1] * a1,
            ],
        }
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;

    fn mul(self, rhs: Unitary2) -> Unitary2 {
        Unitary2 {
            m: mat_mul(&self.m, &rhs.m),
        }
    }
}

impl fmt::Display for Unitary2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.m {
            writeln!(
                f,
                "[{:+.6}{:+.6}i  {:+.6}{:+.6}i]",
                row[0].re, row[0].im, row[1].re, row[1].im
            )?;
        }
        Ok(())
    }
}

pub fn gate_id() -> Unitary2 {
    Unitary2::identity()
}

pub fn gate_h() -> Unitary2 {
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    Unitary2::from_raw([[s, s], [s, -s]])
}

pub fn gate_x() -> Unitary2 {
    Unitary2::from_raw([[ZERO, ONE], [ONE, ZERO]])
}

/// √X as (1/2)[[1+i, 1−i], [1−i, 1+i]].
pub fn gate_sx() -> Unitary2 {
    let p = C64::new(0.5, 0.5);
    let m = C64::new(0.5, -0.5);
    Unitary2::from_raw([[p, m], [m, p]])
}

pub fn gate_rx(angle: f64) -> Unitary2 {
    let (s, c) = (0.5 * angle).sin_cos();
    let c = C64::new(c, 0.0);
    let ms = C64::new(0.0, -s);
    Unitary2::from_raw([[c, ms], [ms, c]])
}

pub fn gate_ry(angle: f64) -> Unitary2 {
    let (s, c) = (0.5 * angle).sin_cos();
    Unitary2::from_raw([
        [C64::new(c, 0.0), C64::new(-s, 0.0)],
        [C64::new(s, 0.0), C64::new(c, 0.0)],
    ])
}

pub fn gate_rz(angle: f64) -> Unitary2 {
    let half = 0.5 * angle;
    Unitary2::from_raw([[C64::from_polar(1.0, -half), ZERO], [ZERO, C64::from_polar(1.0, half)]])
}

/// Phase gate S, taken as Rz(π/2) (equal to diag(1, i) up to global phase).
pub fn gate_s() -> Unitary2 {
    gate_rz(0.5 * PI)
}

/// General single-qubit gate
/// [[cos(ϑ/2), −e^{iλ} sin(ϑ/2)], [e^{iχ} sin(ϑ/2), e^{i(χ+λ)} cos(ϑ/2)]].
///
/// `gate_u(π/2, 0, π)` is the Hadamard. With ϑ = 0 the gate is
/// diag(1, e^{i(χ+λ)}), i.e. Rz(χ + λ) up to global phase.
pub fn gate_u(dtheta: f64, dchi: f64, dlambda: f64) -> Unitary2 {
    let (s, c) = (0.5 * dtheta).sin_cos();
    Unitary2::from_raw([
        [C64::new(c, 0.0), -C64::from_polar(s, dlambda)],
        [C64::from_polar(s, dchi), C64::from_polar(c, dchi + dlambda)],
    ])
}

/// Composite Ry(−w)·Rz(w)·Ry(w); the rightmost factor acts first.
pub fn three_rot(w: f64) -> Unitary2 {
    gate_ry(-w) * gate_rz(w) * gate_ry(w)
}

/// U·ψ. The input norm must be 1 within [`NORM_TOL`]; no renormalization is
/// performed.
pub fn apply(gate: &Unitary2, state: &PureState) -> Result<PureState> {
    let drift = (state.norm_sqr() - 1.0).abs();
    if !drift.is_finite() || drift > NORM_TOL {
        return Err(Error::Invariant(format!(
            "cannot apply a gate to a state with norm² drift {drift:e}"
        )));
    }
    Ok(gate.act(state))
}

/// A single-qubit density matrix: Hermitian, unit trace, PSD.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix {
    m: Mat2,
}

impl DensityMatrix {
    pub fn new(m: Mat2) -> Result<Self> {
        let herm = hermiticity_defect(&m);
        if !herm.is_finite() || herm > DENSITY_TOL {
            return Err(Error::Invariant(format!(
                "density matrix is not Hermitian (defect {herm:e})"
            )));
        }
        let tr = trace(&m);
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::Invariant(format!("density matrix trace is {tr}, expected 1")));
        }
        let (low, _) = hermitian_eigenvalues(&m);
        if low < -EIGEN_DUST {
            return Err(Error::Invariant(format!(
                "density matrix has negative eigenvalue {low:e}"
            )));
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> Mat2 {
        self.m
    }

    pub fn trace(&self) -> f64 {
        trace(&self.m).re
    }

    /// tr(ρ²)
    pub fn purity(&self) -> f64 {
        trace(&mat_mul(&self.m, &self.m)).re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        hermitian_eigenvalues(&self.m)
    }
}

/// |ψ⟩⟨ψ|
pub fn density_of(state: &PureState) -> DensityMatrix {
    let [a0, a1] = state.amps;
    let off = a0 * a1.conj();
    DensityMatrix {
        m: [
            [C64::new(a0.norm_sqr(), 0.0), off],
            [off.conj(), C64::new(a1.norm_sqr(), 0.0)],
        ],
    }
}

/// Principal square root of a Hermitian PSD 2×2 matrix.
///
/// Uses the closed-form spectrum: with eigenvalues λ± (negative dust below
/// [`EIGEN_DUST`] clamped to zero), √M = (M + √(λ₊λ₋)·I) / (√λ₊ + √λ₋).
pub fn matrix_sqrt_psd(m: &Mat2) -> Result<Mat2> {
    let herm = hermiticity_defect(m);
    if !herm.is_finite() || herm > 1e-10 {
        return Err(Error::Invariant(format!(
            "matrix square root needs a Hermitian input (defect {herm:e})"
        )));
    }
    let (low, high) = hermitian_eigenvalues(m);
    if low < -EIGEN_DUST {
        return Err(Error::Invariant(format!(
            "matrix square root needs a PSD input (eigenvalue {low:e})"
        )));
    }
    let (r_low, r_high) = (low.max(0.0).sqrt(), high.max(0.0).sqrt());
    let denom = r_low + r_high;
    if denom == 0.0 {
        return Ok([[ZERO; 2]; 2]);
    }
    let shift = C64::new(r_low * r_high, 0.0);
    // Symmetrize so the result is exactly Hermitian.
    let d0 = C64::new((m[0][0].re + shift.re) / denom, 0.0);
    let d1 = C64::new((m[1][1].re + shift.re) / denom, 0.0);
    let off = 0.5 * (m[0][1] + m[1][0].conj()) / denom;
    Ok([[d0, off], [off.conj(), d1]])
}

/// Uhlmann fidelity F(ρ, σ) = (tr √(√ρ σ √ρ))².
///
/// The inner trace is evaluated from the spectrum of M = √ρ σ √ρ using
/// tr √M = √(tr M + 2√det M) with det M = det ρ · det σ, which keeps
/// near-pure inputs free of square-root dust. The result is clamped into
/// [0, 1]; an overshoot beyond [`FIDELITY_OVERSHOOT`] is an error.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    let sqrt_rho = matrix_sqrt_psd(&rho.m)?;
    let inner = mat_mul(&mat_mul(&sqrt_rho, &sigma.m), &sqrt_rho);
    let tr_inner = trace(&inner).re.max(0.0);
    let det_inner = (det(&rho.m).re * det(&sigma.m).re).max(0.0);
    let f = tr_inner + 2.0 * det_inner.sqrt();
    if !f.is_finite() || f > 1.0 + FIDELITY_OVERSHOOT {
        return Err(Error::Invariant(format!(
            "fidelity {f} outside [0, 1]; inputs are not valid density matrices"
        )));
    }
    Ok(f.clamp(0.0, 1.0))
}

/// 1 − F(ρ, σ)
pub fn infidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(1.0 - fidelity(rho, sigma)?)
}

/// Computational-basis measurement probabilities (|a₀|², |a₁|²).
pub fn measure_probs(state: &PureState) -> (f64, f64) {
    (state.amps[0].norm_sqr(), state.amps[1].norm_sqr())
}
