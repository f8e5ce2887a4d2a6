// Copyright 2026 Pulseforge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Pulse-level single-qubit gate synthesis.
//!
//! A microwave-driven two-level qubit is simulated from a sampled DRAG
//! pulse, and the pulse's six parameters are trained by gradient descent
//! so that the driven evolution reproduces a target unitary on a set of
//! random Bloch-sphere inputs.
//!
//! * [`quantum`]: states, gates, density matrices and the Uhlmann fidelity.
//! * [`pulse`]: the DRAG parameterization and drive-channel sampling.
//! * [`device`]: Schrödinger-equation integration and frequency sweeps.
//! * [`trainer`]: datasets, the infidelity loss, gradients and the epoch
//!   loop.

pub mod device;
pub mod error;
pub mod pulse;
pub mod quantum;
pub mod trainer;

pub use error::{Error, Result};
