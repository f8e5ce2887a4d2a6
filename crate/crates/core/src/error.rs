// Copyright 2026 Pulseforge Contributors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the simulation and training layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A value failed one of its type invariants (norm, hermiticity, trace,
    /// positivity, unitarity).
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// A drive sample would exceed unit magnitude.
    #[error("pulse magnitude {peak:.6} exceeds the unit amplitude cap")]
    AmplitudeCap { peak: f64 },

    #[error("sample index {index} out of range for a schedule of {len} samples")]
    IndexOutOfRange { index: usize, len: usize },

    /// The integrator lost more norm than allowed; the caller should raise
    /// `substeps`.
    #[error("integration norm drift {drift:e} exceeds limit {limit:e}; raise substeps")]
    IntegrationAccuracy { drift: f64, limit: f64 },

    #[error("non-finite loss while probing parameter `{param}`")]
    GradientEvaluation { param: &'static str },

    #[error("training diverged at epoch {epoch}: loss {loss:e} stayed above 10x the initial {initial:e}")]
    Divergence { epoch: usize, loss: f64, initial: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
