// Copyright 2026 Pulseforge Contributors
// SPDX-License-Identifier: Apache-2.0

//! Reproducible pulse-training experiments: configuration files, the four
//! workbench commands, and the readers and writers for their artifacts.
//!
//! Exit codes are a stable contract: 0 success, 1 usage or validation
//! error, 2 numerical failure.

use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub mod artifacts;
pub mod commands;
pub mod config;
mod table;

pub use table::render_table;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent configuration.
    #[error("{0}")]
    Spec(String),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },

    #[error(transparent)]
    Core(#[from] pulseforge_core::Error),

    /// A run completed but missed its quality target.
    #[error("{0}")]
    Numerical(String),
}

impl Error {
    pub fn io(path: &Path, source: io::Error) -> Self {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        use pulseforge_core::Error as Core;
        match self {
            Error::Spec(_) | Error::Io { .. } => 1,
            Error::Core(
                Core::Config(_) | Core::Invariant(_) | Core::IndexOutOfRange { .. } | Core::AmplitudeCap { .. },
            ) => 1,
            Error::Core(_) | Error::Numerical(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
