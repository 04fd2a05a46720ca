//! Command implementations behind the `adlv` binary.
//!
//! Every command returns an [`Outcome`]: the document to emit and the exit
//! code. Errors carry their own exit code.

use std::io::Write;

use adlv_core::Error;

pub mod check;
pub mod config;
pub mod crosscheck;
pub mod enumerate;
pub mod render;

pub use check::{cmd_bgx, cmd_check};
pub use config::{Format, KappaSpec, Overrides, RunConfig};
pub use crosscheck::{cmd_crosscheck, Faults};
pub use enumerate::cmd_enumerate;
pub use render::cmd_render;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_GEOMETRY: i32 = 4;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn cap(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_CAP,
            message: message.into(),
        }
    }

    pub fn geometry(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_GEOMETRY,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } => EXIT_CAP,
            Error::Internal(_) | Error::Undefined(_) => EXIT_PROPERTY,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub document: String,
    pub code: i32,
}

impl Outcome {
    fn ok(document: String) -> Self {
        Outcome {
            document,
            code: EXIT_OK,
        }
    }

    fn with_failures(document: String, failed: bool) -> Self {
        Outcome {
            document,
            code: if failed { EXIT_PROPERTY } else { EXIT_OK },
        }
    }
}

pub(crate) fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("records serialize");
    s.push('\n');
    s
}

pub(crate) fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::usage(format!("cannot start {jobs} workers: {e}")))
}

/// Writes the document to `--out` if given, else to stdout.
pub fn emit(cfg: &RunConfig, document: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, document).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
        }
        None => std::io::stdout()
            .write_all(document.as_bytes())
            .map_err(|e| CliError::usage(format!("cannot write output: {e}"))),
    }
}
