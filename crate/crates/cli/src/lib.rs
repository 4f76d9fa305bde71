//! Command layer over `quench-core`: deterministic parameter sweeps with
//! CSV output, derivative-based critical-line detection, work-distribution
//! emission, and the verification suite runner.
//!
//! Output is bit-reproducible: grid points are evaluated by a worker pool
//! but buffered and written in grid order, and every float is printed with
//! 17 significant digits, so the same configuration yields the same bytes
//! for any worker count.

pub mod config;
pub mod critical;
pub mod csv_out;
pub mod pdf;
pub mod sweep;
pub mod verify;

use std::fmt;

/// Process exit codes: 0 success, 1 verification failure, 2 configuration
/// error, 3 numeric error.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(std::io::Error),
    Numeric(quench_core::Error),
    VerifyFailed,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::VerifyFailed => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Numeric(e) => match e {
                // bad requests rather than runtime numerics
                quench_core::Error::ExactTooLarge { .. }
                | quench_core::Error::BadSampleCount(_)
                | quench_core::Error::InvalidLength(_)
                | quench_core::Error::InvalidAnisotropy(_)
                | quench_core::Error::InvalidDmStrength(_)
                | quench_core::Error::InvalidField(_)
                | quench_core::Error::InvalidBeta(_) => 2,
                _ => 3,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
            CliError::Numeric(e) => write!(f, "{e}"),
            CliError::VerifyFailed => write!(f, "verification failed"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<quench_core::Error> for CliError {
    fn from(e: quench_core::Error) -> Self {
        CliError::Numeric(e)
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Builds a rayon pool with `workers` threads (0 = available parallelism).
pub fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    let n = if workers == 0 {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    } else {
        workers
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| CliError::Config(format!("cannot build worker pool: {e}")))
}
