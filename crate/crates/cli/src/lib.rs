//! Experiment orchestration for the steganalysis toolkit.
//!
//! Three subcommands, each driven by a plain-text `key=value` config with
//! command-line overrides:
//!
//! * `bench` — optimizer comparisons on the benchmark functions, with
//!   convergence traces, box-plot statistics and a rank-sum comparison;
//! * `corpus` — synthesize a cover/stego PPM corpus plus its manifest;
//! * `steg` — run the full detection pipeline over a corpus manifest.
//!
//! Every run writes a resolved-config snapshot (`resolved.cfg`) next to its
//! outputs; re-running a command from that snapshot reproduces every output
//! byte for byte.

pub mod commands;
pub mod config;
pub mod csvout;

/// Failures split by exit code: configuration problems exit 2, runtime
/// problems exit 1.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Runtime(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Runtime(msg) => write!(f, "runtime error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<stegwolf_core::Error> for CliError {
    fn from(e: stegwolf_core::Error) -> Self {
        match e {
            stegwolf_core::Error::InvalidParameter(msg) => CliError::Config(msg),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
