//! Command-line front end.
//!
//! Every subcommand writing to `--out FILE` also writes `FILE.manifest.json`
//! holding the resolved arguments, seeds and input digests; `replay` reruns a
//! manifest and reproduces the outputs byte for byte.
//!
//! Exit codes: 0 success, 1 I/O, 2 parse, 3 configuration, 4 degenerate input.

pub mod bench;
pub mod gen;
pub mod io;
pub mod inn;
pub mod landmarks;
pub mod manifest;
pub mod sweep;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::ComplexError;
use crate::evalmetrics::EvalError;
use crate::landmark::{CoverError, LandmarkError};
use crate::space::SpaceError;
use crate::synth::SynthError;

pub use bench::BenchArgs;
pub use gen::{GenArgs, Generator};
pub use inn::{InnArgs, ValidationPlan};
pub use landmarks::LandmarksArgs;
pub use sweep::SweepArgs;

/// Environment variable fixing the worker thread count.
pub const THREADS_ENV: &str = "LASTFIRST_THREADS";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Degenerate(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Config(_) => 3,
            CliError::Degenerate(_) => 4,
        }
    }
}

impl From<SpaceError> for CliError {
    fn from(e: SpaceError) -> Self {
        let msg = e.to_string();
        match e {
            SpaceError::EmptyInput | SpaceError::ZeroVector { .. } | SpaceError::ZeroRange { .. } => {
                CliError::Degenerate(msg)
            }
            SpaceError::InvalidTolerance => CliError::Config(msg),
            _ => CliError::Parse(msg),
        }
    }
}

impl From<LandmarkError> for CliError {
    fn from(e: LandmarkError) -> Self {
        match e {
            LandmarkError::Config(c) => CliError::Config(c.to_string()),
            LandmarkError::Space(s) => s.into(),
            other => CliError::Degenerate(other.to_string()),
        }
    }
}

impl From<CoverError> for CliError {
    fn from(e: CoverError) -> Self {
        match e {
            CoverError::Landmark(l) => l.into(),
            CoverError::InvalidExtension { .. } => CliError::Config(e.to_string()),
            other => CliError::Degenerate(other.to_string()),
        }
    }
}

impl From<ComplexError> for CliError {
    fn from(e: ComplexError) -> Self {
        match e {
            ComplexError::Landmark(l) => l.into(),
            ComplexError::Cover(c) => c.into(),
            ComplexError::InvalidDimCap
            | ComplexError::InsufficientDimCap { .. }
            | ComplexError::InvalidSweepRange { .. } => CliError::Config(e.to_string()),
            other => CliError::Degenerate(other.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::Landmark(l) => l.into(),
            EvalError::Space(s) => s.into(),
            EvalError::LengthMismatch { .. } | EvalError::InvalidOutcome { .. } => CliError::Parse(e.to_string()),
            EvalError::InvalidBandwidth(_)
            | EvalError::TooFewFolds(_)
            | EvalError::NoSchemes
            | EvalError::KOutOfRange { .. } => CliError::Config(e.to_string()),
            other => CliError::Degenerate(other.to_string()),
        }
    }
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "lastfirst", version, about = "Landmark sampling, covers, nerves and nearest-neighbor prediction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "kebab-case")]
pub enum Command {
    /// Generate a synthetic data set.
    Gen(GenArgs),
    /// Select landmarks and report the induced cover as JSON.
    Landmarks(LandmarksArgs),
    /// Landmark-count sweeps over a grid of bumpy-circle samples.
    Sweep(SweepArgs),
    /// Cross-validated nearest-neighbor prediction from landmarks.
    Inn(InnArgs),
    /// Time both samplers on generated data.
    Bench(BenchArgs),
    /// Rerun a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, PartialEq, clap::Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    /// Manifest written next to an earlier output.
    pub manifest: PathBuf,
    /// Write outputs into this directory instead of their recorded paths.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

/// What a command produced, for the manifest.
#[derive(Debug, Default)]
pub(crate) struct RunRecord {
    pub seeds: Vec<(String, u64)>,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
}

impl Command {
    /// Primary output file, which decides the manifest location.
    fn primary_output(&self) -> Option<&PathBuf> {
        match self {
            Command::Gen(a) => a.out.as_ref(),
            Command::Landmarks(a) => a.out.as_ref(),
            Command::Sweep(a) => a.out.as_ref(),
            Command::Inn(a) => a.out.as_ref(),
            Command::Bench(a) => a.out.as_ref(),
            Command::Replay(_) => None,
        }
    }

    pub(crate) fn execute(&self) -> Result<RunRecord, CliError> {
        match self {
            Command::Gen(a) => gen::run(a),
            Command::Landmarks(a) => landmarks::run(a),
            Command::Sweep(a) => sweep::run(a),
            Command::Inn(a) => inn::run(a),
            Command::Bench(a) => bench::run(a),
            Command::Replay(a) => manifest::replay(a),
        }
    }
}

/// Run a command and write its manifest when it has a file output.
pub fn dispatch(command: &Command) -> Result<(), CliError> {
    let record = command.execute()?;
    if let Some(out) = command.primary_output() {
        manifest::write(command, &record, out)?;
    }
    Ok(())
}

/// Parse arguments, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Size the global rayon pool from [`THREADS_ENV`] when set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{THREADS_ENV}=`{v}` is not a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

/// Parse `pi`, `pi/6`, `3pi/4`, `0.5pi` or a plain number.
pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase().replace(' ', "");
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.to_string(), b.parse::<f64>().map_err(|_| format!("bad angle `{s}`"))?),
        None => (t.clone(), 1.0),
    };
    let value = match num.strip_suffix("pi") {
        Some("") => std::f64::consts::PI,
        Some(c) => c.parse::<f64>().map_err(|_| format!("bad angle `{s}`"))? * std::f64::consts::PI,
        None => num.parse::<f64>().map_err(|_| format!("bad angle `{s}`"))?,
    };
    if den == 0.0 {
        return Err(format!("bad angle `{s}`"));
    }
    Ok(value / den)
}
