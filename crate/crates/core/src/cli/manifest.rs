//! Run manifests: enough to rerun a command and check its inputs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::io::{read_text, sha256_file};
use super::{CliError, Command, ReplayArgs, RunRecord};

pub const TOOL: &str = "lastfirst";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    #[serde(flatten)]
    pub command: Command,
    pub seeds: BTreeMap<String, u64>,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<PathBuf>,
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

pub(crate) fn write(command: &Command, record: &RunRecord, out: &Path) -> Result<(), CliError> {
    let inputs = record
        .inputs
        .iter()
        .map(|p| Ok(InputDigest { path: p.clone(), sha256: sha256_file(p)? }))
        .collect::<Result<Vec<_>, CliError>>()?;
    let manifest = RunManifest {
        tool: TOOL.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: command.clone(),
        seeds: record.seeds.iter().cloned().collect(),
        inputs,
        outputs: record.outputs.clone(),
    };
    let mut json = serde_json::to_vec_pretty(&manifest).map_err(|e| CliError::Io(e.to_string()))?;
    json.push(b'\n');
    let path = manifest_path(out);
    std::fs::write(&path, json).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn read(path: &Path) -> Result<RunManifest, CliError> {
    let m: RunManifest = serde_json::from_str(&read_text(path)?)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    if m.tool != TOOL {
        return Err(CliError::Parse(format!("manifest was written by `{}`", m.tool)));
    }
    Ok(m)
}

fn relocate(p: &Option<PathBuf>, dir: &Path) -> Option<PathBuf> {
    p.as_ref().map(|p| dir.join(p.file_name().unwrap_or(p.as_os_str())))
}

/// The recorded command with its outputs moved into `dir`.
fn redirect(command: &Command, dir: &Path) -> Command {
    let mut c = command.clone();
    match &mut c {
        Command::Gen(a) => {
            a.out = relocate(&a.out, dir);
            a.outcomes_out = relocate(&a.outcomes_out, dir);
        }
        Command::Landmarks(a) => a.out = relocate(&a.out, dir),
        Command::Sweep(a) => {
            a.out = relocate(&a.out, dir);
            a.detail = relocate(&a.detail, dir);
        }
        Command::Inn(a) => a.out = relocate(&a.out, dir),
        Command::Bench(a) => a.out = relocate(&a.out, dir),
        Command::Replay(_) => {}
    }
    c
}

pub(crate) fn replay(args: &ReplayArgs) -> Result<RunRecord, CliError> {
    let m = read(&args.manifest)?;
    for input in &m.inputs {
        let now = sha256_file(&input.path)?;
        if now != input.sha256 {
            return Err(CliError::Config(format!("input {} changed since the manifest was written", input.path.display())));
        }
    }
    if matches!(m.command, Command::Replay(_)) {
        return Err(CliError::Parse("a manifest cannot record a replay".into()));
    }
    let command = match &args.out_dir {
        Some(dir) => redirect(&m.command, dir),
        None => m.command.clone(),
    };
    super::dispatch(&command)?;
    Ok(RunRecord::default())
}
