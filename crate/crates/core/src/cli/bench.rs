use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use super::io::{csv_bytes, emit, fmt_f64};
use super::{CliError, RunRecord};
use crate::bench::measure_with_timeout;
use crate::landmark::{landmarks, Procedure, SamplerConfig, SeedRule};
use crate::space::DissimilaritySpace;
use crate::synth::{
    derive_seed, gen_bumpy_circle, gen_duplicated_lattice, gen_noisy_circle, gen_sphere, BumpyCircleParams, Points,
    SphereSampleParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum BenchData {
    NoisyCircle,
    Sphere,
    Lattice,
    BumpyCircle,
}

impl BenchData {
    fn name(self) -> &'static str {
        match self {
            BenchData::NoisyCircle => "noisy-circle",
            BenchData::Sphere => "sphere",
            BenchData::Lattice => "lattice",
            BenchData::BumpyCircle => "bumpy-circle",
        }
    }

    fn generate(self, n: usize, seed: u64) -> Result<Points, CliError> {
        Ok(match self {
            BenchData::NoisyCircle => gen_noisy_circle(n, 0.1, seed)?,
            BenchData::Sphere => gen_sphere(&SphereSampleParams { n, rng_seed: seed, ..Default::default() })?,
            BenchData::Lattice => gen_duplicated_lattice(n, seed),
            BenchData::BumpyCircle => gen_bumpy_circle(&BumpyCircleParams { n, rng_seed: seed, ..Default::default() })?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = BenchData::NoisyCircle)]
    pub generator: BenchData,
    /// Sample sizes, ascending.
    #[arg(long, value_delimiter = ',', default_values = ["250", "500", "1000"])]
    pub sizes: Vec<usize>,
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["maxmin", "lastfirst"])]
    pub procedures: Vec<Procedure>,
    /// Timed repeats per cell, after one untimed warm-up.
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    /// Landmarks per run; exhaustive when absent.
    #[arg(long)]
    pub num: Option<usize>,
    /// Seconds before a run is abandoned; larger sizes of that procedure are skipped.
    #[arg(long, default_value_t = 3600.0)]
    pub timeout: f64,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Timing CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub generator: BenchData,
    pub n: usize,
    pub procedure: Procedure,
    pub repeat: usize,
    pub seconds: Option<f64>,
    pub peak_bytes: Option<usize>,
    pub status: &'static str,
}

fn one_run(points: &Arc<Points>, cfg: &SamplerConfig, timeout: Duration) -> Result<Option<(f64, Option<usize>)>, CliError> {
    // a fresh space per run so cached rank rows are not reused
    let space = DissimilaritySpace::euclidean(points.as_slice())?;
    let cfg = cfg.clone();
    match measure_with_timeout(timeout, move || landmarks(&space, &cfg).map(|r| r.len())) {
        None => Ok(None),
        Some((res, m)) => {
            res?;
            Ok(Some((m.seconds, m.peak_bytes)))
        }
    }
}

/// Run every (size, procedure) cell; rows ordered by size, procedure, repeat.
pub fn run_bench(a: &BenchArgs) -> Result<Vec<BenchRow>, CliError> {
    if a.sizes.windows(2).any(|w| w[0] > w[1]) {
        return Err(CliError::Config("--sizes must be ascending".into()));
    }
    if a.repeats == 0 {
        return Err(CliError::Config("need at least one repeat".into()));
    }
    if !(a.timeout > 0.0 && a.timeout.is_finite()) {
        return Err(CliError::Config(format!("timeout must be positive, got {}", a.timeout)));
    }
    let timeout = Duration::from_secs_f64(a.timeout);
    let mut timed_out = vec![false; a.procedures.len()];
    let mut rows = Vec::new();
    for (si, &n) in a.sizes.iter().enumerate() {
        let points = Arc::new(a.generator.generate(n, derive_seed(a.rng_seed, si as u64))?);
        for (pi, &procedure) in a.procedures.iter().enumerate() {
            let mut cfg = SamplerConfig::new(procedure)
                .with_seed_rule(SeedRule::FirstIndex)
                .with_rng_seed(a.rng_seed);
            cfg.num_landmarks = Some(a.num.unwrap_or(usize::MAX));
            let mut status = if timed_out[pi] { "skipped" } else { "ok" };
            if status == "ok" && one_run(&points, &cfg, timeout)?.is_none() {
                status = "timeout";
            }
            for repeat in 0..a.repeats {
                let measured = if status == "ok" { one_run(&points, &cfg, timeout)? } else { None };
                if status == "ok" && measured.is_none() {
                    status = "timeout";
                }
                rows.push(BenchRow {
                    generator: a.generator,
                    n,
                    procedure,
                    repeat,
                    seconds: measured.map(|m| m.0),
                    peak_bytes: measured.and_then(|m| m.1),
                    status: if measured.is_some() { "ok" } else { status },
                });
            }
            timed_out[pi] |= status != "ok";
        }
    }
    Ok(rows)
}

/// Median seconds per procedure at size `n`, over completed repeats.
pub fn median_seconds(rows: &[BenchRow], n: usize, procedure: Procedure) -> Option<f64> {
    let mut t: Vec<f64> =
        rows.iter().filter(|r| r.n == n && r.procedure == procedure).filter_map(|r| r.seconds).collect();
    if t.is_empty() {
        return None;
    }
    t.sort_unstable_by(f64::total_cmp);
    let h = t.len() / 2;
    Some(if t.len() % 2 == 1 { t[h] } else { (t[h - 1] + t[h]) / 2.0 })
}

pub fn bench_csv(rows: &[BenchRow]) -> Result<Vec<u8>, CliError> {
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.generator.name().to_string(),
                r.n.to_string(),
                r.procedure.to_string(),
                r.repeat.to_string(),
                r.seconds.map_or_else(String::new, fmt_f64),
                r.peak_bytes.map_or_else(String::new, |b| b.to_string()),
                r.status.to_string(),
            ]
        })
        .collect();
    csv_bytes(&["generator", "n", "procedure", "repeat", "seconds", "peak_bytes", "status"], &body)
}

pub(crate) fn run(a: &BenchArgs) -> Result<RunRecord, CliError> {
    let rows = run_bench(a)?;
    emit(a.out.as_deref(), &bench_csv(&rows)?)?;
    for &n in &a.sizes {
        let mm = median_seconds(&rows, n, Procedure::Maxmin);
        let lf = median_seconds(&rows, n, Procedure::Lastfirst);
        if let (Some(mm), Some(lf)) = (mm, lf) {
            eprintln!("n={n}: median maxmin {mm:.4}s, lastfirst {lf:.4}s, ratio {:.2}", lf / mm);
        }
    }
    Ok(RunRecord { seeds: vec![("data".into(), a.rng_seed)], inputs: Vec::new(), outputs: a.out.iter().cloned().collect() })
}
