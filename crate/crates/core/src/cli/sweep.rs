//! Factorial grid of bumpy-circle landmark sweeps.

use std::path::PathBuf;

use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::io::{csv_bytes, emit, fmt_f64};
use super::{parse_angle, CliError, RunRecord};
use crate::complex::{dominance_range, sweep_prefixes, BettiVector, DominanceRange, SweepPlan, SweepRecord};
use crate::landmark::{landmarks, Procedure, SamplerConfig, SeedRule, TieRule};
use crate::space::DissimilaritySpace;
use crate::synth::{derive_seed, gen_bumpy_circle, BumpyCircleParams};

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SweepArgs {
    /// Sample sizes.
    #[arg(long, value_delimiter = ',', default_values = ["60"])]
    pub n: Vec<usize>,
    /// Weights of the uniform component.
    #[arg(long, value_delimiter = ',', default_values = ["0.05"])]
    pub w0: Vec<f64>,
    /// Angles of the second bump.
    #[arg(long, value_delimiter = ',', default_values = ["pi"], value_parser = parse_angle)]
    pub mu2: Vec<f64>,
    /// Bump standard deviations.
    #[arg(long, value_delimiter = ',', default_values = ["pi/6"], value_parser = parse_angle)]
    pub sigma: Vec<f64>,
    /// Weight ratios of the first bump to the second.
    #[arg(long, value_delimiter = ',', default_values = ["10"])]
    pub ratio: Vec<f64>,
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["maxmin", "lastfirst"])]
    pub procedures: Vec<Procedure>,
    /// Multiplicative extensions.
    #[arg(long, value_delimiter = ',', default_values = ["0"])]
    pub ext_mult: Vec<f64>,
    /// Additive extensions of ball radii (maxmin, random).
    #[arg(long, value_delimiter = ',', default_values = ["0"])]
    pub ext_add: Vec<f64>,
    /// Additive extensions of neighborhood cardinalities (lastfirst): a
    /// number or `n/D` for the sample size divided by `D`.
    #[arg(long, value_delimiter = ',', default_values = ["0"])]
    pub ext_add_rank: Vec<String>,
    #[arg(long, default_value_t = 20)]
    pub replicates: usize,
    /// Largest landmark count swept; half the sample size by default.
    #[arg(long)]
    pub m_max: Option<usize>,
    /// Betti numbers to detect.
    #[arg(long, default_value = "(1,1)")]
    pub target: BettiVector,
    /// Nerve simplices are kept up to this dimension.
    #[arg(long, default_value_t = 2)]
    pub dim_cap: usize,
    #[arg(long, value_enum, default_value_t = SeedRule::Random)]
    pub seed_rule: SeedRule,
    #[arg(long, value_enum, default_value_t = TieRule::FirstIndex)]
    pub tie_rule: TieRule,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Dominance CSV, one row per cell and replicate; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-landmark-count Betti numbers.
    #[arg(long)]
    pub detail: Option<PathBuf>,
}

impl Default for SweepArgs {
    fn default() -> Self {
        use clap::Parser;
        #[derive(Parser)]
        struct Wrap {
            #[command(flatten)]
            args: SweepArgs,
        }
        Wrap::parse_from(["sweep"]).args
    }
}

/// Data parameters shared by every procedure and extension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataCell {
    pub n: usize,
    pub w0: f64,
    pub mu2: f64,
    pub sigma: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub cell: DataCell,
    pub procedure: Procedure,
    pub ext_mult: f64,
    pub ext_add: f64,
    pub replicate: usize,
    pub m_max: usize,
    /// Longest matching run, or the error that stopped this row.
    pub dominance: Result<Option<DominanceRange>, String>,
    pub records: Vec<SweepRecord>,
}

impl GridRow {
    pub fn dominance_len(&self) -> usize {
        match &self.dominance {
            Ok(Some(r)) => r.len(),
            _ => 0,
        }
    }
}

/// Resolve an additive cardinality token for sample size `n`.
pub fn resolve_rank_add(token: &str, n: usize) -> Result<f64, CliError> {
    let t = token.trim();
    let bad = || CliError::Config(format!("bad additive extension `{token}`; use a number or n/D"));
    let v = match t.strip_prefix("n/") {
        Some(d) => {
            let d: f64 = d.parse().map_err(|_| bad())?;
            if !(d > 0.0) {
                return Err(bad());
            }
            n as f64 / d
        }
        None => t.parse().map_err(|_| bad())?,
    };
    if !(v >= 0.0) {
        return Err(bad());
    }
    Ok(v)
}

impl SweepArgs {
    pub fn cells(&self) -> Vec<DataCell> {
        let mut out = Vec::new();
        for &n in &self.n {
            for &w0 in &self.w0 {
                for &mu2 in &self.mu2 {
                    for &sigma in &self.sigma {
                        for &ratio in &self.ratio {
                            out.push(DataCell { n, w0, mu2, sigma, ratio });
                        }
                    }
                }
            }
        }
        out
    }

    fn additive(&self, procedure: Procedure, n: usize) -> Result<Vec<f64>, CliError> {
        match procedure {
            Procedure::Lastfirst => self.ext_add_rank.iter().map(|t| resolve_rank_add(t, n)).collect(),
            Procedure::Maxmin | Procedure::Random => Ok(self.ext_add.clone()),
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.replicates == 0 {
            return Err(CliError::Config("need at least one replicate".into()));
        }
        if self.dim_cap == 0 {
            return Err(CliError::Config("dimension cap must be at least 1".into()));
        }
        if self.target.values().len() > self.dim_cap {
            return Err(CliError::Config(format!(
                "target {} lists more dimensions than the cap {} allows",
                self.target, self.dim_cap
            )));
        }
        if self.m_max == Some(0) {
            return Err(CliError::Config("m_max must be positive".into()));
        }
        for (name, list) in [("n", self.n.is_empty()), ("procedures", self.procedures.is_empty())] {
            if list {
                return Err(CliError::Config(format!("--{name} is empty")));
            }
        }
        for &n in &self.n {
            for &p in &self.procedures {
                self.additive(p, n)?;
            }
        }
        Ok(())
    }
}

/// Rows for one data cell and replicate: every procedure and extension.
fn run_replicate(a: &SweepArgs, cell: &DataCell, cell_index: usize, r: usize) -> Result<Vec<GridRow>, CliError> {
    let base = derive_seed(a.rng_seed, cell_index as u64);
    let data_seed = derive_seed(base, 2 * r as u64);
    let landmark_seed = derive_seed(base, 2 * r as u64 + 1);
    let points = gen_bumpy_circle(&BumpyCircleParams {
        n: cell.n,
        w0: cell.w0,
        mu2: cell.mu2,
        sigma: cell.sigma,
        ratio: cell.ratio,
        rng_seed: data_seed,
    })?;
    let space = DissimilaritySpace::euclidean(&points)?;
    let m_max = a.m_max.unwrap_or(cell.n / 2).max(1);
    let mut rows = Vec::new();
    for &procedure in &a.procedures {
        let cfg = SamplerConfig::new(procedure)
            .with_num(m_max)
            .with_seed_rule(a.seed_rule)
            .with_tie_rule(a.tie_rule)
            .with_rng_seed(landmark_seed);
        let result = landmarks(&space, &cfg).map_err(|e| e.to_string());
        for &ext_mult in &a.ext_mult {
            for ext_add in a.additive(procedure, cell.n)? {
                let plan = SweepPlan::new(a.target.clone(), m_max)
                    .with_extension(ext_mult, ext_add)
                    .with_dim_cap(a.dim_cap);
                let swept = result
                    .as_ref()
                    .map_err(Clone::clone)
                    .and_then(|res| sweep_prefixes(&space, res, &plan, r).map_err(|e| e.to_string()));
                let (dominance, records) = match swept {
                    Ok(recs) => (Ok(dominance_range(&recs, &a.target)), recs),
                    Err(e) => (Err(e), Vec::new()),
                };
                rows.push(GridRow {
                    cell: *cell,
                    procedure,
                    ext_mult,
                    ext_add,
                    replicate: r,
                    m_max,
                    dominance,
                    records,
                });
            }
        }
    }
    Ok(rows)
}

/// Run the full grid. Rows are ordered by data cell, procedure, extensions,
/// then replicate, whatever order the work finishes in.
pub fn run_grid(a: &SweepArgs) -> Result<Vec<GridRow>, CliError> {
    a.validate()?;
    let cells = a.cells();
    let jobs: Vec<(usize, usize)> = (0..cells.len()).flat_map(|d| (0..a.replicates).map(move |r| (d, r))).collect();
    let per_job: Vec<Vec<GridRow>> = jobs
        .par_iter()
        .map(|&(d, r)| run_replicate(a, &cells[d], d, r))
        .collect::<Result<_, _>>()?;
    // within a job rows are already in procedure/extension order
    let per_job_len = per_job.first().map_or(0, Vec::len);
    let mut rows = Vec::with_capacity(per_job.len() * per_job_len);
    for d in 0..cells.len() {
        let block = &per_job[d * a.replicates..(d + 1) * a.replicates];
        let width = block[0].len();
        for slot in 0..width {
            for job in block {
                rows.push(job[slot].clone());
            }
        }
    }
    Ok(rows)
}

fn cell_fields(row: &GridRow) -> Vec<String> {
    let c = &row.cell;
    vec![
        c.n.to_string(),
        fmt_f64(c.w0),
        fmt_f64(c.mu2),
        fmt_f64(c.sigma),
        fmt_f64(c.ratio),
        row.procedure.to_string(),
        fmt_f64(row.ext_mult),
        fmt_f64(row.ext_add),
        row.replicate.to_string(),
    ]
}

const CELL_HEADER: [&str; 9] = ["n", "w0", "mu2", "sigma", "ratio", "procedure", "ext_mult", "ext_add", "replicate"];

pub fn dominance_csv(rows: &[GridRow]) -> Result<Vec<u8>, CliError> {
    let mut header = CELL_HEADER.to_vec();
    header.extend(["m_max", "start", "end", "length", "status"]);
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            let mut f = cell_fields(row);
            f.push(row.m_max.to_string());
            match &row.dominance {
                Ok(Some(d)) => f.extend([d.start.to_string(), d.end.to_string(), d.len().to_string(), "ok".into()]),
                Ok(None) => f.extend([String::new(), String::new(), "0".into(), "ok".into()]),
                Err(e) => f.extend([String::new(), String::new(), String::new(), format!("error: {e}")]),
            }
            f
        })
        .collect();
    csv_bytes(&header, &body)
}

pub fn detail_csv(rows: &[GridRow], dim_cap: usize) -> Result<Vec<u8>, CliError> {
    let mut header: Vec<String> = CELL_HEADER.iter().map(|s| s.to_string()).collect();
    header.push("m".into());
    // always at least beta0..beta2 so files from different caps line up
    let dims = dim_cap.max(3);
    header.extend((0..dims).map(|d| format!("beta{d}")));
    header.push("covered".into());
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut body = Vec::new();
    for row in rows {
        for rec in &row.records {
            let mut f = cell_fields(row);
            f.push(rec.m.to_string());
            f.extend((0..dims).map(|d| rec.betti.get(d).map_or_else(String::new, |b| b.to_string())));
            f.push(rec.covered.to_string());
            body.push(f);
        }
    }
    csv_bytes(&header, &body)
}

pub(crate) fn run(a: &SweepArgs) -> Result<RunRecord, CliError> {
    let rows = run_grid(a)?;
    emit(a.out.as_deref(), &dominance_csv(&rows)?)?;
    let mut outputs: Vec<PathBuf> = a.out.iter().cloned().collect();
    if let Some(p) = &a.detail {
        emit(Some(p), &detail_csv(&rows, a.dim_cap)?)?;
        outputs.push(p.clone());
    }
    for chunk in rows.chunks(a.replicates) {
        let lens: Vec<usize> = chunk.iter().map(GridRow::dominance_len).collect();
        let detected = chunk.iter().filter(|r| matches!(r.dominance, Ok(Some(_)))).count();
        let failed = chunk.iter().filter(|r| r.dominance.is_err()).count();
        let r = &chunk[0];
        eprintln!(
            "n={} w0={} mu2={:.4} sigma={:.4} ratio={} {} ext=({}, {}): median dominance {}, detected {}/{}{}",
            r.cell.n,
            r.cell.w0,
            r.cell.mu2,
            r.cell.sigma,
            r.cell.ratio,
            r.procedure,
            r.ext_mult,
            r.ext_add,
            crate::complex::median_length(&lens),
            detected,
            chunk.len(),
            if failed > 0 { format!(", {failed} failed") } else { String::new() },
        );
    }
    Ok(RunRecord { seeds: vec![("grid".into(), a.rng_seed)], inputs: Vec::new(), outputs })
}
