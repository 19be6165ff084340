use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use super::io::{csv_bytes, emit, fmt_f64, input_files, load_space, parse_outcomes, read_text, SpaceArgs};
use super::{CliError, RunRecord};
use crate::evalmetrics::{nested_cv, temporal_cv, CvPlan, WeightKind, WeightingScheme};
use crate::landmark::{Procedure, SamplerConfig, SeedRule, TieRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ValidationPlan {
    /// Outer folds for evaluation, inner folds for tuning.
    Nested,
    /// Fit on each period, evaluate on parts of the next.
    Temporal,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct InnArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    /// CSV with header `point_id,outcome[,period]`.
    #[arg(long)]
    pub outcomes: PathBuf,
    #[arg(long, value_enum, default_value_t = ValidationPlan::Nested)]
    pub plan: ValidationPlan,
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["random", "maxmin", "lastfirst"])]
    pub procedures: Vec<Procedure>,
    #[arg(long, value_delimiter = ',', default_values = ["36"])]
    pub landmark_counts: Vec<usize>,
    /// Weighting schemes tried during nested tuning.
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["inverse-distance", "triangle", "gaussian", "rank"])]
    pub schemes: Vec<WeightKind>,
    /// Largest neighborhood size tuned over; 180 or the smallest training
    /// set, whichever is less.
    #[arg(long)]
    pub neighborhood_size: Option<usize>,
    /// Outer folds (nested) or parts per period (temporal).
    #[arg(long, default_value_t = 6)]
    pub outer_folds: usize,
    #[arg(long, default_value_t = 6)]
    pub inner_folds: usize,
    #[arg(long, value_enum, default_value_t = SeedRule::Chebyshev)]
    pub seed_rule: SeedRule,
    #[arg(long, value_enum, default_value_t = TieRule::FirstIndex)]
    pub tie_rule: TieRule,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// AUROC CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

const DEFAULT_NEIGHBORHOOD: usize = 180;

/// Smallest training set of nested folds over `n` points.
fn nested_min_train(n: usize, outer: usize, inner: usize) -> usize {
    let rest = n - n.div_ceil(outer);
    rest - rest.div_ceil(inner)
}

pub(crate) fn run(a: &InnArgs) -> Result<RunRecord, CliError> {
    let space = load_space(&a.space)?;
    let table = parse_outcomes(&read_text(&a.outcomes)?, space.len())?;
    if a.outer_folds < 2 || (a.plan == ValidationPlan::Nested && a.inner_folds < 2) {
        return Err(CliError::Config("need at least 2 folds".into()));
    }
    let periods = match (a.plan, &table.periods) {
        (ValidationPlan::Temporal, None) => {
            return Err(CliError::Config("the temporal plan needs a period column in the outcomes".into()))
        }
        (_, p) => p.clone(),
    };
    let min_train = match (a.plan, &periods) {
        (ValidationPlan::Temporal, Some(p)) => {
            let n_periods = table.period_labels.len();
            (0..n_periods.saturating_sub(1)).map(|t| p.iter().filter(|&&q| q == t).count()).min().unwrap_or(0)
        }
        _ => nested_min_train(space.len(), a.outer_folds, a.inner_folds),
    };
    let k = a.neighborhood_size.unwrap_or(DEFAULT_NEIGHBORHOOD.min(min_train)).max(1);
    let plan = CvPlan::default()
        .with_folds(a.outer_folds, a.inner_folds)
        .with_neighborhood_size(k)
        .with_rng_seed(a.rng_seed);
    let schemes: Vec<WeightingScheme> = a.schemes.iter().map(|&s| WeightingScheme::new(s)).collect();
    let mut rows = Vec::new();
    for &procedure in &a.procedures {
        let cfg = SamplerConfig::new(procedure)
            .with_seed_rule(a.seed_rule)
            .with_tie_rule(a.tie_rule)
            .with_rng_seed(a.rng_seed);
        match a.plan {
            ValidationPlan::Nested => {
                for r in nested_cv(&space, &table.outcomes, &cfg, &plan, &a.landmark_counts, &schemes)? {
                    rows.push(vec![
                        r.procedure.to_string(),
                        r.n_landmarks.to_string(),
                        r.scheme.name().to_string(),
                        r.k.to_string(),
                        r.fold_outer.to_string(),
                        r.fold_inner.to_string(),
                        fmt_f64(r.auroc),
                    ]);
                }
            }
            ValidationPlan::Temporal => {
                let p = periods.as_deref().unwrap_or_default();
                for r in temporal_cv(&space, &table.outcomes, p, &cfg, &plan, &a.landmark_counts)? {
                    rows.push(vec![
                        r.procedure.to_string(),
                        r.n_landmarks.to_string(),
                        table.period_labels[r.period].clone(),
                        r.part.to_string(),
                        r.k.to_string(),
                        fmt_f64(r.auroc),
                    ]);
                }
            }
        }
    }
    let header: &[&str] = match a.plan {
        ValidationPlan::Nested => &["procedure", "n_landmarks", "scheme", "k", "fold_outer", "fold_inner", "auroc"],
        ValidationPlan::Temporal => &["procedure", "n_landmarks", "period", "part", "k", "auroc"],
    };
    emit(a.out.as_deref(), &csv_bytes(header, &rows)?)?;
    let mut inputs = input_files(&a.space);
    inputs.push(a.outcomes.clone());
    Ok(RunRecord { seeds: vec![("folds".into(), a.rng_seed)], inputs, outputs: a.out.iter().cloned().collect() })
}
