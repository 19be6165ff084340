use std::path::PathBuf;

use clap::Args;
use serde::{Deserialize, Serialize};

use super::io::{emit, input_files, load_space, SpaceArgs};
use super::{CliError, RunRecord};
use crate::evalmetrics::mpc;
use crate::landmark::{build_cover, landmarks, CoverKind, CoverParam, Procedure, SamplerConfig, SeedRule, Step, TieRule};
use crate::space::RankVariant;

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct LandmarksArgs {
    #[command(flatten)]
    pub space: SpaceArgs,
    #[arg(long, value_enum, default_value_t = Procedure::Lastfirst)]
    pub procedure: Procedure,
    /// Number of landmarks.
    #[arg(long)]
    pub num: Option<usize>,
    /// Continue until every point is a landmark or co-located with one.
    #[arg(long, conflicts_with = "num")]
    pub exhaustive: bool,
    /// Stop once the covering radius is at most this (maxmin).
    #[arg(long)]
    pub radius: Option<f64>,
    /// Stop once the covering cardinality is at most this (lastfirst).
    #[arg(long)]
    pub cardinality: Option<usize>,
    #[arg(long, value_enum, default_value_t = SeedRule::Chebyshev)]
    pub seed_rule: SeedRule,
    #[arg(long, value_enum, default_value_t = TieRule::FirstIndex)]
    pub tie_rule: TieRule,
    #[arg(long, value_enum, default_value_t = RankVariant::Check)]
    pub rank_variant: RankVariant,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Cover type; balls for maxmin and random, neighborhoods for lastfirst.
    #[arg(long, value_enum)]
    pub cover: Option<CoverKind>,
    #[arg(long, default_value_t = 0.0)]
    pub ext_mult: f64,
    #[arg(long, default_value_t = 0.0)]
    pub ext_add: f64,
    /// JSON output; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Extension {
    mult: f64,
    add: f64,
}

#[derive(Serialize)]
struct LandmarksReport {
    procedure: Procedure,
    seed_rule: SeedRule,
    tie_rule: TieRule,
    rank_variant: RankVariant,
    rng_seed: u64,
    n_points: usize,
    landmarks: Vec<usize>,
    per_step: Vec<Step>,
    cover_param: CoverParam,
    cover_kind: CoverKind,
    ext: Extension,
    /// Extended radius or cardinality actually used for the sets.
    cover_extent: f64,
    sets: Vec<Vec<usize>>,
    mpc: Option<f64>,
}

impl LandmarksArgs {
    pub fn config(&self) -> SamplerConfig {
        let mut cfg = SamplerConfig::new(self.procedure)
            .with_seed_rule(self.seed_rule)
            .with_tie_rule(self.tie_rule)
            .with_rng_seed(self.rng_seed)
            .with_rank_variant(self.rank_variant);
        cfg.num_landmarks = if self.exhaustive { Some(usize::MAX) } else { self.num };
        cfg.radius = self.radius;
        cfg.cardinality = self.cardinality;
        cfg
    }
}

pub(crate) fn run(a: &LandmarksArgs) -> Result<RunRecord, CliError> {
    let space = load_space(&a.space)?;
    let result = landmarks(&space, &a.config())?;
    let kind = a.cover.unwrap_or(match a.procedure {
        Procedure::Lastfirst => CoverKind::Neighborhood,
        Procedure::Maxmin | Procedure::Random => CoverKind::Ball,
    });
    let cover = build_cover(&space, &result, kind, a.ext_mult, a.ext_add)?;
    let report = LandmarksReport {
        procedure: a.procedure,
        seed_rule: a.seed_rule,
        tie_rule: a.tie_rule,
        rank_variant: a.rank_variant,
        rng_seed: a.rng_seed,
        n_points: space.len(),
        landmarks: result.landmarks.clone(),
        per_step: result.steps.clone(),
        cover_param: result.cover_param,
        cover_kind: kind,
        ext: Extension { mult: a.ext_mult, add: a.ext_add },
        cover_extent: cover.parameter,
        mpc: mpc(&cover).ok(),
        sets: cover.sets,
    };
    let mut json = serde_json::to_vec_pretty(&report).map_err(|e| CliError::Io(e.to_string()))?;
    json.push(b'\n');
    emit(a.out.as_deref(), &json)?;
    Ok(RunRecord {
        seeds: vec![("landmarks".into(), a.rng_seed)],
        inputs: input_files(&a.space),
        outputs: a.out.iter().cloned().collect(),
    })
}
