use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use super::io::{csv_bytes, emit, points_csv};
use super::{parse_angle, CliError, RunRecord};
use crate::synth::{
    gen_bumpy_circle, gen_duplicated_lattice, gen_necklace, gen_noisy_circle, gen_planted_cohort, gen_sphere,
    BumpyCircleParams, NecklaceParams, SphereMode, SphereSampleParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Generator {
    BumpyCircle,
    Necklace,
    Sphere,
    Lattice,
    NoisyCircle,
    /// Unit-square points with a logistic outcome; needs `--outcomes-out`.
    Cohort,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub generator: Generator,
    /// Sample size (necklace: ignored, see the bead options).
    #[arg(long, default_value_t = 60)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    /// Bumpy circle: weight of the uniform component.
    #[arg(long, default_value_t = 0.05)]
    pub w0: f64,
    /// Bumpy circle: angle of the second bump, e.g. `pi`, `3pi/4`.
    #[arg(long, default_value = "pi", value_parser = parse_angle)]
    pub mu2: f64,
    /// Bumpy circle: bump standard deviation.
    #[arg(long, default_value = "pi/6", value_parser = parse_angle)]
    pub sigma: f64,
    /// Bumpy circle: weight ratio of the first bump to the second.
    #[arg(long, default_value_t = 10.0)]
    pub ratio: f64,
    #[arg(long, default_value_t = 60)]
    pub n_string: usize,
    #[arg(long, default_value_t = 90)]
    pub points_per_bead: usize,
    #[arg(long, default_value_t = 6)]
    pub bead_count: usize,
    #[arg(long, default_value_t = 1.0)]
    pub string_radius: f64,
    #[arg(long, default_value_t = 0.15)]
    pub bead_radius: f64,
    #[arg(long, value_enum, default_value_t = SphereMode::Uniform)]
    pub mode: SphereMode,
    /// Sphere: skew exponent.
    #[arg(long, default_value_t = 4.0)]
    pub alpha: f64,
    /// Sphere: boost exponent.
    #[arg(long, default_value_t = 4.0)]
    pub beta: f64,
    /// Sphere: pool size for boosting, as a fraction of n.
    #[arg(long, default_value_t = 1.0 / 6.0)]
    pub boost_pool_fraction: f64,
    /// Noisy circle: standard deviation of the planar noise.
    #[arg(long, default_value_t = 0.1)]
    pub noise_sd: f64,
    /// Cohort: logistic slope of the outcome along x.
    #[arg(long, default_value_t = 12.0)]
    pub slope: f64,
    /// Cohort: number of periods, assigned round-robin.
    #[arg(long, default_value_t = 1)]
    pub periods: usize,
    /// Cohort: where to write `point_id,outcome,period`.
    #[arg(long)]
    pub outcomes_out: Option<PathBuf>,
    /// Coordinate CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub(crate) fn run(a: &GenArgs) -> Result<RunRecord, CliError> {
    let mut record = RunRecord { seeds: vec![("data".into(), a.rng_seed)], ..Default::default() };
    let points = match a.generator {
        Generator::BumpyCircle => gen_bumpy_circle(&BumpyCircleParams {
            n: a.n,
            w0: a.w0,
            mu2: a.mu2,
            sigma: a.sigma,
            ratio: a.ratio,
            rng_seed: a.rng_seed,
        })?,
        Generator::Necklace => gen_necklace(&NecklaceParams {
            n_string: a.n_string,
            points_per_bead: a.points_per_bead,
            bead_count: a.bead_count,
            string_radius: a.string_radius,
            bead_radius: a.bead_radius,
            rng_seed: a.rng_seed,
        })?,
        Generator::Sphere => gen_sphere(&SphereSampleParams {
            n: a.n,
            mode: a.mode,
            alpha: a.alpha,
            beta: a.beta,
            boost_pool_fraction: a.boost_pool_fraction,
            rng_seed: a.rng_seed,
        })?,
        Generator::Lattice => gen_duplicated_lattice(a.n, a.rng_seed),
        Generator::NoisyCircle => gen_noisy_circle(a.n, a.noise_sd, a.rng_seed)?,
        Generator::Cohort => {
            let path = a
                .outcomes_out
                .as_ref()
                .ok_or_else(|| CliError::Config("the cohort generator needs --outcomes-out".into()))?;
            let c = gen_planted_cohort(a.n, a.slope, a.periods, a.rng_seed)?;
            let rows: Vec<Vec<String>> = (0..a.n)
                .map(|i| vec![i.to_string(), c.outcomes[i].to_string(), c.periods[i].to_string()])
                .collect();
            emit(Some(path), &csv_bytes(&["point_id", "outcome", "period"], &rows)?)?;
            record.outputs.push(path.clone());
            c.points
        }
    };
    emit(a.out.as_deref(), &points_csv(&points)?)?;
    record.outputs.extend(a.out.clone());
    Ok(record)
}
