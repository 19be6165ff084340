//! Seeded generators for synthetic point clouds and outcome cohorts.
//!
//! Every generator is a pure function of its parameters: the same parameters
//! and seed give the same points on every platform. Randomness comes from
//! ChaCha8 seeded through [`rng_for`]; independent sub-streams of one seed are
//! selected with ChaCha's stream counter, and [`derive_seed`] turns a base
//! seed plus an index into a fresh seed for replicated experiments.

use std::f64::consts::{PI, TAU};

use rand::distr::weighted::WeightedIndex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, UnitSphere};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Points = Vec<Vec<f64>>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("mixture weights are invalid: {0}")]
    InvalidWeights(String),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// ChaCha8 generator for `seed` on sub-stream `stream`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Mix `index` into `base` (splitmix64 finalizer) to get an unrelated seed.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixture on the unit circle: a uniform component of weight `w0` plus
/// wrapped Gaussians at angles 0 and `mu2` with weights in ratio `ratio : 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BumpyCircleParams {
    pub n: usize,
    pub w0: f64,
    pub mu2: f64,
    pub sigma: f64,
    pub ratio: f64,
    pub rng_seed: u64,
}

impl BumpyCircleParams {
    /// Weights `(w0, w1, w2)` of the uniform and the two Gaussian components.
    pub fn weights(&self) -> Result<(f64, f64, f64), SynthError> {
        if !(0.0..=1.0).contains(&self.w0) {
            return Err(SynthError::InvalidWeights(format!("w0 = {} outside [0, 1]", self.w0)));
        }
        if !(self.ratio >= 0.0) || !self.ratio.is_finite() {
            return Err(SynthError::InvalidWeights(format!("ratio = {} must be nonnegative", self.ratio)));
        }
        let w2 = (1.0 - self.w0) / (1.0 + self.ratio);
        Ok((self.w0, self.ratio * w2, w2))
    }
}

impl Default for BumpyCircleParams {
    fn default() -> Self {
        BumpyCircleParams { n: 60, w0: 0.05, mu2: PI, sigma: PI / 6.0, ratio: 10.0, rng_seed: 0 }
    }
}

pub fn gen_bumpy_circle(params: &BumpyCircleParams) -> Result<Points, SynthError> {
    let (w0, w1, w2) = params.weights()?;
    if !(params.sigma >= 0.0) || !params.sigma.is_finite() {
        return Err(SynthError::InvalidParameter(format!("sigma = {}", params.sigma)));
    }
    let mut rng = rng_for(params.rng_seed, 0);
    let noise = Normal::new(0.0, params.sigma).expect("finite sigma");
    Ok((0..params.n)
        .map(|_| {
            let u: f64 = rng.random();
            let theta = if u < w0 {
                rng.random_range(0.0..TAU)
            } else if u < w0 + w1 || w2 == 0.0 {
                noise.sample(&mut rng)
            } else {
                params.mu2 + noise.sample(&mut rng)
            };
            let theta = theta.rem_euclid(TAU);
            vec![theta.cos(), theta.sin()]
        })
        .collect())
}

/// A large circle (the string) with small circles (beads) centred evenly
/// along it, each sampled uniformly by arc length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NecklaceParams {
    pub n_string: usize,
    pub points_per_bead: usize,
    pub bead_count: usize,
    pub string_radius: f64,
    pub bead_radius: f64,
    pub rng_seed: u64,
}

impl Default for NecklaceParams {
    fn default() -> Self {
        // beads carry ten times the string's points per unit length
        NecklaceParams {
            n_string: 60,
            points_per_bead: 90,
            bead_count: 6,
            string_radius: 1.0,
            bead_radius: 0.15,
            rng_seed: 0,
        }
    }
}

impl NecklaceParams {
    /// Angular positions of the bead centres on the string.
    pub fn bead_angles(&self) -> Vec<f64> {
        (0..self.bead_count).map(|i| TAU * i as f64 / self.bead_count as f64).collect()
    }
}

pub fn gen_necklace(params: &NecklaceParams) -> Result<Points, SynthError> {
    if !(params.string_radius > 0.0) || !(params.bead_radius > 0.0) {
        return Err(SynthError::InvalidGeometry("radii must be positive".into()));
    }
    let mut rng = rng_for(params.rng_seed, 0);
    let mut points: Points = (0..params.n_string)
        .map(|_| {
            let t = rng.random_range(0.0..TAU);
            vec![params.string_radius * t.cos(), params.string_radius * t.sin()]
        })
        .collect();
    for c in params.bead_angles() {
        let (cx, cy) = (params.string_radius * c.cos(), params.string_radius * c.sin());
        for _ in 0..params.points_per_bead {
            let t = rng.random_range(0.0..TAU);
            points.push(vec![cx + params.bead_radius * t.cos(), cy + params.bead_radius * t.sin()]);
        }
    }
    Ok(points)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SphereMode {
    Uniform,
    Skewed,
    UniformBoosted,
    SkewedBoosted,
}

/// Samples on the unit sphere, optionally skewed towards the pole `z = −1`.
///
/// Skewing keeps a uniform draw with polar angle `φ` with probability
/// `(φ/π)^alpha`. Boosting first draws a pool of `boost_pool_fraction · n`
/// points, then resamples `n` of them with replacement, with probability
/// proportional to `(φ/π)^beta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereSampleParams {
    pub n: usize,
    pub mode: SphereMode,
    pub alpha: f64,
    pub beta: f64,
    pub boost_pool_fraction: f64,
    pub rng_seed: u64,
}

impl Default for SphereSampleParams {
    fn default() -> Self {
        SphereSampleParams {
            n: 600,
            mode: SphereMode::Uniform,
            alpha: 4.0,
            beta: 4.0,
            boost_pool_fraction: 1.0 / 6.0,
            rng_seed: 0,
        }
    }
}

/// Polar angle of a unit vector, in `[0, π]`.
pub fn polar_angle(p: &[f64]) -> f64 {
    p[2].clamp(-1.0, 1.0).acos()
}

pub fn gen_sphere(params: &SphereSampleParams) -> Result<Points, SynthError> {
    if !(params.alpha > 0.0) || !(params.beta > 0.0) {
        return Err(SynthError::InvalidParameter("alpha and beta must be positive".into()));
    }
    if !(params.boost_pool_fraction > 0.0 && params.boost_pool_fraction <= 1.0) {
        return Err(SynthError::InvalidParameter("boost pool fraction must lie in (0, 1]".into()));
    }
    let mut rng = rng_for(params.rng_seed, 0);
    let skewed = matches!(params.mode, SphereMode::Skewed | SphereMode::SkewedBoosted);
    let boosted = matches!(params.mode, SphereMode::UniformBoosted | SphereMode::SkewedBoosted);
    let base = if boosted {
        ((params.n as f64 * params.boost_pool_fraction).round() as usize).max(1)
    } else {
        params.n
    };
    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        loop {
            let p: [f64; 3] = UnitSphere.sample(rng);
            if !skewed {
                return p.to_vec();
            }
            let t: f64 = rng.random();
            if (polar_angle(&p) / PI).powf(params.alpha) >= t {
                return p.to_vec();
            }
        }
    };
    let pool: Points = (0..base).map(|_| draw(&mut rng)).collect();
    if !boosted || params.n == 0 {
        return Ok(pool);
    }
    let weights: Vec<f64> = pool.iter().map(|p| (polar_angle(p) / PI).powf(params.beta)).collect();
    let pick = WeightedIndex::new(&weights)
        .map_err(|e| SynthError::InvalidWeights(format!("boost weights: {e}")))?;
    Ok((0..params.n).map(|_| pool[pick.sample(&mut rng)].clone()).collect())
}

/// Lattice side lengths for [`gen_duplicated_lattice`].
pub const LATTICE_A: usize = 24;
pub const LATTICE_B: usize = 12;

/// Probability of lattice point `(a, b)`, proportional to `2^(−ab)`.
pub fn lattice_mass(a: usize, b: usize) -> f64 {
    let total: f64 = (0..LATTICE_A)
        .flat_map(|x| (0..LATTICE_B).map(move |y| 0.5f64.powi((x * y) as i32)))
        .sum();
    0.5f64.powi((a * b) as i32) / total
}

/// I.i.d. draws from `{0..24} × {0..12}` with mass `∝ 2^(−ab)`; repeats are kept.
pub fn gen_duplicated_lattice(n: usize, rng_seed: u64) -> Points {
    let cells: Vec<(usize, usize)> =
        (0..LATTICE_A).flat_map(|a| (0..LATTICE_B).map(move |b| (a, b))).collect();
    let weights: Vec<f64> = cells.iter().map(|&(a, b)| 0.5f64.powi((a * b) as i32)).collect();
    let pick = WeightedIndex::new(&weights).expect("positive weights");
    let mut rng = rng_for(rng_seed, 0);
    (0..n)
        .map(|_| {
            let (a, b) = cells[pick.sample(&mut rng)];
            vec![a as f64, b as f64]
        })
        .collect()
}

/// Uniform angles on the unit circle plus isotropic planar Gaussian noise.
pub fn gen_noisy_circle(n: usize, noise_sd: f64, rng_seed: u64) -> Result<Points, SynthError> {
    if !(noise_sd >= 0.0) || !noise_sd.is_finite() {
        return Err(SynthError::InvalidParameter(format!("noise sd = {noise_sd}")));
    }
    let mut rng = rng_for(rng_seed, 0);
    let noise = Normal::new(0.0, noise_sd).expect("finite sd");
    Ok((0..n)
        .map(|_| {
            let t = rng.random_range(0.0..TAU);
            vec![t.cos() + noise.sample(&mut rng), t.sin() + noise.sample(&mut rng)]
        })
        .collect())
}

/// Points and binary outcomes for prediction experiments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cohort {
    pub points: Points,
    pub outcomes: Vec<u8>,
    /// Period label of each point; all zero unless periods were requested.
    pub periods: Vec<usize>,
}

/// Uniform points in the unit square whose outcome probability rises
/// logistically along the first coordinate: `P(y = 1) = σ(slope · (x − ½))`.
/// Points are assigned round-robin to `periods` periods.
pub fn gen_planted_cohort(n: usize, slope: f64, periods: usize, rng_seed: u64) -> Result<Cohort, SynthError> {
    if !slope.is_finite() {
        return Err(SynthError::InvalidParameter(format!("slope = {slope}")));
    }
    if periods == 0 {
        return Err(SynthError::InvalidParameter("at least one period is required".into()));
    }
    let mut rng = rng_for(rng_seed, 0);
    let mut points = Vec::with_capacity(n);
    let mut outcomes = Vec::with_capacity(n);
    for _ in 0..n {
        let x: f64 = rng.random();
        let y: f64 = rng.random();
        let p = 1.0 / (1.0 + (-slope * (x - 0.5)).exp());
        outcomes.push(u8::from(rng.random::<f64>() < p));
        points.push(vec![x, y]);
    }
    let periods = (0..n).map(|i| i % periods).collect();
    Ok(Cohort { points, outcomes, periods })
}
