//! Landmark selection: maxmin, lastfirst, and uniform random sampling.
//!
//! Maxmin grows closed balls of a common radius about the landmarks and picks
//! the next landmark among the points reached last. Lastfirst does the same
//! with neighborhoods of a common rank bound, so it adapts to local density
//! and only ever consumes landmark-outward ranks (it works unchanged on
//! asymmetric dissimilarities). For asymmetric input, maxmin balls are also
//! grown outward from the landmarks: `B̄_ε(ℓ) = {x : d(ℓ, x) ≤ ε}`.

mod cover;
mod sampler;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::space::{DissimilaritySpace, RankVariant, SpaceError};

pub use cover::{build_cover, Cover, CoverError, CoverKind};
pub use sampler::{
    landmarks, lastfirst_landmarks, maxmin_landmarks, random_landmarks, seed, select,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Procedure {
    Maxmin,
    Lastfirst,
    Random,
}

impl Procedure {
    pub fn name(self) -> &'static str {
        match self {
            Procedure::Maxmin => "maxmin",
            Procedure::Lastfirst => "lastfirst",
            Procedure::Random => "random",
        }
    }
}

impl std::fmt::Display for Procedure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// How the first landmark is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SeedRule {
    FirstIndex,
    Random,
    /// Maxmin: the point of least eccentricity `max_y d(x, y)`.
    /// Lastfirst: the point whose out-rank sequence `N•⁺(x, X∖{x})` is
    /// smallest in revlex order.
    #[default]
    Chebyshev,
}

/// How one landmark is picked from a tied candidate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TieRule {
    #[default]
    FirstIndex,
    Random,
    /// Break ties by the second-nearest landmark, then the third, and so on
    /// (distances for maxmin, in-ranks for lastfirst); smallest index last.
    IterativeRefinement,
}

/// Parameters of a landmark run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub procedure: Procedure,
    /// Target number of landmarks; values above `uniq(X)` are capped.
    pub num_landmarks: Option<usize>,
    /// Maxmin: stop once balls of this radius cover the space.
    pub radius: Option<f64>,
    /// Lastfirst: stop once neighborhoods of this rank bound cover the space.
    pub cardinality: Option<usize>,
    pub seed_rule: SeedRule,
    pub tie_rule: TieRule,
    pub rng_seed: u64,
    pub rank_variant: RankVariant,
}

impl SamplerConfig {
    pub fn new(procedure: Procedure) -> Self {
        SamplerConfig {
            procedure,
            num_landmarks: None,
            radius: None,
            cardinality: None,
            seed_rule: SeedRule::default(),
            tie_rule: TieRule::default(),
            rng_seed: 0,
            rank_variant: RankVariant::default(),
        }
    }

    pub fn maxmin() -> Self {
        Self::new(Procedure::Maxmin)
    }

    pub fn lastfirst() -> Self {
        Self::new(Procedure::Lastfirst)
    }

    pub fn random(n: usize) -> Self {
        Self::new(Procedure::Random).with_num(n)
    }

    pub fn with_num(mut self, n: usize) -> Self {
        self.num_landmarks = Some(n);
        self
    }

    /// Select every distinguishable point.
    pub fn exhaustive(mut self) -> Self {
        self.num_landmarks = Some(usize::MAX);
        self
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.radius = Some(radius);
        self
    }

    pub fn with_cardinality(mut self, k: usize) -> Self {
        self.cardinality = Some(k);
        self
    }

    pub fn with_seed_rule(mut self, rule: SeedRule) -> Self {
        self.seed_rule = rule;
        self
    }

    pub fn with_tie_rule(mut self, rule: TieRule) -> Self {
        self.tie_rule = rule;
        self
    }

    pub fn with_rng_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_rank_variant(mut self, variant: RankVariant) -> Self {
        self.rank_variant = variant;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.num_landmarks == Some(0) {
            return Err(ConfigError::ZeroLandmarks);
        }
        if let Some(r) = self.radius {
            if !(r >= 0.0) || r.is_nan() {
                return Err(ConfigError::InvalidRadius(r));
            }
        }
        match self.procedure {
            Procedure::Maxmin => {
                if self.cardinality.is_some() {
                    return Err(ConfigError::NotApplicable { param: "cardinality", procedure: self.procedure });
                }
                if self.num_landmarks.is_none() && self.radius.is_none() {
                    return Err(ConfigError::MissingStopParameter(self.procedure));
                }
            }
            Procedure::Lastfirst => {
                if self.radius.is_some() {
                    return Err(ConfigError::NotApplicable { param: "radius", procedure: self.procedure });
                }
                if self.num_landmarks.is_none() && self.cardinality.is_none() {
                    return Err(ConfigError::MissingStopParameter(self.procedure));
                }
            }
            Procedure::Random => {
                if self.num_landmarks.is_none() {
                    return Err(ConfigError::MissingStopParameter(self.procedure));
                }
                if self.radius.is_some() || self.cardinality.is_some() {
                    return Err(ConfigError::NotApplicable {
                        param: "radius/cardinality",
                        procedure: self.procedure,
                    });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("{0} needs a number of landmarks or a cover parameter")]
    MissingStopParameter(Procedure),
    #[error("`{param}` does not apply to {procedure}")]
    NotApplicable { param: &'static str, procedure: Procedure },
    #[error("radius must be a nonnegative number, got {0}")]
    InvalidRadius(f64),
    #[error("number of landmarks must be positive")]
    ZeroLandmarks,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LandmarkError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error("the landmark set is empty")]
    EmptyLandmarks,
    #[error("no candidates to select from")]
    EmptyCandidates,
    #[error("requested {requested} landmarks but the space has only {available} distinguishable points")]
    TooManyRequested { requested: usize, available: usize },
}

/// Radius (maxmin, random) or rank bound (lastfirst) of a landmark cover.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoverParam {
    Cardinality(usize),
    Radius(f64),
}

impl CoverParam {
    pub fn as_f64(self) -> f64 {
        match self {
            CoverParam::Radius(r) => r,
            CoverParam::Cardinality(k) => k as f64,
        }
    }
}

/// One landmark together with the covering value of the prefix ending at it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub landmark: usize,
    pub cover_param: CoverParam,
}

/// Ordered landmarks with per-prefix covering values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandmarkResult {
    pub procedure: Procedure,
    pub rank_variant: RankVariant,
    pub n_points: usize,
    pub landmarks: Vec<usize>,
    pub steps: Vec<Step>,
    /// Parameter of the induced cover: the prescribed radius or cardinality
    /// when one was given, otherwise the covering value of the full sequence.
    pub cover_param: CoverParam,
}

impl LandmarkResult {
    pub fn len(&self) -> usize {
        self.landmarks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.landmarks.is_empty()
    }

    /// `ε(n)`, the minimal covering radius of the whole sequence.
    pub fn final_radius(&self) -> Option<f64> {
        match self.steps.last()?.cover_param {
            CoverParam::Radius(r) => Some(r),
            CoverParam::Cardinality(_) => None,
        }
    }

    /// `K(L, X)`, the minimal covering rank bound of the whole sequence.
    pub fn final_cardinality(&self) -> Option<usize> {
        match self.steps.last()?.cover_param {
            CoverParam::Cardinality(k) => Some(k),
            CoverParam::Radius(_) => None,
        }
    }

    /// The first `m` landmarks, with the cover parameter reset to the
    /// prefix's own minimal covering value.
    pub fn prefix(&self, m: usize) -> LandmarkResult {
        let m = m.min(self.len());
        LandmarkResult {
            procedure: self.procedure,
            rank_variant: self.rank_variant,
            n_points: self.n_points,
            landmarks: self.landmarks[..m].to_vec(),
            steps: self.steps[..m].to_vec(),
            cover_param: self.steps[m.max(1) - 1].cover_param,
        }
    }
}

/// `maxmin(Y; X)`: the points of `X ∖ cl(Y)` farthest from `Y`.
///
/// Empty when `cl(Y) = X`.
pub fn maxmin_set(space: &DissimilaritySpace, ys: &[usize]) -> Result<Vec<usize>, LandmarkError> {
    check_landmarks(space, ys)?;
    let closed = space.colocation().closure_mask(ys);
    let near: Vec<f64> = (0..space.len())
        .map(|x| ys.iter().map(|&y| space.dissim(y, x)).fold(f64::INFINITY, f64::min))
        .collect();
    Ok(argmax_outside(&near, &closed, |a, b| a.total_cmp(b)))
}

/// `Ε(Y, X)`: the least radius at which closed balls about `Y` cover `X`.
pub fn covering_radius(space: &DissimilaritySpace, ys: &[usize]) -> Result<f64, LandmarkError> {
    check_landmarks(space, ys)?;
    Ok((0..space.len())
        .map(|x| ys.iter().map(|&y| space.dissim(y, x)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max))
}

/// `K(Y, X)`: the least rank bound at which neighborhoods about `Y` cover `X`,
/// i.e. `max_x min_{y ∈ Y} q(y, x)`.
pub fn covering_cardinality(
    space: &DissimilaritySpace,
    ys: &[usize],
    variant: RankVariant,
) -> Result<usize, LandmarkError> {
    check_landmarks(space, ys)?;
    let rows: Vec<&[u32]> = ys.iter().map(|&y| space.rank_row(variant, y)).collect();
    Ok((0..space.len())
        .map(|x| rows.iter().map(|r| r[x]).min().unwrap_or(u32::MAX) as usize)
        .max()
        .unwrap_or(0))
}

/// `lf(Y; X)`: the points of `X ∖ cl(Y)` reached last by growing
/// neighborhoods about `Y`.
///
/// Empty when `cl(Y) = X`.
pub fn lastfirst_set(
    space: &DissimilaritySpace,
    ys: &[usize],
    variant: RankVariant,
) -> Result<Vec<usize>, LandmarkError> {
    check_landmarks(space, ys)?;
    let closed = space.colocation().closure_mask(ys);
    let rows: Vec<&[u32]> = ys.iter().map(|&y| space.rank_row(variant, y)).collect();
    let near: Vec<u32> = (0..space.len())
        .map(|x| rows.iter().map(|r| r[x]).min().unwrap_or(u32::MAX))
        .collect();
    Ok(argmax_outside(&near, &closed, |a, b| a.cmp(b)))
}

fn check_landmarks(space: &DissimilaritySpace, ys: &[usize]) -> Result<(), LandmarkError> {
    if ys.is_empty() {
        return Err(LandmarkError::EmptyLandmarks);
    }
    for &y in ys {
        space.check_index(y)?;
    }
    Ok(())
}

/// Indices outside `excluded` whose value is maximal among them, ascending.
pub(crate) fn argmax_outside<T: Copy>(
    values: &[T],
    excluded: &[bool],
    cmp: impl Fn(&T, &T) -> std::cmp::Ordering,
) -> Vec<usize> {
    let mut best: Option<T> = None;
    let mut out = Vec::new();
    for (i, v) in values.iter().enumerate() {
        if excluded[i] {
            continue;
        }
        match best.as_ref().map(|b| cmp(v, b)) {
            None | Some(std::cmp::Ordering::Greater) => {
                best = Some(*v);
                out.clear();
                out.push(i);
            }
            Some(std::cmp::Ordering::Equal) => out.push(i),
            Some(std::cmp::Ordering::Less) => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> DissimilaritySpace {
        DissimilaritySpace::euclidean(&[[1.0], [2.0], [4.0], [4.0]]).unwrap()
    }

    #[test]
    fn maxmin_sets() {
        let s = line();
        assert_eq!(maxmin_set(&s, &[0]).unwrap(), [2, 3]);
        assert!(maxmin_set(&s, &[0, 1, 2]).unwrap().is_empty());
        let two = DissimilaritySpace::euclidean(&[[0.0], [1.0]]).unwrap();
        assert_eq!(maxmin_set(&two, &[0]).unwrap(), [1]);
        assert_eq!(maxmin_set(&s, &[]), Err(LandmarkError::EmptyLandmarks));
    }

    #[test]
    fn covering_values() {
        let s = line();
        assert_eq!(covering_radius(&s, &[0]).unwrap(), 3.0);
        assert_eq!(covering_radius(&s, &[2]).unwrap(), 3.0);
        assert_eq!(covering_radius(&s, &[0, 1, 2, 3]).unwrap(), 0.0);
        let v = RankVariant::Check;
        assert_eq!(covering_cardinality(&s, &[2], v).unwrap(), 3);
        assert_eq!(covering_cardinality(&s, &[0], v).unwrap(), 2);
        assert_eq!(covering_cardinality(&s, &[0, 1, 2, 3], v).unwrap(), 0);
    }

    #[test]
    fn lastfirst_sets() {
        let s = line();
        let v = RankVariant::Check;
        assert_eq!(lastfirst_set(&s, &[2], v).unwrap(), [0]);
        assert_eq!(lastfirst_set(&s, &[0], v).unwrap(), [2, 3]);
        assert!(lastfirst_set(&s, &[0, 1, 2, 3], v).unwrap().is_empty());
    }

    #[test]
    fn config_validation() {
        assert_eq!(
            SamplerConfig::maxmin().validate(),
            Err(ConfigError::MissingStopParameter(Procedure::Maxmin))
        );
        assert!(SamplerConfig::maxmin().with_radius(0.5).validate().is_ok());
        assert!(SamplerConfig::lastfirst().with_cardinality(3).validate().is_ok());
        assert!(SamplerConfig::lastfirst().with_radius(1.0).with_num(2).validate().is_err());
        assert!(SamplerConfig::maxmin().with_radius(-1.0).validate().is_err());
        assert_eq!(SamplerConfig::maxmin().with_num(0).validate(), Err(ConfigError::ZeroLandmarks));
    }

    #[test]
    fn prefix_resets_cover_param() {
        let s = line();
        let r = maxmin_landmarks(&s, &SamplerConfig::maxmin().exhaustive().with_seed_rule(SeedRule::FirstIndex))
            .unwrap();
        let p = r.prefix(1);
        assert_eq!(p.landmarks, [0]);
        assert_eq!(p.cover_param, CoverParam::Radius(3.0));
    }
}
