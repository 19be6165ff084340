use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::inn::{contact_weights, weighted_mean};
use super::{auroc, check_outcomes, landmark_knn_profile, EvalError, KnnProfile, WeightKind, WeightingScheme};
use crate::landmark::{landmarks, Procedure, SamplerConfig};
use crate::space::DissimilaritySpace;
use crate::synth::{derive_seed, rng_for};

/// Fold layout and tuning range for cross-validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvPlan {
    pub outer_folds: usize,
    pub inner_folds: usize,
    /// Largest neighborhood size considered when tuning `k`.
    pub neighborhood_size: usize,
    pub rng_seed: u64,
}

impl Default for CvPlan {
    fn default() -> Self {
        CvPlan { outer_folds: 6, inner_folds: 6, neighborhood_size: 180, rng_seed: 0 }
    }
}

impl CvPlan {
    pub fn with_neighborhood_size(mut self, k: usize) -> Self {
        self.neighborhood_size = k;
        self
    }

    pub fn with_rng_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_folds(mut self, outer: usize, inner: usize) -> Self {
        self.outer_folds = outer;
        self.inner_folds = inner;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stage {
    /// Landmarks and profiles are fit on these points.
    Train,
    /// `k` and the weighting are chosen on these points.
    Tune,
    /// The chosen model is scored on these points.
    Evaluate,
}

/// One data access made by a cross-validation run, for instrumentation.
#[derive(Debug, Clone, Copy)]
pub struct CvEvent<'a> {
    pub stage: Stage,
    pub outer: usize,
    pub inner: usize,
    pub indices: &'a [usize],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvRow {
    pub procedure: Procedure,
    pub n_landmarks: usize,
    pub scheme: WeightKind,
    pub k: usize,
    pub fold_outer: usize,
    pub fold_inner: usize,
    pub auroc: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemporalRow {
    pub procedure: Procedure,
    pub n_landmarks: usize,
    pub period: usize,
    pub part: usize,
    pub k: usize,
    pub auroc: f64,
}

/// Shuffle `indices` and cut them into `folds` contiguous chunks whose sizes
/// differ by at most one; each fold is returned sorted.
pub fn assign_folds(indices: &[usize], folds: usize, rng_seed: u64, stream: u64) -> Vec<Vec<usize>> {
    let mut v = indices.to_vec();
    v.shuffle(&mut rng_for(rng_seed, stream));
    let (q, r) = (v.len() / folds, v.len() % folds);
    let mut out = Vec::with_capacity(folds);
    let mut at = 0;
    for f in 0..folds {
        let size = q + usize::from(f < r);
        let mut fold = v[at..at + size].to_vec();
        fold.sort_unstable();
        out.push(fold);
        at += size;
    }
    out
}

fn minus(all: &[usize], drop: &[&[usize]]) -> Vec<usize> {
    let mut mask = vec![false; all.iter().copied().max().map_or(0, |m| m + 1)];
    for d in drop {
        for &i in *d {
            if i < mask.len() {
                mask[i] = true;
            }
        }
    }
    all.iter().copied().filter(|&i| !mask[i]).collect()
}

fn two_classes(ids: &[usize], y: &[u8]) -> bool {
    let pos = ids.iter().filter(|&&i| y[i] == 1).count();
    pos > 0 && pos < ids.len()
}

/// Landmarks chosen on the training subspace, as indices of `space`.
fn train_landmarks(
    space: &DissimilaritySpace,
    train: &[usize],
    config: &SamplerConfig,
    n_landmarks: usize,
    seed: u64,
) -> Result<Vec<usize>, EvalError> {
    let sub = space.subspace(train)?;
    let cfg = SamplerConfig { radius: None, cardinality: None, ..config.clone() }
        .with_num(n_landmarks)
        .with_rng_seed(seed);
    Ok(landmarks(&sub, &cfg)?.landmarks.into_iter().map(|l| train[l]).collect())
}

/// Predictions for `points` at every `k`, per scheme: `out[s][k−1][i]`.
fn predict_all(
    space: &DissimilaritySpace,
    points: &[usize],
    profile: &KnnProfile,
    schemes: &[WeightingScheme],
) -> Vec<Vec<Vec<f64>>> {
    let weights: Vec<Vec<Vec<f64>>> = schemes
        .iter()
        .map(|s| {
            points
                .iter()
                .map(|&x| {
                    let d: Vec<f64> = profile.landmarks.iter().map(|&l| space.dissim(x, l)).collect();
                    contact_weights(&d, space.tolerance(), s)
                })
                .collect()
        })
        .collect();
    weights
        .iter()
        .map(|per_point| {
            (1..=profile.max_k)
                .map(|k| {
                    per_point
                        .iter()
                        .map(|w| weighted_mean(w, profile.table.iter().map(|row| row[k - 1])))
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Best `(scheme index, k)` by AUROC on `points`; earlier schemes and
/// smaller `k` win ties.
fn tune(
    space: &DissimilaritySpace,
    points: &[usize],
    y: &[u8],
    profile: &KnnProfile,
    schemes: &[WeightingScheme],
) -> Result<(usize, usize), EvalError> {
    let labels: Vec<u8> = points.iter().map(|&i| y[i]).collect();
    let preds = predict_all(space, points, profile, schemes);
    let mut best = (0, 1, f64::NEG_INFINITY);
    for (s, per_k) in preds.iter().enumerate() {
        for (k0, p) in per_k.iter().enumerate() {
            let a = auroc(p, &labels)?;
            if a > best.2 {
                best = (s, k0 + 1, a);
            }
        }
    }
    Ok((best.0, best.1))
}

fn score(
    space: &DissimilaritySpace,
    points: &[usize],
    y: &[u8],
    profile: &KnnProfile,
    scheme: &WeightingScheme,
    k: usize,
) -> Result<f64, EvalError> {
    let labels: Vec<u8> = points.iter().map(|&i| y[i]).collect();
    let preds = predict_all(space, points, profile, std::slice::from_ref(scheme));
    auroc(&preds[0][k - 1], &labels)
}

/// Nested cross-validation of interpolative nearest-neighbor prediction.
///
/// For each outer fold `i` and inner fold `j` of the remaining points,
/// landmarks and profiles are fit on everything outside both folds, the
/// weighting scheme and `k` are tuned by AUROC on inner fold `j`, and the
/// tuned model is scored on outer fold `i`. One row per landmark count and
/// fold pair, ordered by landmark count, then `i`, then `j`.
pub fn nested_cv(
    space: &DissimilaritySpace,
    outcomes: &[u8],
    config: &SamplerConfig,
    plan: &CvPlan,
    landmark_counts: &[usize],
    schemes: &[WeightingScheme],
) -> Result<Vec<CvRow>, EvalError> {
    nested_cv_observed(space, outcomes, config, plan, landmark_counts, schemes, &|_| {})
}

/// [`nested_cv`] reporting every index set it touches to `observer`.
pub fn nested_cv_observed(
    space: &DissimilaritySpace,
    outcomes: &[u8],
    config: &SamplerConfig,
    plan: &CvPlan,
    landmark_counts: &[usize],
    schemes: &[WeightingScheme],
    observer: &(dyn Fn(CvEvent<'_>) + Sync),
) -> Result<Vec<CvRow>, EvalError> {
    if outcomes.len() != space.len() {
        return Err(EvalError::LengthMismatch { left: space.len(), right: outcomes.len() });
    }
    check_outcomes(outcomes)?;
    if plan.outer_folds < 2 || plan.inner_folds < 2 {
        return Err(EvalError::TooFewFolds(plan.outer_folds.min(plan.inner_folds)));
    }
    if schemes.is_empty() {
        return Err(EvalError::NoSchemes);
    }
    for s in schemes {
        s.validate()?;
    }
    let all: Vec<usize> = (0..space.len()).collect();
    let outer = assign_folds(&all, plan.outer_folds, plan.rng_seed, 0);
    let mut cells = Vec::new();
    for (i, test) in outer.iter().enumerate() {
        let rest = minus(&all, &[test]);
        let inner = assign_folds(&rest, plan.inner_folds, plan.rng_seed, 1 + i as u64);
        for (j, tune_set) in inner.into_iter().enumerate() {
            let train = minus(&rest, &[&tune_set]);
            cells.push((i, j, test.clone(), tune_set, train));
        }
    }
    let y = outcomes;
    let mut rows = Vec::new();
    for &m in landmark_counts {
        let block: Vec<CvRow> = cells
            .par_iter()
            .map(|(i, j, test, tune_set, train)| {
                let (i, j) = (*i, *j);
                if !two_classes(test, y) {
                    return Err(EvalError::DegenerateFold { stage: "test", outer: i, inner: j });
                }
                if !two_classes(tune_set, y) {
                    return Err(EvalError::DegenerateFold { stage: "tuning", outer: i, inner: j });
                }
                observer(CvEvent { stage: Stage::Train, outer: i, inner: j, indices: train });
                let seed = derive_seed(config.rng_seed, (i * plan.inner_folds + j) as u64);
                let ls = train_landmarks(space, train, config, m, seed)?;
                let profile = landmark_knn_profile(space, &ls, train, y, plan.neighborhood_size)?;
                observer(CvEvent { stage: Stage::Tune, outer: i, inner: j, indices: tune_set });
                let (s, k) = tune(space, tune_set, y, &profile, schemes)?;
                observer(CvEvent { stage: Stage::Evaluate, outer: i, inner: j, indices: test });
                let a = score(space, test, y, &profile, &schemes[s], k)?;
                Ok(CvRow {
                    procedure: config.procedure,
                    n_landmarks: m,
                    scheme: schemes[s].kind,
                    k,
                    fold_outer: i,
                    fold_inner: j,
                    auroc: a,
                })
            })
            .collect::<Result<_, _>>()?;
        rows.extend(block);
    }
    Ok(rows)
}

/// Period-to-period validation with Gaussian weighting.
///
/// `periods[i]` is the period index of point `i`. For each period `t ≥ 1`,
/// landmarks and profiles are fit on period `t − 1`; period `t` is split into
/// `parts` random parts, and for each part `k` is tuned on the other parts
/// and the model scored on that part.
pub fn temporal_cv(
    space: &DissimilaritySpace,
    outcomes: &[u8],
    periods: &[usize],
    config: &SamplerConfig,
    plan: &CvPlan,
    landmark_counts: &[usize],
) -> Result<Vec<TemporalRow>, EvalError> {
    temporal_cv_observed(space, outcomes, periods, config, plan, landmark_counts, &|_| {})
}

/// [`temporal_cv`] reporting every index set it touches to `observer`;
/// `outer` is the period and `inner` the part.
#[allow(clippy::too_many_arguments)]
pub fn temporal_cv_observed(
    space: &DissimilaritySpace,
    outcomes: &[u8],
    periods: &[usize],
    config: &SamplerConfig,
    plan: &CvPlan,
    landmark_counts: &[usize],
    observer: &(dyn Fn(CvEvent<'_>) + Sync),
) -> Result<Vec<TemporalRow>, EvalError> {
    if outcomes.len() != space.len() {
        return Err(EvalError::LengthMismatch { left: space.len(), right: outcomes.len() });
    }
    if periods.len() != space.len() {
        return Err(EvalError::LengthMismatch { left: space.len(), right: periods.len() });
    }
    check_outcomes(outcomes)?;
    let n_periods = periods.iter().copied().max().map_or(0, |p| p + 1);
    if n_periods < 2 {
        return Err(EvalError::SinglePeriod);
    }
    let parts = plan.outer_folds;
    if parts < 2 {
        return Err(EvalError::TooFewFolds(parts));
    }
    let members: Vec<Vec<usize>> =
        (0..n_periods).map(|t| (0..space.len()).filter(|&i| periods[i] == t).collect()).collect();
    let gaussian = [WeightingScheme::new(WeightKind::Gaussian)];
    let y = outcomes;
    let mut rows = Vec::new();
    for &m in landmark_counts {
        let block: Vec<Vec<TemporalRow>> = (1..n_periods)
            .into_par_iter()
            .map(|t| {
                let train = &members[t - 1];
                let split = assign_folds(&members[t], parts, plan.rng_seed, t as u64);
                observer(CvEvent { stage: Stage::Train, outer: t, inner: 0, indices: train });
                let seed = derive_seed(config.rng_seed, t as u64);
                let ls = train_landmarks(space, train, config, m, seed)?;
                let profile = landmark_knn_profile(space, &ls, train, y, plan.neighborhood_size)?;
                let mut out = Vec::with_capacity(parts);
                for (p, part) in split.iter().enumerate() {
                    let others: Vec<usize> = split
                        .iter()
                        .enumerate()
                        .filter(|&(q, _)| q != p)
                        .flat_map(|(_, s)| s.iter().copied())
                        .collect();
                    if !two_classes(part, y) {
                        return Err(EvalError::DegenerateFold { stage: "test", outer: t, inner: p });
                    }
                    if !two_classes(&others, y) {
                        return Err(EvalError::DegenerateFold { stage: "tuning", outer: t, inner: p });
                    }
                    observer(CvEvent { stage: Stage::Tune, outer: t, inner: p, indices: &others });
                    let (_, k) = tune(space, &others, y, &profile, &gaussian)?;
                    observer(CvEvent { stage: Stage::Evaluate, outer: t, inner: p, indices: part });
                    let a = score(space, part, y, &profile, &gaussian[0], k)?;
                    out.push(TemporalRow { procedure: config.procedure, n_landmarks: m, period: t, part: p, k, auroc: a });
                }
                Ok(out)
            })
            .collect::<Result<_, EvalError>>()?;
        rows.extend(block.into_iter().flatten());
    }
    Ok(rows)
}
