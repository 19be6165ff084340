//! Cover quality, risk discrimination, and nearest-neighbor prediction.

mod cv;
mod inn;

use thiserror::Error;

use crate::landmark::{Cover, LandmarkError};
use crate::space::SpaceError;

pub use cv::{
    assign_folds, nested_cv, nested_cv_observed, temporal_cv, temporal_cv_observed, CvEvent,
    CvPlan, CvRow, Stage, TemporalRow,
};
pub use inn::{inn_predict, landmark_knn_profile, KnnProfile, WeightKind, WeightingScheme};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("the modified partition coefficient needs at least two sets")]
    SingleSet,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("outcome {value} at position {index} is not 0 or 1")]
    InvalidOutcome { index: usize, value: u8 },
    #[error("AUROC needs both outcome classes")]
    DegenerateLabels,
    #[error("training set has {train} points but the neighborhood size is {needed}")]
    InsufficientTraining { train: usize, needed: usize },
    #[error("no landmarks")]
    NoLandmarks,
    #[error("k = {k} outside 1..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("bandwidth must be positive, got {0}")]
    InvalidBandwidth(f64),
    #[error("{stage} set of fold ({outer}, {inner}) has a single outcome class")]
    DegenerateFold { stage: &'static str, outer: usize, inner: usize },
    #[error("temporal validation needs at least two periods")]
    SinglePeriod,
    #[error("need at least 2 folds, got {0}")]
    TooFewFolds(usize),
    #[error("no weighting schemes given")]
    NoSchemes,
    #[error(transparent)]
    Landmark(#[from] LandmarkError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

pub(crate) fn check_outcomes(outcomes: &[u8]) -> Result<(), EvalError> {
    match outcomes.iter().position(|&y| y > 1) {
        Some(index) => Err(EvalError::InvalidOutcome { index, value: outcomes[index] }),
        None => Ok(()),
    }
}

/// Modified partition coefficient `1 − k/(k−1) · (1 − (1/n) Σ_ij u_ij²)`.
///
/// 1 for a crisp partition, 0 when every point lies in every set.
pub fn mpc(cover: &Cover) -> Result<f64, EvalError> {
    let k = cover.num_sets();
    if k < 2 {
        return Err(EvalError::SingleSet);
    }
    let n = cover.n_points();
    // a point in c sets contributes c · (1/c)² = 1/c
    let pc: f64 = (0..n).map(|i| 1.0 / cover.multiplicity(i) as f64).sum::<f64>() / n as f64;
    let k = k as f64;
    Ok(1.0 - k / (k - 1.0) * (1.0 - pc))
}

/// `q_i = Σ_j u_ij p_j`, where `p_j` is the outcome incidence in set `j`.
pub fn cover_risk_scores(cover: &Cover, outcomes: &[u8]) -> Result<Vec<f64>, EvalError> {
    if outcomes.len() != cover.n_points() {
        return Err(EvalError::LengthMismatch { left: cover.n_points(), right: outcomes.len() });
    }
    check_outcomes(outcomes)?;
    let incidence: Vec<f64> = cover
        .sets
        .iter()
        .map(|s| s.iter().map(|&i| outcomes[i] as f64).sum::<f64>() / s.len().max(1) as f64)
        .collect();
    let mut q = vec![0.0; cover.n_points()];
    for (s, p) in cover.sets.iter().zip(&incidence) {
        for &i in s {
            q[i] += p;
        }
    }
    for (i, v) in q.iter_mut().enumerate() {
        *v /= cover.multiplicity(i) as f64;
    }
    Ok(q)
}

/// Area under the ROC curve as the Mann–Whitney statistic, ties counted ½.
pub fn auroc(scores: &[f64], labels: &[u8]) -> Result<f64, EvalError> {
    if scores.len() != labels.len() {
        return Err(EvalError::LengthMismatch { left: scores.len(), right: labels.len() });
    }
    check_outcomes(labels)?;
    let n1 = labels.iter().filter(|&&y| y == 1).count();
    let n0 = labels.len() - n1;
    if n1 == 0 || n0 == 0 {
        return Err(EvalError::DegenerateLabels);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // sum of midranks (1-based) of the positives
    let mut rank_sum = 0.0;
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && scores[order[end]] == scores[order[start]] {
            end += 1;
        }
        let mid = (start + 1 + end) as f64 / 2.0;
        let pos = order[start..end].iter().filter(|&&i| labels[i] == 1).count();
        rank_sum += mid * pos as f64;
        start = end;
    }
    let u = rank_sum - (n1 * (n1 + 1)) as f64 / 2.0;
    Ok(u / (n1 as f64 * n0 as f64))
}
