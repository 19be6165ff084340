use serde::{Deserialize, Serialize};

use super::{check_outcomes, EvalError};
use crate::space::DissimilaritySpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum WeightKind {
    /// `1/d`.
    InverseDistance,
    /// `max(0, 1 − d/d_max)`, `d_max` the bandwidth or the largest distance.
    Triangle,
    /// `exp(−d²/2σ²)`, `σ` the bandwidth or the median distance.
    Gaussian,
    /// `1/(1 + r)`, `r` the number of landmarks strictly nearer.
    Rank,
}

impl WeightKind {
    pub fn name(self) -> &'static str {
        match self {
            WeightKind::InverseDistance => "inverse-distance",
            WeightKind::Triangle => "triangle",
            WeightKind::Gaussian => "gaussian",
            WeightKind::Rank => "rank",
        }
    }

    pub const ALL: [WeightKind; 4] =
        [WeightKind::InverseDistance, WeightKind::Triangle, WeightKind::Gaussian, WeightKind::Rank];
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightingScheme {
    pub kind: WeightKind,
    pub bandwidth: Option<f64>,
}

impl WeightingScheme {
    pub fn new(kind: WeightKind) -> Self {
        WeightingScheme { kind, bandwidth: None }
    }

    pub fn with_bandwidth(mut self, h: f64) -> Self {
        self.bandwidth = Some(h);
        self
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        match self.bandwidth {
            Some(h) if !(h > 0.0 && h.is_finite()) => Err(EvalError::InvalidBandwidth(h)),
            _ => Ok(()),
        }
    }

    /// Weights for landmarks at distances `dists` (all positive).
    pub fn weights(&self, dists: &[f64]) -> Vec<f64> {
        match self.kind {
            WeightKind::InverseDistance => dists.iter().map(|&d| 1.0 / d).collect(),
            WeightKind::Triangle => {
                let dmax = self.bandwidth.unwrap_or_else(|| dists.iter().copied().fold(0.0, f64::max));
                dists.iter().map(|&d| if dmax > 0.0 { (1.0 - d / dmax).max(0.0) } else { 1.0 }).collect()
            }
            WeightKind::Gaussian => {
                let sigma = self.bandwidth.unwrap_or_else(|| median(dists));
                dists
                    .iter()
                    .map(|&d| if sigma > 0.0 { (-d * d / (2.0 * sigma * sigma)).exp() } else { 1.0 })
                    .collect()
            }
            WeightKind::Rank => dists
                .iter()
                .map(|&d| 1.0 / (1.0 + dists.iter().filter(|&&e| e < d).count() as f64))
                .collect(),
        }
    }
}

fn median(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let mut s = v.to_vec();
    s.sort_unstable_by(f64::total_cmp);
    let h = s.len() / 2;
    if s.len() % 2 == 1 {
        s[h]
    } else {
        (s[h - 1] + s[h]) / 2.0
    }
}

/// Per-landmark outcome incidence among its `k` nearest training points,
/// for `k = 1..=max_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnProfile {
    pub landmarks: Vec<usize>,
    pub max_k: usize,
    /// `table[j][k − 1]` is `p_k(ℓ_j)`.
    pub table: Vec<Vec<f64>>,
}

impl KnnProfile {
    pub fn get(&self, landmark: usize, k: usize) -> f64 {
        self.table[landmark][k - 1]
    }
}

/// `p_k(ℓ)`: mean outcome over training points `x` with `q̌(ℓ, x) ≤ k − 1`
/// within `train`, so ties at the `k`-th distance are all included.
///
/// `outcomes` is indexed by point of `space`.
pub fn landmark_knn_profile(
    space: &DissimilaritySpace,
    landmarks: &[usize],
    train: &[usize],
    outcomes: &[u8],
    max_k: usize,
) -> Result<KnnProfile, EvalError> {
    if outcomes.len() != space.len() {
        return Err(EvalError::LengthMismatch { left: space.len(), right: outcomes.len() });
    }
    check_outcomes(outcomes)?;
    if landmarks.is_empty() {
        return Err(EvalError::NoLandmarks);
    }
    if max_k == 0 || train.len() < max_k {
        return Err(EvalError::InsufficientTraining { train: train.len(), needed: max_k.max(1) });
    }
    for &i in landmarks.iter().chain(train) {
        space.check_index(i)?;
    }
    let table = landmarks
        .iter()
        .map(|&l| {
            let mut near: Vec<(f64, u8)> = train.iter().map(|&x| (space.dissim(l, x), outcomes[x])).collect();
            near.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
            let mut prefix = Vec::with_capacity(near.len() + 1);
            prefix.push(0u32);
            for &(_, y) in &near {
                prefix.push(prefix.last().unwrap() + y as u32);
            }
            // end[k−1]: one past the last point tied with the k-th nearest
            let mut out = vec![0.0; max_k];
            let mut end = 0;
            for k in 1..=max_k {
                end = end.max(k);
                while end < near.len() && near[end].0 == near[k - 1].0 {
                    end += 1;
                }
                out[k - 1] = prefix[end] as f64 / end as f64;
            }
            out
        })
        .collect();
    Ok(KnnProfile { landmarks: landmarks.to_vec(), max_k, table })
}

/// Weighted average of the landmark profiles at `k` for point `x`.
///
/// A landmark co-located with `x` (within the space tolerance) passes its
/// profile value through unchanged; several are averaged. If every weight
/// vanishes the plain mean is used.
pub fn inn_predict(
    space: &DissimilaritySpace,
    x: usize,
    profile: &KnnProfile,
    k: usize,
    scheme: &WeightingScheme,
) -> Result<f64, EvalError> {
    if profile.landmarks.is_empty() {
        return Err(EvalError::NoLandmarks);
    }
    if k == 0 || k > profile.max_k {
        return Err(EvalError::KOutOfRange { k, max: profile.max_k });
    }
    scheme.validate()?;
    space.check_index(x)?;
    let dists: Vec<f64> = profile.landmarks.iter().map(|&l| space.dissim(x, l)).collect();
    let weights = contact_weights(&dists, space.tolerance(), scheme);
    Ok(weighted_mean(&weights, profile.table.iter().map(|row| row[k - 1])))
}

/// Weights with co-located landmarks taking all the mass.
pub(crate) fn contact_weights(dists: &[f64], tolerance: f64, scheme: &WeightingScheme) -> Vec<f64> {
    if dists.iter().any(|&d| d <= tolerance) {
        return dists.iter().map(|&d| if d <= tolerance { 1.0 } else { 0.0 }).collect();
    }
    scheme.weights(dists)
}

pub(crate) fn weighted_mean(weights: &[f64], values: impl Iterator<Item = f64> + Clone) -> f64 {
    let total: f64 = weights.iter().sum();
    if total > 0.0 && total.is_finite() {
        weights.iter().zip(values).map(|(w, v)| w * v).sum::<f64>() / total
    } else {
        let n = weights.len() as f64;
        values.sum::<f64>() / n
    }
}
