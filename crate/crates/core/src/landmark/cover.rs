use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{covering_cardinality, covering_radius, CoverParam, LandmarkError, LandmarkResult};
use crate::space::DissimilaritySpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CoverKind {
    /// Closed balls `{x : d(ℓ, x) ≤ r}`.
    Ball,
    /// Rank neighborhoods `{x : q(ℓ, x) ≤ k}`.
    Neighborhood,
    /// Sets supplied directly.
    #[value(skip)]
    Explicit,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoverError {
    #[error("landmark result covers {expected} points but the space has {actual}")]
    MismatchedSpace { expected: usize, actual: usize },
    #[error("extension factors must be nonnegative, got mult={mult}, add={add}")]
    InvalidExtension { mult: f64, add: f64 },
    #[error("point {0} lies in no cover set")]
    Uncovered(usize),
    #[error("cover set {set} references point {point} outside 0..{n}")]
    PointOutOfRange { set: usize, point: usize, n: usize },
    #[error(transparent)]
    Landmark(#[from] LandmarkError),
}

/// A finite cover of the points with equal-split fuzzy membership.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    pub kind: CoverKind,
    pub ext_mult: f64,
    pub ext_add: f64,
    /// Effective radius or rank bound after extension.
    pub parameter: f64,
    pub landmarks: Vec<usize>,
    pub sets: Vec<Vec<usize>>,
    n_points: usize,
    /// Number of sets containing each point.
    counts: Vec<usize>,
}

impl Cover {
    /// Wrap hand-built sets, checking that they cover `0..n_points`.
    pub fn from_sets(n_points: usize, sets: Vec<Vec<usize>>) -> Result<Self, CoverError> {
        Self::assemble(CoverKind::Explicit, 0.0, 0.0, f64::NAN, Vec::new(), n_points, sets)
    }

    fn assemble(
        kind: CoverKind,
        ext_mult: f64,
        ext_add: f64,
        parameter: f64,
        landmarks: Vec<usize>,
        n_points: usize,
        mut sets: Vec<Vec<usize>>,
    ) -> Result<Self, CoverError> {
        for set in &mut sets {
            set.sort_unstable();
            set.dedup();
        }
        let mut counts = vec![0usize; n_points];
        for (j, set) in sets.iter().enumerate() {
            for &i in set {
                if i >= n_points {
                    return Err(CoverError::PointOutOfRange { set: j, point: i, n: n_points });
                }
                counts[i] += 1;
            }
        }
        if let Some(i) = counts.iter().position(|&c| c == 0) {
            return Err(CoverError::Uncovered(i));
        }
        Ok(Cover { kind, ext_mult, ext_add, parameter, landmarks, sets, n_points, counts })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn num_sets(&self) -> usize {
        self.sets.len()
    }

    /// Number of sets containing point `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.counts[i]
    }

    /// `u_ij`: `1 / multiplicity(i)` if `i` lies in set `j`, else 0.
    pub fn membership(&self, i: usize, j: usize) -> f64 {
        if self.sets[j].binary_search(&i).is_ok() {
            1.0 / self.counts[i] as f64
        } else {
            0.0
        }
    }

    /// The full `n × m` membership matrix, row-major.
    pub fn membership_matrix(&self) -> Vec<Vec<f64>> {
        let mut u = vec![vec![0.0; self.sets.len()]; self.n_points];
        for (j, set) in self.sets.iter().enumerate() {
            for &i in set {
                u[i][j] = 1.0 / self.counts[i] as f64;
            }
        }
        u
    }
}

/// Radius `r(1 + a) + b`.
pub(crate) fn extend_radius(r: f64, mult: f64, add: f64) -> f64 {
    r * (1.0 + mult) + add
}

/// Rank bound `⌈k(1 + a)⌉ + ⌈b⌉`.
pub(crate) fn extend_cardinality(k: usize, mult: f64, add: f64) -> usize {
    // guard against 10 * 1.1 = 11.000000000000002 rounding up to 12
    let scaled = (k as f64 * (1.0 + mult) - 1e-9).ceil().max(k as f64);
    scaled as usize + (add - 1e-9).ceil().max(0.0) as usize
}

/// Cover of `space` by balls or neighborhoods about the landmarks of `result`,
/// extended by a multiplicative factor `mult` and an additive term `add`.
///
/// The base parameter is the one carried by `result` when it is of the
/// requested kind, otherwise the least parameter of that kind covering the
/// space; either way the unextended sets already cover every point.
pub fn build_cover(
    space: &DissimilaritySpace,
    result: &LandmarkResult,
    kind: CoverKind,
    mult: f64,
    add: f64,
) -> Result<Cover, CoverError> {
    if result.n_points != space.len() {
        return Err(CoverError::MismatchedSpace { expected: result.n_points, actual: space.len() });
    }
    if !(mult >= 0.0 && add >= 0.0) {
        return Err(CoverError::InvalidExtension { mult, add });
    }
    let ls = &result.landmarks;
    for &l in ls {
        space.check_index(l).map_err(LandmarkError::from)?;
    }
    let (parameter, sets): (f64, Vec<Vec<usize>>) = match kind {
        CoverKind::Ball => {
            let r = match result.cover_param {
                CoverParam::Radius(r) => r,
                CoverParam::Cardinality(_) => covering_radius(space, ls)?,
            };
            let r = extend_radius(r, mult, add);
            let sets = ls
                .iter()
                .map(|&l| (0..space.len()).filter(|&x| space.dissim(l, x) <= r).collect())
                .collect();
            (r, sets)
        }
        CoverKind::Neighborhood => {
            let variant = result.rank_variant;
            let k = match result.cover_param {
                CoverParam::Cardinality(k) => k,
                CoverParam::Radius(_) => covering_cardinality(space, ls, variant)?,
            };
            let k = extend_cardinality(k, mult, add);
            let sets = ls
                .iter()
                .map(|&l| {
                    let row = space.rank_row(variant, l);
                    (0..space.len()).filter(|&x| row[x] as usize <= k).collect()
                })
                .collect();
            (k as f64, sets)
        }
        CoverKind::Explicit => return Err(CoverError::InvalidExtension { mult, add }),
    };
    Cover::assemble(kind, mult, add, parameter, ls.clone(), space.len(), sets)
}
