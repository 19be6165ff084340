use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{betti, nerve, BettiVector, ComplexError};
use crate::landmark::{build_cover, landmarks, CoverKind, LandmarkResult, Procedure, SamplerConfig};
use crate::space::DissimilaritySpace;
use crate::synth::derive_seed;

/// How a landmark-count sweep is run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub target: BettiVector,
    pub m_max: usize,
    pub replicates: usize,
    pub ext_mult: f64,
    pub ext_add: f64,
    /// Simplices are kept up to this dimension; Betti numbers are reported
    /// below it.
    pub dim_cap: usize,
}

impl SweepPlan {
    pub fn new(target: BettiVector, m_max: usize) -> Self {
        SweepPlan { target, m_max, replicates: 1, ext_mult: 0.0, ext_add: 0.0, dim_cap: 2 }
    }

    pub fn with_replicates(mut self, r: usize) -> Self {
        self.replicates = r;
        self
    }

    pub fn with_extension(mut self, mult: f64, add: f64) -> Self {
        self.ext_mult = mult;
        self.ext_add = add;
        self
    }

    pub fn with_dim_cap(mut self, cap: usize) -> Self {
        self.dim_cap = cap;
        self
    }
}

/// Betti numbers of the nerve built from the first `m` landmarks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub replicate: usize,
    pub m: usize,
    pub betti: BettiVector,
    pub covered: bool,
}

/// Inclusive run of landmark counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominanceRange {
    pub start: usize,
    pub end: usize,
}

#[allow(clippy::len_without_is_empty)]
impl DominanceRange {
    /// Number of landmark counts in the run.
    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceSweep {
    pub procedure: Procedure,
    pub ext_mult: f64,
    pub ext_add: f64,
    pub target: BettiVector,
    /// Ordered by replicate, then `m`.
    pub records: Vec<SweepRecord>,
    /// Longest matching run per replicate, `None` if the target never appears.
    pub dominance: Vec<Option<DominanceRange>>,
}

impl PersistenceSweep {
    pub fn dominance_lengths(&self) -> Vec<usize> {
        self.dominance.iter().map(|d| d.map_or(0, |r| r.len())).collect()
    }

    pub fn median_dominance(&self) -> f64 {
        median_length(&self.dominance_lengths())
    }

    /// Replicates in which the target appears for at least one `m`.
    pub fn detections(&self) -> usize {
        self.dominance.iter().filter(|d| d.is_some()).count()
    }
}

pub fn median_length(values: &[usize]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_unstable();
    let h = v.len() / 2;
    if v.len() % 2 == 1 {
        v[h] as f64
    } else {
        (v[h - 1] + v[h]) as f64 / 2.0
    }
}

/// Longest run of consecutive `m` whose Betti numbers match `target`,
/// earliest on ties. `records` must be sorted by `m`.
pub fn dominance_range(records: &[SweepRecord], target: &BettiVector) -> Option<DominanceRange> {
    let mut best: Option<DominanceRange> = None;
    let mut run: Option<DominanceRange> = None;
    for r in records {
        if r.betti.matches(target) {
            run = Some(match run {
                Some(cur) if cur.end + 1 == r.m => DominanceRange { start: cur.start, end: r.m },
                _ => DominanceRange { start: r.m, end: r.m },
            });
            let cur = run.unwrap();
            if best.is_none_or(|b| cur.len() > b.len()) {
                best = Some(cur);
            }
        } else {
            run = None;
        }
    }
    best
}

fn default_kind(procedure: Procedure) -> CoverKind {
    match procedure {
        Procedure::Lastfirst => CoverKind::Neighborhood,
        Procedure::Maxmin | Procedure::Random => CoverKind::Ball,
    }
}

/// Sweep the prefixes `1..=plan.m_max` of one landmark sequence.
///
/// Each prefix gets its own least covering parameter before extension.
pub fn sweep_prefixes(
    space: &DissimilaritySpace,
    result: &LandmarkResult,
    plan: &SweepPlan,
    replicate: usize,
) -> Result<Vec<SweepRecord>, ComplexError> {
    let kind = default_kind(result.procedure);
    let top = plan.dim_cap.checked_sub(1).ok_or(ComplexError::InvalidDimCap)?;
    (1..=plan.m_max.min(result.len()))
        .into_par_iter()
        .map(|m| {
            let prefix = result.prefix(m);
            let cover = build_cover(space, &prefix, kind, plan.ext_mult, plan.ext_add)?;
            let complex = nerve(&cover, plan.dim_cap)?;
            Ok(SweepRecord { replicate, m, betti: betti(&complex, top)?, covered: true })
        })
        .collect()
}

/// Sweep landmark counts for `plan.replicates` runs of `config`, varying the
/// rng seed between replicates (so only random seed or tie rules differ).
pub fn landmark_persistence_sweep(
    space: &DissimilaritySpace,
    config: &SamplerConfig,
    plan: &SweepPlan,
) -> Result<PersistenceSweep, ComplexError> {
    let uniq = space.colocation().num_classes();
    if plan.m_max == 0 || plan.m_max > uniq {
        return Err(ComplexError::InvalidSweepRange { m_max: plan.m_max, uniq });
    }
    let mut records = Vec::new();
    let mut dominance = Vec::new();
    for r in 0..plan.replicates {
        let cfg = config
            .clone()
            .with_rng_seed(derive_seed(config.rng_seed, r as u64))
            .with_num(plan.m_max);
        let cfg = SamplerConfig { radius: None, cardinality: None, ..cfg };
        let result = landmarks(space, &cfg)?;
        let rows = sweep_prefixes(space, &result, plan, r)?;
        dominance.push(dominance_range(&rows, &plan.target));
        records.extend(rows);
    }
    Ok(PersistenceSweep {
        procedure: config.procedure,
        ext_mult: plan.ext_mult,
        ext_add: plan.ext_add,
        target: plan.target.clone(),
        records,
        dominance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landmark::SeedRule;
    use crate::synth::gen_noisy_circle;

    fn rec(m: usize, b: &[usize]) -> SweepRecord {
        SweepRecord { replicate: 0, m, betti: BettiVector(b.to_vec()), covered: true }
    }

    #[test]
    fn longest_run_earliest_on_ties() {
        let t = BettiVector(vec![1, 1]);
        let rs = [rec(1, &[1, 0]), rec(2, &[1, 1]), rec(3, &[1, 1]), rec(4, &[2, 0]), rec(5, &[1, 1]), rec(6, &[1, 1])];
        assert_eq!(dominance_range(&rs, &t), Some(DominanceRange { start: 2, end: 3 }));
        assert_eq!(dominance_range(&rs[..1], &t), None);
    }

    #[test]
    fn median_values() {
        assert_eq!(median_length(&[3, 1, 2]), 2.0);
        assert_eq!(median_length(&[4, 1, 2, 3]), 2.5);
        assert_eq!(median_length(&[]), 0.0);
    }

    #[test]
    fn first_prefix_is_a_point() {
        let pts = gen_noisy_circle(60, 0.0, 5).unwrap();
        let s = DissimilaritySpace::euclidean(&pts).unwrap();
        let plan = SweepPlan::new(BettiVector(vec![1, 1]), 30).with_replicates(2);
        let cfg = SamplerConfig::lastfirst().with_seed_rule(SeedRule::Random);
        let sw = landmark_persistence_sweep(&s, &cfg, &plan).unwrap();
        assert_eq!(sw.records.len(), 60);
        assert_eq!(sw.records[0].betti, BettiVector(vec![1, 0]));
        assert_eq!(sw.detections(), 2);
        let bad = SweepPlan::new(BettiVector(vec![1, 1]), 61);
        assert!(matches!(landmark_persistence_sweep(&s, &cfg, &bad), Err(ComplexError::InvalidSweepRange { .. })));
    }
}
