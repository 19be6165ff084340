use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    argmax_outside, CoverParam, LandmarkError, LandmarkResult, Procedure, SamplerConfig, SeedRule,
    Step, TieRule,
};
use crate::space::{compute_rank_row, ranks_below, DissimilaritySpace, RankVariant, SpaceError};

/// Run the procedure named in `config`.
pub fn landmarks(
    space: &DissimilaritySpace,
    config: &SamplerConfig,
) -> Result<LandmarkResult, LandmarkError> {
    match config.procedure {
        Procedure::Maxmin => maxmin_landmarks(space, config),
        Procedure::Lastfirst => lastfirst_landmarks(space, config),
        Procedure::Random => random_landmarks(space, config),
    }
}

/// Choose the first landmark.
pub fn seed(
    space: &DissimilaritySpace,
    rule: SeedRule,
    procedure: Procedure,
    variant: RankVariant,
    rng: &mut impl Rng,
) -> Result<usize, LandmarkError> {
    let n = space.len();
    if n == 0 {
        return Err(SpaceError::EmptyInput.into());
    }
    Ok(match rule {
        SeedRule::FirstIndex => 0,
        SeedRule::Random => rng.random_range(0..n),
        SeedRule::Chebyshev => match procedure {
            Procedure::Lastfirst => lastfirst_center(space, variant),
            Procedure::Maxmin | Procedure::Random => eccentricity_center(space),
        },
    })
}

fn eccentricity_center(space: &DissimilaritySpace) -> usize {
    (0..space.len())
        .into_par_iter()
        .map(|x| (space.row(x).iter().copied().fold(0.0, f64::max), x))
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .map(|(_, x)| x)
        .unwrap_or(0)
}

// Revlex-minimal out-rank sequence over X∖{x} is the lex-minimal sorted
// out-rank row once x's own (least) rank is dropped.
fn lastfirst_center(space: &DissimilaritySpace, variant: RankVariant) -> usize {
    (0..space.len())
        .into_par_iter()
        .map(|x| {
            let mut r = compute_rank_row(space.row(x), variant);
            r.sort_unstable();
            r.remove(0);
            (r, x)
        })
        .reduce_with(|a, b| match a.0.cmp(&b.0).then(a.1.cmp(&b.1)) {
            Ordering::Greater => b,
            _ => a,
        })
        .map(|(_, x)| x)
        .unwrap_or(0)
}

/// Pick one point from a tied candidate set given the landmarks so far.
pub fn select(
    space: &DissimilaritySpace,
    rule: TieRule,
    procedure: Procedure,
    variant: RankVariant,
    candidates: &[usize],
    landmarks: &[usize],
    rng: &mut impl Rng,
) -> Result<usize, LandmarkError> {
    for &c in candidates {
        space.check_index(c)?;
    }
    match candidates {
        [] => Err(LandmarkError::EmptyCandidates),
        [only] => Ok(*only),
        _ => Ok(match rule {
            TieRule::FirstIndex => *candidates.iter().min().unwrap(),
            TieRule::Random => candidates[rng.random_range(0..candidates.len())],
            TieRule::IterativeRefinement => refine(space, procedure, variant, candidates, landmarks),
        }),
    }
}

// Lex-max over the ascending landmark-to-candidate profile: farthest from the
// nearest landmark, then from the second nearest, and so on.
fn refine(
    space: &DissimilaritySpace,
    procedure: Procedure,
    variant: RankVariant,
    candidates: &[usize],
    landmarks: &[usize],
) -> usize {
    let mut sorted = candidates.to_vec();
    sorted.sort_unstable();
    match procedure {
        Procedure::Lastfirst => {
            let rows: Vec<&[u32]> = landmarks.iter().map(|&l| space.rank_row(variant, l)).collect();
            best_profile(&sorted, |c| {
                let mut p: Vec<u32> = rows.iter().map(|r| r[c]).collect();
                p.sort_unstable();
                p
            }, |a, b| a.cmp(b))
        }
        Procedure::Maxmin | Procedure::Random => best_profile(&sorted, |c| {
            let mut p: Vec<f64> = landmarks.iter().map(|&l| space.dissim(l, c)).collect();
            p.sort_unstable_by(f64::total_cmp);
            p
        }, |a: &Vec<f64>, b: &Vec<f64>| {
            a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
        }),
    }
}

fn best_profile<T>(
    sorted: &[usize],
    profile: impl Fn(usize) -> T,
    cmp: impl Fn(&T, &T) -> Ordering,
) -> usize {
    let mut best = sorted[0];
    let mut best_p = profile(best);
    for &c in &sorted[1..] {
        let p = profile(c);
        if cmp(&p, &best_p) == Ordering::Greater {
            best = c;
            best_p = p;
        }
    }
    best
}

struct Budget {
    target: usize,
    closed: Vec<bool>,
    n_closed: usize,
}

impl Budget {
    fn new(space: &DissimilaritySpace, num: Option<usize>) -> Self {
        let uniq = space.colocation().num_classes();
        Budget {
            target: num.unwrap_or(1).min(uniq),
            closed: vec![false; space.len()],
            n_closed: 0,
        }
    }

    fn close(&mut self, space: &DissimilaritySpace, point: usize) {
        for &q in space.colocation().class_members(point) {
            if !self.closed[q] {
                self.closed[q] = true;
                self.n_closed += 1;
            }
        }
    }

    fn exhausted(&self) -> bool {
        self.n_closed == self.closed.len()
    }
}

/// Maxmin landmarks: each new landmark is a point farthest from those chosen.
///
/// Stops once every point is co-located with a landmark, or once at least
/// `num_landmarks` are chosen and the covering radius is at most `radius`.
pub fn maxmin_landmarks(
    space: &DissimilaritySpace,
    config: &SamplerConfig,
) -> Result<LandmarkResult, LandmarkError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let variant = config.rank_variant;
    let first = seed(space, config.seed_rule, Procedure::Maxmin, variant, &mut rng)?;
    let eps = config.radius.unwrap_or(f64::INFINITY);
    let mut budget = Budget::new(space, config.num_landmarks);

    let mut near: Vec<f64> = space.row(first).to_vec();
    let mut chosen = vec![first];
    budget.close(space, first);
    let mut steps = Vec::new();
    loop {
        let radius = near.iter().copied().fold(0.0, f64::max);
        steps.push(Step { landmark: *chosen.last().unwrap(), cover_param: CoverParam::Radius(radius) });
        if budget.exhausted() || (chosen.len() >= budget.target && radius <= eps) {
            break;
        }
        let candidates = argmax_outside(&near, &budget.closed, |a, b| a.total_cmp(b));
        let next = select(space, config.tie_rule, Procedure::Maxmin, variant, &candidates, &chosen, &mut rng)?;
        for (m, &d) in near.iter_mut().zip(space.row(next)) {
            if d < *m {
                *m = d;
            }
        }
        chosen.push(next);
        budget.close(space, next);
    }
    let last = steps.last().unwrap().cover_param.as_f64();
    let cover_param = CoverParam::Radius(config.radius.filter(|&r| r >= last).unwrap_or(last));
    Ok(LandmarkResult {
        procedure: Procedure::Maxmin,
        rank_variant: variant,
        n_points: space.len(),
        landmarks: chosen,
        steps,
        cover_param,
    })
}

/// Lastfirst landmarks: each new landmark is a point reached last by
/// neighborhoods of common rank bound about those chosen.
///
/// Stops once every point is co-located with a landmark, or once at least
/// `num_landmarks` are chosen and the covering rank bound is at most
/// `cardinality`.
pub fn lastfirst_landmarks(
    space: &DissimilaritySpace,
    config: &SamplerConfig,
) -> Result<LandmarkResult, LandmarkError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let variant = config.rank_variant;
    let first = seed(space, config.seed_rule, Procedure::Lastfirst, variant, &mut rng)?;
    let k_stop = config.cardinality.unwrap_or(usize::MAX);
    let mut budget = Budget::new(space, config.num_landmarks);

    // least in-rank of each point from the current landmarks
    let mut near: Vec<u32> = compute_rank_row(space.row(first), variant);
    let mut chosen = vec![first];
    budget.close(space, first);
    let mut steps = Vec::new();
    loop {
        let k_min = near.iter().copied().max().unwrap_or(0) as usize;
        steps.push(Step { landmark: *chosen.last().unwrap(), cover_param: CoverParam::Cardinality(k_min) });
        if budget.exhausted() || (chosen.len() >= budget.target && k_min <= k_stop) {
            break;
        }
        let candidates = argmax_outside(&near, &budget.closed, |a, b| a.cmp(b));
        let next = select(space, config.tie_rule, Procedure::Lastfirst, variant, &candidates, &chosen, &mut rng)?;
        // only ranks below the current maximum can lower any entry
        for (x, q) in ranks_below(space.row(next), variant, k_min) {
            if q < near[x] {
                near[x] = q;
            }
        }
        chosen.push(next);
        budget.close(space, next);
    }
    let last = steps.last().unwrap().cover_param.as_f64() as usize;
    let cover_param = CoverParam::Cardinality(config.cardinality.filter(|&k| k >= last).unwrap_or(last));
    Ok(LandmarkResult {
        procedure: Procedure::Lastfirst,
        rank_variant: variant,
        n_points: space.len(),
        landmarks: chosen,
        steps,
        cover_param,
    })
}

/// Uniform sample of `num_landmarks` co-location classes, without
/// replacement; each class is represented by its first member.
pub fn random_landmarks(
    space: &DissimilaritySpace,
    config: &SamplerConfig,
) -> Result<LandmarkResult, LandmarkError> {
    config.validate()?;
    if space.is_empty() {
        return Err(SpaceError::EmptyInput.into());
    }
    let classes = space.colocation().classes();
    let requested = config.num_landmarks.unwrap_or(1);
    let m = if requested == usize::MAX { classes.len() } else { requested };
    if m > classes.len() {
        return Err(LandmarkError::TooManyRequested { requested: m, available: classes.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.shuffle(&mut rng);
    let chosen: Vec<usize> = order[..m].iter().map(|&c| classes[c][0]).collect();

    let mut near = vec![f64::INFINITY; space.len()];
    let mut steps = Vec::with_capacity(m);
    for &l in &chosen {
        for (v, &d) in near.iter_mut().zip(space.row(l)) {
            if d < *v {
                *v = d;
            }
        }
        let radius = near.iter().copied().fold(0.0, f64::max);
        steps.push(Step { landmark: l, cover_param: CoverParam::Radius(radius) });
    }
    let cover_param = steps.last().unwrap().cover_param;
    Ok(LandmarkResult {
        procedure: Procedure::Random,
        rank_variant: config.rank_variant,
        n_points: space.len(),
        landmarks: chosen,
        steps,
        cover_param,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landmark::{covering_cardinality, covering_radius};

    // a = 1, b = 2, c = 4, d = 4
    fn line() -> DissimilaritySpace {
        DissimilaritySpace::euclidean(&[[1.0], [2.0], [4.0], [4.0]]).unwrap()
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0)
    }

    #[test]
    fn seeds() {
        let s = line();
        let v = RankVariant::Check;
        assert_eq!(seed(&s, SeedRule::Chebyshev, Procedure::Lastfirst, v, &mut rng()).unwrap(), 2);
        let three = DissimilaritySpace::euclidean(&[[0.0], [1.0], [2.0]]).unwrap();
        assert_eq!(seed(&three, SeedRule::Chebyshev, Procedure::Maxmin, v, &mut rng()).unwrap(), 1);
        let one = DissimilaritySpace::euclidean(&[[5.0]]).unwrap();
        for rule in [SeedRule::FirstIndex, SeedRule::Random, SeedRule::Chebyshev] {
            assert_eq!(seed(&one, rule, Procedure::Lastfirst, v, &mut rng()).unwrap(), 0);
        }
    }

    #[test]
    fn select_rules() {
        let s = line();
        let v = RankVariant::Check;
        let pick = |rule, c: &[usize]| select(&s, rule, Procedure::Maxmin, v, c, &[0], &mut rng());
        assert_eq!(pick(TieRule::FirstIndex, &[3, 2]).unwrap(), 2);
        assert_eq!(pick(TieRule::Random, &[1]).unwrap(), 1);
        assert!([2, 3].contains(&pick(TieRule::Random, &[2, 3]).unwrap()));
        assert_eq!(pick(TieRule::FirstIndex, &[]), Err(LandmarkError::EmptyCandidates));
    }

    #[test]
    fn refinement_uses_second_landmark() {
        // 2 and 3 are both 3 from landmark 0; 3 is farther from landmark 1
        let s = DissimilaritySpace::euclidean(&[[0.0], [6.0], [3.0], [-3.0]]).unwrap();
        let v = RankVariant::Check;
        let pick = select(&s, TieRule::IterativeRefinement, Procedure::Maxmin, v, &[2, 3], &[0, 1], &mut rng());
        assert_eq!(pick.unwrap(), 3);
        // identical profiles fall back to the smallest index
        let s = DissimilaritySpace::euclidean(&[[0.0], [10.0], [5.0], [3.0], [7.0]]).unwrap();
        let pick = select(&s, TieRule::IterativeRefinement, Procedure::Maxmin, v, &[4, 3], &[0, 1, 2], &mut rng());
        assert_eq!(pick.unwrap(), 3);
    }

    #[test]
    fn maxmin_trace() {
        let s = line();
        let cfg = SamplerConfig::maxmin().with_num(2).with_seed_rule(SeedRule::FirstIndex);
        let r = maxmin_landmarks(&s, &cfg).unwrap();
        assert_eq!(r.landmarks, [0, 2]);
        assert_eq!(r.final_radius(), Some(1.0));
        let one = maxmin_landmarks(&s, &cfg.clone().with_num(1)).unwrap();
        assert_eq!(one.landmarks, [0]);
        assert_eq!(one.final_radius(), Some(3.0));
        let all = maxmin_landmarks(&s, &cfg.exhaustive()).unwrap();
        assert_eq!(all.landmarks, [0, 2, 1]);
        assert_eq!(all.final_radius(), Some(0.0));
    }

    #[test]
    fn maxmin_radius_stop() {
        let s = line();
        let r = maxmin_landmarks(&s, &SamplerConfig::maxmin().with_radius(1.0).with_seed_rule(SeedRule::FirstIndex))
            .unwrap();
        assert_eq!(r.landmarks, [0, 2]);
        assert_eq!(r.cover_param, CoverParam::Radius(1.0));
        assert!(covering_radius(&s, &r.landmarks).unwrap() <= 1.0);
    }

    #[test]
    fn lastfirst_trace() {
        let s = line();
        let r = lastfirst_landmarks(&s, &SamplerConfig::lastfirst().exhaustive()).unwrap();
        assert_eq!(r.landmarks, [2, 0, 1]);
        let one = lastfirst_landmarks(&s, &SamplerConfig::lastfirst().with_num(1)).unwrap();
        assert_eq!(one.landmarks, [2]);
        assert_eq!(one.final_cardinality(), Some(3));
        for (i, st) in r.steps.iter().enumerate() {
            let k = covering_cardinality(&s, &r.landmarks[..=i], RankVariant::Check).unwrap();
            assert_eq!(st.cover_param, CoverParam::Cardinality(k));
        }
    }

    #[test]
    fn lastfirst_cardinality_stop() {
        let s = line();
        let r = lastfirst_landmarks(&s, &SamplerConfig::lastfirst().with_cardinality(1)).unwrap();
        assert_eq!(r.landmarks, [2, 0]);
        assert_eq!(r.cover_param, CoverParam::Cardinality(1));
    }

    #[test]
    fn random_sampling() {
        let s = line();
        let r = random_landmarks(&s, &SamplerConfig::random(3).with_rng_seed(9)).unwrap();
        let mut l = r.landmarks.clone();
        l.sort_unstable();
        assert_eq!(l, [0, 1, 2]);
        assert_eq!(r, random_landmarks(&s, &SamplerConfig::random(3).with_rng_seed(9)).unwrap());
        assert_eq!(
            random_landmarks(&s, &SamplerConfig::random(4)),
            Err(LandmarkError::TooManyRequested { requested: 4, available: 3 })
        );
    }
}
