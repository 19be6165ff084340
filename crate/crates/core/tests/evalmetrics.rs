mod common;

use std::sync::Mutex;

use common::pairwise_auroc;
use lastfirst::evalmetrics::{
    assign_folds, auroc, cover_risk_scores, inn_predict, landmark_knn_profile, mpc, nested_cv, nested_cv_observed,
    temporal_cv, CvPlan, EvalError, Stage, WeightKind, WeightingScheme,
};
use lastfirst::landmark::{Cover, SamplerConfig};
use lastfirst::space::DissimilaritySpace;
use lastfirst::synth::{gen_planted_cohort, rng_for};
use proptest::prelude::*;
use rand::Rng;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12
}

#[test]
fn mpc_reference_values() {
    let crisp = Cover::from_sets(4, vec![vec![0, 1], vec![2, 3]]).unwrap();
    assert!(close(mpc(&crisp).unwrap(), 1.0));
    let shared = Cover::from_sets(3, vec![vec![0, 1, 2]; 3]).unwrap();
    assert!(close(mpc(&shared).unwrap(), 0.0));
    let half = Cover::from_sets(2, vec![vec![0, 1], vec![1]]).unwrap();
    assert!(close(mpc(&half).unwrap(), 0.5));
    let single = Cover::from_sets(2, vec![vec![0, 1]]).unwrap();
    assert_eq!(mpc(&single), Err(EvalError::SingleSet));
}

#[test]
fn mpc_drops_when_membership_spreads() {
    let a = Cover::from_sets(4, vec![vec![0, 1], vec![2, 3], vec![3]]).unwrap();
    let b = Cover::from_sets(4, vec![vec![0, 1], vec![2, 3], vec![1, 3]]).unwrap();
    let (ma, mb) = (mpc(&a).unwrap(), mpc(&b).unwrap());
    assert!(mb < ma && (0.0..=1.0).contains(&mb));
}

#[test]
fn risk_scores() {
    let cover = Cover::from_sets(6, vec![vec![0, 1, 2, 3, 4], vec![4, 5]]).unwrap();
    // incidences 0.2 and 0.5
    let y = [1, 0, 0, 0, 0, 1];
    let q = cover_risk_scores(&cover, &y).unwrap();
    assert!(close(q[0], 0.2));
    assert!(close(q[4], 0.35));
    assert!(close(q[5], 0.5));
    let ones = cover_risk_scores(&cover, &[1; 6]).unwrap();
    assert!(ones.iter().all(|&v| close(v, 1.0)));
    assert!(matches!(cover_risk_scores(&cover, &[1; 5]), Err(EvalError::LengthMismatch { .. })));
}

#[test]
fn auroc_matches_pairwise_count() {
    for seed in 0..50 {
        let mut rng = rng_for(seed, 7);
        let n = rng.random_range(2..60);
        // coarse scores force ties
        let scores: Vec<f64> = (0..n).map(|_| f64::from(rng.random_range(0..6u8))).collect();
        let mut labels: Vec<u8> = (0..n).map(|_| rng.random_range(0..2u8)).collect();
        labels[0] = 0;
        labels[1] = 1;
        let got = auroc(&scores, &labels).unwrap();
        assert!(close(got, pairwise_auroc(&scores, &labels)), "seed {seed}");
    }
    assert!(close(auroc(&[0.1, 0.9], &[0, 1]).unwrap(), 1.0));
    assert!(close(auroc(&[3.0; 4], &[0, 1, 1, 0]).unwrap(), 0.5));
    assert_eq!(auroc(&[0.1, 0.2], &[1, 1]), Err(EvalError::DegenerateLabels));
}

fn planar(n: usize, seed: u64) -> (DissimilaritySpace, Vec<u8>) {
    let mut rng = rng_for(seed, 3);
    let pts: Vec<[f64; 2]> = (0..n).map(|_| [f64::from(rng.random_range(0..8u8)), rng.random()]).collect();
    let y = (0..n).map(|_| rng.random_range(0..2u8)).collect();
    (DissimilaritySpace::euclidean(&pts).unwrap(), y)
}

#[test]
fn knn_profile_matches_sort_and_average() {
    for seed in 0..10 {
        let (space, y) = planar(30, seed);
        let train: Vec<usize> = (0..30).filter(|i| i % 5 != 0).collect();
        let ls = [0, 5, 7];
        let max_k = 12;
        let p = landmark_knn_profile(&space, &ls, &train, &y, max_k).unwrap();
        for (j, &l) in ls.iter().enumerate() {
            for k in 1..=max_k {
                let mut ds: Vec<f64> = train.iter().map(|&x| space.dissim(l, x)).collect();
                ds.sort_by(f64::total_cmp);
                let cut = ds[k - 1];
                let inside: Vec<usize> = train.iter().copied().filter(|&x| space.dissim(l, x) <= cut).collect();
                let mean = inside.iter().map(|&x| f64::from(y[x])).sum::<f64>() / inside.len() as f64;
                assert!(close(p.get(j, k), mean), "seed {seed} landmark {l} k {k}");
            }
        }
        let full = landmark_knn_profile(&space, &[1], &train, &y, train.len()).unwrap();
        let global = train.iter().map(|&x| f64::from(y[x])).sum::<f64>() / train.len() as f64;
        assert!(close(full.get(0, train.len()), global));
    }
    let (space, y) = planar(10, 0);
    assert!(matches!(
        landmark_knn_profile(&space, &[0], &[1, 2], &y, 3),
        Err(EvalError::InsufficientTraining { .. })
    ));
}

#[test]
fn inn_prediction_formula() {
    let space = DissimilaritySpace::euclidean(&[[0.0], [1.0], [-3.0], [0.0]]).unwrap();
    // landmarks 1 and 2 at distances 1 and 3 from point 0
    let profile = lastfirst::evalmetrics::KnnProfile { landmarks: vec![1, 2], max_k: 1, table: vec![vec![0.0], vec![1.0]] };
    let p = inn_predict(&space, 0, &profile, 1, &WeightingScheme::new(WeightKind::InverseDistance)).unwrap();
    assert!(close(p, 0.25));
    for kind in WeightKind::ALL {
        let v = inn_predict(&space, 0, &profile, 1, &WeightingScheme::new(kind)).unwrap();
        assert!((0.0..=1.0).contains(&v));
    }
    // co-located with a landmark: its profile passes through
    let at = lastfirst::evalmetrics::KnnProfile { landmarks: vec![3, 1], max_k: 1, table: vec![vec![0.7], vec![0.1]] };
    assert!(close(inn_predict(&space, 0, &at, 1, &WeightingScheme::new(WeightKind::InverseDistance)).unwrap(), 0.7));
    let sym = DissimilaritySpace::euclidean(&[[0.0], [1.0], [-1.0]]).unwrap();
    let two = lastfirst::evalmetrics::KnnProfile { landmarks: vec![1, 2], max_k: 1, table: vec![vec![0.2], vec![0.6]] };
    for kind in WeightKind::ALL {
        assert!(close(inn_predict(&sym, 0, &two, 1, &WeightingScheme::new(kind)).unwrap(), 0.4), "{kind:?}");
    }
    assert!(matches!(inn_predict(&sym, 0, &two, 2, &WeightingScheme::new(WeightKind::Rank)), Err(EvalError::KOutOfRange { .. })));
}

#[test]
fn folds_partition_the_indices() {
    let idx: Vec<usize> = (0..37).collect();
    let folds = assign_folds(&idx, 6, 9, 0);
    let sizes: Vec<usize> = folds.iter().map(Vec::len).collect();
    assert_eq!(sizes, vec![7, 6, 6, 6, 6, 6]);
    let mut all: Vec<usize> = folds.concat();
    all.sort_unstable();
    assert_eq!(all, idx);
    assert_eq!(assign_folds(&idx, 6, 9, 0), folds);
    let even = assign_folds(&(0..36).collect::<Vec<_>>(), 6, 1, 0);
    assert!(even.iter().all(|f| f.len() == 6));
}

#[test]
fn tuning_never_sees_the_outer_fold() {
    let c = gen_planted_cohort(144, 12.0, 1, 2).unwrap();
    let space = DissimilaritySpace::euclidean(&c.points).unwrap();
    let plan = CvPlan::default().with_neighborhood_size(40).with_rng_seed(5);
    let events = Mutex::new(Vec::new());
    let schemes: Vec<WeightingScheme> = WeightKind::ALL.iter().map(|&k| WeightingScheme::new(k)).collect();
    let rows = nested_cv_observed(
        &space,
        &c.outcomes,
        &SamplerConfig::maxmin(),
        &plan,
        &[8],
        &schemes,
        &|ev| events.lock().unwrap().push((ev.stage, ev.outer, ev.inner, ev.indices.to_vec())),
    )
    .unwrap();
    assert_eq!(rows.len(), 36);
    let events = events.into_inner().unwrap();
    let outer = assign_folds(&(0..144).collect::<Vec<_>>(), 6, 5, 0);
    for (stage, i, j, idx) in &events {
        let test = &outer[*i];
        match stage {
            Stage::Train | Stage::Tune => assert!(idx.iter().all(|x| !test.contains(x)), "{stage:?} ({i},{j})"),
            Stage::Evaluate => assert_eq!(idx, test),
        }
    }
    for (i, j) in (0..6).flat_map(|i| (0..6).map(move |j| (i, j))) {
        let get = |s: Stage| events.iter().find(|e| e.0 == s && e.1 == i && e.2 == j).unwrap().3.clone();
        let (train, tune) = (get(Stage::Train), get(Stage::Tune));
        assert!(train.iter().all(|x| !tune.contains(x)));
        assert_eq!(train.len() + tune.len() + outer[i].len(), 144);
    }
}

#[test]
fn nested_cv_is_deterministic_and_informative() {
    let c = gen_planted_cohort(180, 12.0, 1, 11).unwrap();
    let space = DissimilaritySpace::euclidean(&c.points).unwrap();
    let plan = CvPlan::default().with_neighborhood_size(60).with_rng_seed(1);
    let schemes = [WeightingScheme::new(WeightKind::Gaussian)];
    let cfg = SamplerConfig::lastfirst();
    let a = nested_cv(&space, &c.outcomes, &cfg, &plan, &[12, 20], &schemes).unwrap();
    assert_eq!(a.len(), 72);
    assert_eq!(a, nested_cv(&space, &c.outcomes, &cfg, &plan, &[12, 20], &schemes).unwrap());
    let mean = a.iter().map(|r| r.auroc).sum::<f64>() / a.len() as f64;
    assert!(mean > 0.75, "mean AUROC {mean}");
}

#[test]
fn temporal_plan() {
    let c = gen_planted_cohort(240, 12.0, 3, 4).unwrap();
    let space = DissimilaritySpace::euclidean(&c.points).unwrap();
    let plan = CvPlan::default().with_neighborhood_size(40).with_rng_seed(2);
    let rows = temporal_cv(&space, &c.outcomes, &c.periods, &SamplerConfig::maxmin(), &plan, &[10]).unwrap();
    // two evaluated periods, six parts each
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r.period >= 1 && r.part < 6 && r.k >= 1 && r.k <= 40));
    let two = gen_planted_cohort(160, 12.0, 2, 4).unwrap();
    let space2 = DissimilaritySpace::euclidean(&two.points).unwrap();
    let rows2 = temporal_cv(&space2, &two.outcomes, &two.periods, &SamplerConfig::maxmin(), &plan, &[10]).unwrap();
    assert!(rows2.iter().all(|r| r.period == 1));
    let one = vec![0; 240];
    assert_eq!(
        temporal_cv(&space, &c.outcomes, &one, &SamplerConfig::maxmin(), &plan, &[10]),
        Err(EvalError::SinglePeriod)
    );
    // a single-class evaluation period
    let mut y = c.outcomes.clone();
    for (i, p) in c.periods.iter().enumerate() {
        if *p == 2 {
            y[i] = 0;
        }
    }
    assert!(matches!(
        temporal_cv(&space, &y, &c.periods, &SamplerConfig::maxmin(), &plan, &[10]),
        Err(EvalError::DegenerateFold { .. })
    ));
}

proptest! {
    #[test]
    fn auroc_ignores_monotone_transforms(scores in prop::collection::vec(-5.0f64..5.0, 4..40), seed in any::<u64>()) {
        let mut rng = rng_for(seed, 0);
        let mut labels: Vec<u8> = scores.iter().map(|_| rng.random_range(0..2u8)).collect();
        labels[0] = 0;
        labels[1] = 1;
        let a = auroc(&scores, &labels).unwrap();
        let t: Vec<f64> = scores.iter().map(|s| (s * 0.7).exp() + 3.0).collect();
        prop_assert!(close(a, auroc(&t, &labels).unwrap()));
        prop_assert!((0.0..=1.0).contains(&a));
    }

    #[test]
    fn weights_are_nonnegative_and_nonincreasing(mut d in prop::collection::vec(0.01f64..10.0, 1..12)) {
        d.sort_by(f64::total_cmp);
        for kind in WeightKind::ALL {
            let w = WeightingScheme::new(kind).weights(&d);
            prop_assert!(w.iter().all(|&v| v >= 0.0));
            prop_assert!(w.windows(2).all(|p| p[1] <= p[0]), "{:?} {:?}", kind, w);
        }
    }
}
