mod common;

use common::*;
use lastfirst::space::{revlex_compare, Direction, DissimilaritySpace, GowerValue, RankVariant, SpaceError};
use proptest::prelude::*;

#[test]
fn four_points_on_a_line() {
    check_worked_example().unwrap();
}

#[test]
fn construction_errors() {
    let empty: Vec<Vec<f64>> = Vec::new();
    assert_eq!(DissimilaritySpace::from_rows(&empty, true, 0.0).unwrap_err(), SpaceError::EmptyInput);
    assert!(matches!(
        DissimilaritySpace::from_rows(&[vec![0.0, 1.0], vec![1.0]], true, 0.0),
        Err(SpaceError::NonSquare { .. })
    ));
    assert!(matches!(
        DissimilaritySpace::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]], false, 0.0),
        Err(SpaceError::NegativeEntry { row: 0, col: 1 })
    ));
    assert!(matches!(
        DissimilaritySpace::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]], true, 0.0),
        Err(SpaceError::AsymmetryUnderSymmetricFlag { .. })
    ));
    assert!(matches!(
        DissimilaritySpace::from_rows(&[vec![2.0, 1.0], vec![1.0, 0.0]], true, 0.0),
        Err(SpaceError::RelativeRankViolation { row: 0, col: 1 })
    ));
    assert!(matches!(
        DissimilaritySpace::from_rows(&[vec![0.0, f64::NAN], vec![1.0, 0.0]], false, 0.0),
        Err(SpaceError::NonFinite { .. })
    ));
    assert!(matches!(DissimilaritySpace::euclidean(&[vec![0.0, 1.0], vec![1.0]]), Err(SpaceError::RaggedRows { .. })));
    assert_eq!(DissimilaritySpace::cosine(&[[1.0, 0.0], [0.0, 0.0]]).unwrap_err(), SpaceError::ZeroVector { row: 1 });
    assert_eq!(line_abcd().with_tolerance(-1.0).unwrap_err(), SpaceError::InvalidTolerance);
    assert!(matches!(line_abcd().out_rank(RankVariant::Check, 0, 9), Err(SpaceError::IndexOutOfBounds { .. })));
}

#[test]
fn cosine_and_gower() {
    let s = DissimilaritySpace::cosine(&[[1.0, 0.0], [2.0, 0.0], [0.0, 3.0], [-1.0, 0.0]]).unwrap();
    assert_eq!(s.dissim(0, 1), 0.0);
    assert!(s.colocated(0, 1));
    assert!((s.dissim(0, 2) - 1.0).abs() < 1e-15);
    assert!((s.dissim(0, 3) - 2.0).abs() < 1e-15);

    use GowerValue::{Cat, Num};
    let rows = vec![
        vec![Num(0.0), Cat("x".into())],
        vec![Num(5.0), Cat("x".into())],
        vec![Num(10.0), Cat("y".into())],
    ];
    let g = DissimilaritySpace::gower(&rows, None).unwrap();
    assert!((g.dissim(0, 1) - 0.25).abs() < 1e-15);
    assert!((g.dissim(0, 2) - 1.0).abs() < 1e-15);
    assert!((g.dissim(1, 2) - 0.75).abs() < 1e-15);
    let wide = DissimilaritySpace::gower(&rows, Some(&[Some(20.0), None])).unwrap();
    assert!((wide.dissim(0, 1) - 0.125).abs() < 1e-15);
    let flat = vec![vec![Num(1.0)], vec![Num(1.0)]];
    assert_eq!(DissimilaritySpace::gower(&flat, None).unwrap_err(), SpaceError::ZeroRange { column: 0 });
    let mixed = vec![vec![Num(1.0)], vec![Cat("a".into())]];
    assert_eq!(DissimilaritySpace::gower(&mixed, None).unwrap_err(), SpaceError::MixedTypeColumn { column: 0 });
}

#[test]
fn tolerance_merges_near_points() {
    let s = DissimilaritySpace::euclidean(&[[0.0], [1e-9], [1.0]]).unwrap();
    assert_eq!(s.colocation().num_classes(), 3);
    let s = s.with_tolerance(1e-6).unwrap();
    assert_eq!(s.colocation().num_classes(), 2);
    assert_eq!(s.colocation().class_members(1), &[0, 1]);
}

#[test]
fn subspaces_and_revlex() {
    let x = line_abcd();
    let sub = x.subspace(&[2, 0]).unwrap();
    assert_eq!(sub.len(), 2);
    assert_eq!(sub.dissim(0, 1), 3.0);
    assert!(x.subspace(&[]).is_err());
    assert_eq!(revlex_compare(&[1, 2], &[1, 1]).unwrap(), std::cmp::Ordering::Less);
    assert!(revlex_compare(&[1], &[1, 1]).is_err());
}

proptest! {
    #[test]
    fn ranks_match_counting(seed in any::<u64>(), n in 1usize..30, grid in any::<bool>()) {
        let pts = random_points(seed, n, grid, true);
        let d = matrix(&pts);
        let s = space_of(&pts);
        for x in 0..n {
            for y in 0..n {
                prop_assert_eq!(s.out_rank(RankVariant::Check, x, y).unwrap(), q_check(&d, x, y));
                prop_assert_eq!(s.out_rank(RankVariant::Hat, x, y).unwrap(), q_hat(&d, x, y));
                prop_assert_eq!(s.in_rank(RankVariant::Check, x, y).unwrap(), q_check(&d, y, x));
            }
            let seq = s.rank_sequence(RankVariant::Check, Direction::Out, x, None).unwrap();
            let all: Vec<usize> = (0..n).collect();
            prop_assert_eq!(seq.0, out_sequence(&d, x, &all));
            // q̌(x,x) = 0 and q̂(x,x) = multiplicity of x
            prop_assert_eq!(s.out_rank(RankVariant::Check, x, x).unwrap(), 0);
            prop_assert_eq!(s.out_rank(RankVariant::Hat, x, x).unwrap(), s.colocation().class_members(x).len());
            for k in 0..n {
                let nb = s.k_neighborhood(RankVariant::Check, Direction::Out, x, k).unwrap();
                let want: Vec<usize> = (0..n).filter(|&y| q_check(&d, x, y) <= k).collect();
                prop_assert_eq!(nb, want);
                let nn = s.nearest_neighborhood(x, k + 1).unwrap();
                prop_assert!(nn.len() > k);
            }
        }
    }

    #[test]
    fn rank_space_orders_like_the_original(seed in any::<u64>(), n in 1usize..25) {
        let s = space_of(&random_points(seed, n, true, true));
        let r = s.rank_space(RankVariant::Check);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let before = s.dissim(x, y) < s.dissim(x, z);
                    prop_assert_eq!(before, r.dissim(x, y) < r.dissim(x, z));
                }
            }
        }
        prop_assert_eq!(r.colocation().num_classes(), s.colocation().num_classes());
    }
}
