//! Slow, direct reference implementations used as test oracles.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lastfirst::space::DissimilaritySpace;

pub type Matrix = Vec<Vec<f64>>;

/// Euclidean points in the plane; integer grids give ties, `dup` forces repeats.
pub fn random_points(seed: u64, n: usize, grid: bool, dup: bool) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            if grid {
                vec![rng.random_range(0..7) as f64, rng.random_range(0..7) as f64]
            } else {
                vec![rng.random::<f64>(), rng.random::<f64>()]
            }
        })
        .collect();
    if dup && n > 2 {
        for _ in 0..(n / 4).max(1) {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            pts[j] = pts[i].clone();
        }
    }
    pts
}

/// The 100 spaces used by the equivalence checks: half with forced duplicates.
pub fn oracle_spaces() -> Vec<(u64, Vec<Vec<f64>>)> {
    (0..100u64)
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + s);
            let n = rng.random_range(2..=40);
            (s, random_points(s, n, s % 4 < 2, s % 2 == 0))
        })
        .collect()
}

pub fn matrix(points: &[Vec<f64>]) -> Matrix {
    points
        .iter()
        .map(|p| {
            points
                .iter()
                .map(|q| p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
                .collect()
        })
        .collect()
}

pub fn space_of(points: &[Vec<f64>]) -> DissimilaritySpace {
    DissimilaritySpace::euclidean(points).unwrap()
}

pub fn colocated(d: &Matrix, x: usize, y: usize) -> bool {
    d[x][y] == 0.0 && d[y][x] == 0.0
}

/// Points co-located with some member of `ls`.
pub fn closure(d: &Matrix, ls: &[usize]) -> Vec<bool> {
    (0..d.len()).map(|x| ls.iter().any(|&l| colocated(d, l, x))).collect()
}

/// `q̌(x, y)`: points strictly nearer to `x` than `y` is.
pub fn q_check(d: &Matrix, x: usize, y: usize) -> usize {
    (0..d.len()).filter(|&z| d[x][z] < d[x][y]).count()
}

/// `q̂(x, y)`: points at most as near to `x` as `y` is.
pub fn q_hat(d: &Matrix, x: usize, y: usize) -> usize {
    (0..d.len()).filter(|&z| d[x][z] <= d[x][y]).count()
}

pub fn min_dist(d: &Matrix, ls: &[usize], x: usize) -> f64 {
    ls.iter().map(|&l| d[l][x]).fold(f64::INFINITY, f64::min)
}

pub fn min_rank(d: &Matrix, ls: &[usize], x: usize) -> usize {
    ls.iter().map(|&l| q_check(d, l, x)).min().unwrap()
}

/// `max_x min_ℓ d(ℓ, x)`.
pub fn cover_radius(d: &Matrix, ls: &[usize]) -> f64 {
    (0..d.len()).map(|x| min_dist(d, ls, x)).fold(0.0, f64::max)
}

/// Least `k` with `⋃_ℓ {x : q̌(ℓ,x) ≤ k} = X`.
pub fn cover_cardinality(d: &Matrix, ls: &[usize]) -> usize {
    (0..d.len()).map(|x| min_rank(d, ls, x)).max().unwrap()
}

/// Maxmin candidates: points outside `cl(L)` farthest from `L`.
pub fn maxmin_candidates(d: &Matrix, ls: &[usize]) -> Vec<usize> {
    let cl = closure(d, ls);
    let out: Vec<usize> = (0..d.len()).filter(|&x| !cl[x]).collect();
    let best = out.iter().map(|&x| min_dist(d, ls, x)).fold(f64::NEG_INFINITY, f64::max);
    out.into_iter().filter(|&x| min_dist(d, ls, x) == best).collect()
}

/// Lastfirst candidates: `X ∖ N_{K−1}(L)` with `K` the covering cardinality.
///
/// `K = 0` with uncovered points only happens when some `d(ℓ, x) = 0 < d(x, ℓ)`;
/// then every point outside `cl(L)` is a candidate.
pub fn lastfirst_candidates(d: &Matrix, ls: &[usize]) -> Vec<usize> {
    let k = cover_cardinality(d, ls);
    let cl = closure(d, ls);
    if k == 0 {
        return (0..d.len()).filter(|&x| !cl[x]).collect();
    }
    (0..d.len()).filter(|&x| ls.iter().all(|&l| q_check(d, l, x) > k - 1)).collect()
}

/// Neighborhood count sequence `(|{y ∈ ys : q̌(x,y) ≤ k}|)_{k=0..N−1}`.
pub fn out_sequence(d: &Matrix, x: usize, ys: &[usize]) -> Vec<usize> {
    (0..d.len()).map(|k| ys.iter().filter(|&&y| q_check(d, x, y) <= k).count()).collect()
}

/// Revlex: `a < b` iff at the first difference `a` is larger.
pub fn revlex_less(a: &[usize], b: &[usize]) -> bool {
    match a.iter().zip(b).find(|(p, q)| p != q) {
        Some((p, q)) => p > q,
        None => false,
    }
}

pub fn chebyshev_maxmin(d: &Matrix) -> usize {
    let ecc: Vec<f64> = d.iter().map(|r| r.iter().copied().fold(0.0, f64::max)).collect();
    let best = ecc.iter().copied().fold(f64::INFINITY, f64::min);
    ecc.iter().position(|&e| e == best).unwrap()
}

/// First point whose sequence over `X ∖ {x}` is revlex-minimal.
pub fn chebyshev_lastfirst(d: &Matrix) -> usize {
    let n = d.len();
    let seqs: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            let others: Vec<usize> = (0..n).filter(|&y| y != x).collect();
            out_sequence(d, x, &others)
        })
        .collect();
    let mut best = 0;
    for x in 1..n {
        if revlex_less(&seqs[x], &seqs[best]) {
            best = x;
        }
    }
    best
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Ties {
    First,
    Refine,
}

fn sorted_profile<T: PartialOrd + Copy>(mut v: Vec<T>) -> Vec<T> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Brute-force maxmin: landmarks and per-step covering radii.
pub fn brute_maxmin(d: &Matrix, seed: usize, num: usize, ties: Ties) -> (Vec<usize>, Vec<f64>) {
    let mut ls = vec![seed];
    let mut radii = vec![cover_radius(d, &ls)];
    while ls.len() < num && closure(d, &ls).contains(&false) {
        let cands = maxmin_candidates(d, &ls);
        let pick = match ties {
            Ties::First => cands[0],
            Ties::Refine => {
                let prof = |x: usize| sorted_profile(ls.iter().map(|&l| d[l][x]).collect());
                let mut best = cands[0];
                for &c in &cands[1..] {
                    if prof(c).partial_cmp(&prof(best)) == Some(std::cmp::Ordering::Greater) {
                        best = c;
                    }
                }
                best
            }
        };
        ls.push(pick);
        radii.push(cover_radius(d, &ls));
    }
    (ls, radii)
}

/// Brute-force lastfirst: landmarks and per-step covering cardinalities.
pub fn brute_lastfirst(d: &Matrix, seed: usize, num: usize, ties: Ties) -> (Vec<usize>, Vec<usize>) {
    let mut ls = vec![seed];
    let mut ks = vec![cover_cardinality(d, &ls)];
    while ls.len() < num && closure(d, &ls).contains(&false) {
        let cands = lastfirst_candidates(d, &ls);
        let pick = match ties {
            Ties::First => cands[0],
            Ties::Refine => {
                let prof = |x: usize| sorted_profile(ls.iter().map(|&l| q_check(d, l, x)).collect());
                let mut best = cands[0];
                for &c in &cands[1..] {
                    if prof(c) > prof(best) {
                        best = c;
                    }
                }
                best
            }
        };
        ls.push(pick);
        ks.push(cover_cardinality(d, &ls));
    }
    (ls, ks)
}

/// Mann–Whitney AUROC by comparing every positive with every negative.
pub fn pairwise_auroc(scores: &[f64], labels: &[u8]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..scores.len() {
        for j in 0..scores.len() {
            if labels[i] == 1 && labels[j] == 0 {
                den += 1.0;
                if scores[i] > scores[j] {
                    num += 1.0;
                } else if scores[i] == scores[j] {
                    num += 0.5;
                }
            }
        }
    }
    num / den
}

/// Rank over GF(2) of a dense 0/1 matrix by Gaussian elimination.
pub fn gf2_rank(mut m: Vec<Vec<u8>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c] == 1) else { continue };
        m.swap(rank, p);
        for r in 0..rows {
            if r != rank && m[r][c] == 1 {
                for k in 0..cols {
                    m[r][k] ^= m[rank][k];
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Betti numbers from dense boundary matrices of a complex given by
/// simplices per dimension.
pub fn dense_betti(simplices: &[Vec<Vec<usize>>], max_dim: usize) -> Vec<usize> {
    let boundary = |d: usize| -> usize {
        if d == 0 || d >= simplices.len() {
            return 0;
        }
        let faces = &simplices[d - 1];
        let m: Vec<Vec<u8>> = faces
            .iter()
            .map(|f| {
                simplices[d]
                    .iter()
                    .map(|s| u8::from(f.iter().all(|v| s.contains(v)) && f.len() + 1 == s.len()))
                    .collect()
            })
            .collect();
        gf2_rank(m)
    };
    (0..=max_dim)
        .map(|i| simplices.get(i).map_or(0, Vec::len) - boundary(i) - boundary(i + 1))
        .collect()
}

use lastfirst::landmark::{
    build_cover, lastfirst_landmarks, maxmin_landmarks, CoverKind, CoverParam, LandmarkResult, SamplerConfig,
    SeedRule, TieRule,
};
use lastfirst::space::RankVariant;

fn radii_of(r: &LandmarkResult) -> Vec<f64> {
    r.steps.iter().map(|s| s.cover_param.as_f64()).collect()
}

fn cards_of(r: &LandmarkResult) -> Vec<usize> {
    r.steps
        .iter()
        .map(|s| match s.cover_param {
            CoverParam::Cardinality(k) => k,
            CoverParam::Radius(r) => panic!("lastfirst step carries a radius {r}"),
        })
        .collect()
}

/// Both samplers against the brute-force versions, for several seeds, tie
/// rules and landmark counts.
pub fn check_oracle_equivalence(points: &[Vec<f64>]) -> Result<(), String> {
    let d = matrix(points);
    let space = space_of(points);
    let n = d.len();
    let seeds = [(SeedRule::FirstIndex, 0, 0), (SeedRule::Chebyshev, chebyshev_maxmin(&d), chebyshev_lastfirst(&d))];
    for (rule, mm_seed, lf_seed) in seeds {
        for (tie, ties) in [(TieRule::FirstIndex, Ties::First), (TieRule::IterativeRefinement, Ties::Refine)] {
            for num in [1, 2, n.div_ceil(3), usize::MAX] {
                let mut cfg = SamplerConfig::maxmin().with_seed_rule(rule).with_tie_rule(tie);
                cfg.num_landmarks = Some(num);
                let got = maxmin_landmarks(&space, &cfg).map_err(|e| e.to_string())?;
                let (ls, radii) = brute_maxmin(&d, mm_seed, num, ties);
                if got.landmarks != ls || radii_of(&got) != radii {
                    return Err(format!(
                        "maxmin {rule:?}/{tie:?}/num={num}: got {:?} {:?}, oracle {ls:?} {radii:?}",
                        got.landmarks,
                        radii_of(&got)
                    ));
                }
                let mut cfg = SamplerConfig::lastfirst().with_seed_rule(rule).with_tie_rule(tie);
                cfg.num_landmarks = Some(num);
                let got = lastfirst_landmarks(&space, &cfg).map_err(|e| e.to_string())?;
                let (ls, ks) = brute_lastfirst(&d, lf_seed, num, ties);
                if got.landmarks != ls || cards_of(&got) != ks {
                    return Err(format!(
                        "lastfirst {rule:?}/{tie:?}/num={num}: got {:?} {:?}, oracle {ls:?} {ks:?}",
                        got.landmarks,
                        cards_of(&got)
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Every prefix of both exhaustive sequences covers at its own parameter and
/// fails one realized value below it.
pub fn check_cover_minimality(points: &[Vec<f64>]) -> Result<(), String> {
    let d = matrix(points);
    let space = space_of(points);
    let n = d.len();
    let mm = maxmin_landmarks(&space, &SamplerConfig::maxmin().exhaustive()).map_err(|e| e.to_string())?;
    let lf = lastfirst_landmarks(&space, &SamplerConfig::lastfirst().exhaustive()).map_err(|e| e.to_string())?;
    let mut realized: Vec<f64> = d.iter().flatten().copied().collect();
    realized.sort_by(f64::total_cmp);
    realized.dedup();
    for m in 1..=mm.len() {
        let pre = mm.prefix(m);
        let eps = pre.final_radius().unwrap();
        let cover = build_cover(&space, &pre, CoverKind::Ball, 0.0, 0.0).map_err(|e| format!("maxmin m={m}: {e}"))?;
        if cover.parameter != eps {
            return Err(format!("maxmin m={m}: cover radius {} but ε = {eps}", cover.parameter));
        }
        if let Some(&below) = realized.iter().rev().find(|&&v| v < eps) {
            let covered = (0..n).all(|x| pre.landmarks.iter().any(|&l| d[l][x] <= below));
            if covered {
                return Err(format!("maxmin m={m}: radius {below} < ε = {eps} still covers"));
            }
        }
    }
    for m in 1..=lf.len() {
        let pre = lf.prefix(m);
        let k = pre.final_cardinality().unwrap();
        let cover =
            build_cover(&space, &pre, CoverKind::Neighborhood, 0.0, 0.0).map_err(|e| format!("lastfirst m={m}: {e}"))?;
        if cover.parameter != k as f64 {
            return Err(format!("lastfirst m={m}: cover bound {} but k_min = {k}", cover.parameter));
        }
        if k > 0 {
            let covered = (0..n).all(|x| {
                pre.landmarks.iter().any(|&l| space.out_rank(RankVariant::Check, l, x).unwrap() < k)
            });
            if covered {
                return Err(format!("lastfirst m={m}: bound {} < k_min = {k} still covers", k - 1));
            }
        }
    }
    Ok(())
}

/// The four points a = 1, b = 2, c = d = 4 on a line.
pub fn line_abcd() -> DissimilaritySpace {
    DissimilaritySpace::euclidean(&[[1.0], [2.0], [4.0], [4.0]]).unwrap()
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, expected {want:?}"))
    }
}

/// Ranks, neighborhoods, rank sequences and the lastfirst order on `line_abcd`.
pub fn check_worked_example() -> Result<(), String> {
    use lastfirst::space::{revlex_compare, Direction};
    use RankVariant::{Check, Hat};
    let x = line_abcd();
    let e = |r: Result<usize, lastfirst::space::SpaceError>| r.unwrap();
    let (a, b, c, d) = (0, 1, 2, 3);
    expect("q̌(a,c)", e(x.out_rank(Check, a, c)), 2)?;
    expect("q̌(c,a)", e(x.out_rank(Check, c, a)), 3)?;
    let out3 = |p| x.k_neighborhood(Check, Direction::Out, p, 3).unwrap();
    let in3 = |p| x.k_neighborhood(Check, Direction::In, p, 3).unwrap();
    // N_3 with the rank bound read as the 3-nearest neighborhood
    expect("N_3(a) as 3-NN", x.nearest_neighborhood(a, 3).unwrap(), vec![a, b, c, d])?;
    expect("N_3(c) as 3-NN", x.nearest_neighborhood(c, 3).unwrap(), vec![b, c, d])?;
    expect("N_3^-(a) as 3-NN", x.nearest_in_neighborhood(a, 3).unwrap(), vec![a, b])?;
    expect("N_3^-(c) as 3-NN", x.nearest_in_neighborhood(c, 3).unwrap(), vec![a, b, c, d])?;
    expect("N_3^+(a)", out3(a), vec![a, b, c, d])?;
    expect("N_3^+(c)", out3(c), vec![a, b, c, d])?;
    expect("N_3^-(a)", in3(a), vec![a, b, c, d])?;
    let seq = |v, dir, p, r: Option<&[usize]>| x.rank_sequence(v, dir, p, r).unwrap().0;
    expect("N•+(a)", seq(Check, Direction::Out, a, None), vec![1, 2, 4, 4])?;
    expect("N•+(c)", seq(Check, Direction::Out, c, None), vec![2, 2, 3, 4])?;
    expect("N•-(a)", seq(Check, Direction::In, a, None), vec![1, 2, 2, 4])?;
    expect("N•-(c)", seq(Check, Direction::In, c, None), vec![2, 2, 4, 4])?;
    expect("N•+(a,{b,c,d})", seq(Check, Direction::Out, a, Some(&[b, c, d])), vec![0, 1, 3, 3])?;
    expect("N•+(b,{a,c,d})", seq(Check, Direction::Out, b, Some(&[a, c, d])), vec![0, 1, 3, 3])?;
    expect("N•+(c,{a,b,d})", seq(Check, Direction::Out, c, Some(&[a, b, d])), vec![1, 1, 2, 3])?;
    expect("N•+(d,{a,b,c})", seq(Check, Direction::Out, d, Some(&[a, b, c])), vec![1, 1, 2, 3])?;
    expect("N•-(a,{c})", seq(Check, Direction::In, a, Some(&[c])), vec![0, 0, 0, 1])?;
    expect("N•-(b,{c})", seq(Check, Direction::In, b, Some(&[c])), vec![0, 0, 1, 1])?;

    expect("q̂(b,c)", e(x.out_rank(Hat, b, c)), 4)?;
    expect("q̂(c,b)", e(x.out_rank(Hat, c, b)), 3)?;
    expect("q̂(a,a)", e(x.out_rank(Hat, a, a)), 1)?;
    expect("q̂(c,c)", e(x.out_rank(Hat, c, c)), 2)?;
    for (p, q) in [(a, c), (b, c), (c, a), (d, a)] {
        expect("q̂ maximum", e(x.out_rank(Hat, p, q)), 4)?;
    }
    let hat = |dir, p| x.k_neighborhood(Hat, dir, p, 2).unwrap();
    expect("N̂_2^+(b)", hat(Direction::Out, b), vec![a, b])?;
    expect("N̂_2^+(c)", hat(Direction::Out, c), vec![c, d])?;
    expect("N̂_2^-(b)", hat(Direction::In, b), vec![a, b])?;
    expect("N̂_2^-(c)", hat(Direction::In, c), vec![c, d])?;
    expect("N̂•+(b)", seq(Hat, Direction::Out, b, None), vec![1, 2, 2, 4])?;
    expect("N̂•+(c)", seq(Hat, Direction::Out, c, None), vec![0, 2, 3, 4])?;
    expect("N̂•-(b)", seq(Hat, Direction::In, b, None), vec![1, 2, 4, 4])?;
    expect("N̂•-(c)", seq(Hat, Direction::In, c, None), vec![0, 2, 2, 4])?;

    // seed tie: revlex minima of N•+(x, X ∖ {x})
    let seqs: Vec<Vec<usize>> = (0..4)
        .map(|p| {
            let others: Vec<usize> = (0..4).filter(|&q| q != p).collect();
            seq(Check, Direction::Out, p, Some(&others))
        })
        .collect();
    let minima: Vec<usize> = (0..4)
        .filter(|&p| seqs.iter().all(|s| revlex_compare(&seqs[p], s).unwrap() != std::cmp::Ordering::Greater))
        .collect();
    expect("seed tie", minima, vec![c, d])?;
    let lf = lastfirst_landmarks(&x, &SamplerConfig::lastfirst().exhaustive()).unwrap();
    expect("exhaustive lastfirst", lf.landmarks, vec![c, a, b])?;
    Ok(())
}
