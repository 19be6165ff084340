//! Ranks, neighborhoods and landmark orders on four points of a line.
//!
//! Run with `cargo run --example worked_example`.

use lastfirst::landmark::{SamplerConfig, SeedRule};
use lastfirst::space::{Direction, DissimilaritySpace, RankVariant};

const NAMES: [&str; 4] = ["a", "b", "c", "d"];

fn names(ids: &[usize]) -> String {
    let v: Vec<&str> = ids.iter().map(|&i| NAMES[i]).collect();
    format!("{{{}}}", v.join(","))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // c and d are co-located
    let x = DissimilaritySpace::euclidean(&[[1.0], [2.0], [4.0], [4.0]])?;

    for variant in [RankVariant::Check, RankVariant::Hat] {
        println!("{variant:?} ranks");
        for i in 0..x.len() {
            println!("  {}: {:?}", NAMES[i], x.rank_row(variant, i));
        }
    }

    println!("q̌(a,c) = {}", x.out_rank(RankVariant::Check, 0, 2)?);
    println!("q̌(c,a) = {}", x.out_rank(RankVariant::Check, 2, 0)?);
    for p in [0, 2] {
        let out = x.nearest_neighborhood(p, 3)?;
        let inn = x.nearest_in_neighborhood(p, 3)?;
        println!("N_3({}) = {}   N_3^-({}) = {}", NAMES[p], names(&out), NAMES[p], names(&inn));
    }
    for (label, dir) in [("out", Direction::Out), ("in", Direction::In)] {
        for p in 0..x.len() {
            let s = x.rank_sequence(RankVariant::Check, dir, p, None)?;
            println!("{label}-rank sequence of {}: {:?}", NAMES[p], s.values());
        }
    }

    let lf = lastfirst::landmark::lastfirst_landmarks(&x, &SamplerConfig::lastfirst().exhaustive())?;
    println!("lastfirst, exhaustive: {}", names(&lf.landmarks));
    for step in &lf.steps {
        println!("  {} -> cover cardinality {:?}", NAMES[step.landmark], step.cover_param);
    }

    let cfg = SamplerConfig::maxmin().exhaustive().with_seed_rule(SeedRule::FirstIndex);
    let mm = lastfirst::landmark::maxmin_landmarks(&x, &cfg)?;
    println!("maxmin from a, exhaustive: {}", names(&mm.landmarks));
    Ok(())
}
