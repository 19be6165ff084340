//! Time both samplers on noisy circles of growing size.
//!
//! `cargo run --release --example benchmark`

use lastfirst::bench::measure;
use lastfirst::landmark::{landmarks, SamplerConfig, SeedRule};
use lastfirst::space::DissimilaritySpace;
use lastfirst::synth::gen_noisy_circle;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in [250, 500, 1000, 2000] {
        let points = gen_noisy_circle(n, 0.1, n as u64)?;
        let mut secs = Vec::new();
        for cfg in [SamplerConfig::maxmin(), SamplerConfig::lastfirst()] {
            let cfg = cfg.exhaustive().with_seed_rule(SeedRule::FirstIndex);
            let mut best = f64::INFINITY;
            for _ in 0..3 {
                let space = DissimilaritySpace::euclidean(&points)?;
                let (r, m) = measure(|| landmarks(&space, &cfg));
                r?;
                best = best.min(m.seconds);
            }
            secs.push(best);
        }
        println!("n={n:>5}  maxmin {:.4}s  lastfirst {:.4}s  ratio {:.2}", secs[0], secs[1], secs[1] / secs[0]);
    }
    Ok(())
}
