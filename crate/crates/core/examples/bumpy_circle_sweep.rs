//! How long a nerve keeps the homology of a circle as landmarks are added.

use lastfirst::complex::{landmark_persistence_sweep, BettiVector, SweepPlan};
use lastfirst::landmark::{SamplerConfig, SeedRule};
use lastfirst::space::DissimilaritySpace;
use lastfirst::synth::{gen_bumpy_circle, BumpyCircleParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let points = gen_bumpy_circle(&BumpyCircleParams { n: 60, rng_seed: 11, ..Default::default() })?;
    let space = DissimilaritySpace::euclidean(&points)?;
    let circle = BettiVector(vec![1, 1]);

    for ext_mult in [0.0, 1.0, 2.0] {
        let plan = SweepPlan::new(circle.clone(), 30).with_replicates(10).with_extension(ext_mult, 0.0);
        for cfg in [SamplerConfig::maxmin(), SamplerConfig::lastfirst()] {
            let cfg = cfg.with_seed_rule(SeedRule::Random).with_rng_seed(5);
            let sweep = landmark_persistence_sweep(&space, &cfg, &plan)?;
            println!(
                "ext_mult {ext_mult}: {:<9} median dominance {:>4}, detected in {}/10",
                sweep.procedure.to_string(),
                sweep.median_dominance(),
                sweep.detections()
            );
        }
    }
    Ok(())
}
