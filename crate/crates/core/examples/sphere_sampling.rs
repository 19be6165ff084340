//! Uniform, skewed and boosted samples on the sphere, and where landmarks land.

use std::f64::consts::PI;

use lastfirst::landmark::{landmarks, Procedure, SamplerConfig};
use lastfirst::space::DissimilaritySpace;
use lastfirst::synth::{gen_sphere, polar_angle, SphereMode, SphereSampleParams};

/// Share of points in the southern hemisphere, polar angle above π/2.
fn south(points: &[Vec<f64>], ids: impl Iterator<Item = usize>) -> f64 {
    let (mut s, mut n) = (0, 0);
    for i in ids {
        n += 1;
        if polar_angle(&points[i]) > PI / 2.0 {
            s += 1;
        }
    }
    s as f64 / n as f64
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for mode in [SphereMode::Uniform, SphereMode::Skewed, SphereMode::UniformBoosted, SphereMode::SkewedBoosted] {
        let points = gen_sphere(&SphereSampleParams { n: 600, mode, rng_seed: 9, ..Default::default() })?;
        let space = DissimilaritySpace::euclidean(&points)?;
        let uniq = space.colocation().num_classes();
        print!("{mode:?}: {uniq} distinct points, {:.2} south", south(&points, 0..points.len()));
        for procedure in [Procedure::Maxmin, Procedure::Lastfirst] {
            let r = landmarks(&space, &SamplerConfig::new(procedure).with_num(40))?;
            print!(", {procedure} landmarks {:.2} south", south(&points, r.landmarks.iter().copied()));
        }
        println!();
    }
    Ok(())
}
