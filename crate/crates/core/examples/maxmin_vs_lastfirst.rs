//! Maxmin and lastfirst on a sample whose density varies around a circle.
//!
//! Maxmin spreads landmarks evenly in distance, so dense bumps get few of
//! them; lastfirst spreads them evenly in rank, following the density.

use std::f64::consts::PI;

use lastfirst::evalmetrics::mpc;
use lastfirst::landmark::{build_cover, landmarks, CoverKind, Procedure, SamplerConfig};
use lastfirst::space::DissimilaritySpace;
use lastfirst::synth::{gen_bumpy_circle, BumpyCircleParams};

fn angle(p: &[f64]) -> f64 {
    p[1].atan2(p[0]).rem_euclid(2.0 * PI)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let points = gen_bumpy_circle(&BumpyCircleParams { n: 240, rng_seed: 3, ..Default::default() })?;
    let space = DissimilaritySpace::euclidean(&points)?;

    for (procedure, kind) in [(Procedure::Maxmin, CoverKind::Ball), (Procedure::Lastfirst, CoverKind::Neighborhood)] {
        let result = landmarks(&space, &SamplerConfig::new(procedure).with_num(12))?;
        let cover = build_cover(&space, &result, kind, 0.0, 0.0)?;
        // landmarks within a quarter turn of the heavy bump at angle 0
        let near_bump = result
            .landmarks
            .iter()
            .filter(|&&l| {
                let a = angle(&points[l]);
                a < PI / 4.0 || a > 7.0 * PI / 4.0
            })
            .count();
        let sizes: Vec<usize> = cover.sets.iter().map(Vec::len).collect();
        println!("{procedure}:");
        println!("  cover parameter {:?}", result.cover_param);
        println!("  landmarks near the heavy bump: {near_bump} of 12");
        println!("  set sizes {sizes:?}");
        println!("  MPC {:.3}", mpc(&cover)?);
    }
    Ok(())
}
