//! Nerves of covers and their Betti numbers.

use lastfirst::complex::{betti, euler_characteristic, nerve, nerve_of_sets, SimplicialComplex};
use lastfirst::landmark::{build_cover, landmarks, CoverKind, SamplerConfig};
use lastfirst::space::DissimilaritySpace;
use lastfirst::synth::{gen_necklace, NecklaceParams};

fn report(name: &str, k: &SimplicialComplex) -> Result<(), Box<dyn std::error::Error>> {
    let top = k.dim_cap().saturating_sub(1);
    let counts: Vec<usize> = (0..=k.dimension().unwrap_or(0)).map(|d| k.count(d)).collect();
    println!("{name}: simplices {counts:?}, betti {}, euler {}", betti(k, top)?, euler_characteristic(k));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // three sets meeting pairwise but not all together: a hollow triangle
    let triangle = nerve_of_sets(6, &[vec![0, 1, 5], vec![1, 2, 3], vec![3, 4, 5]], 2)?;
    report("triangle boundary", &triangle)?;

    // four sets, every three sharing a point: a hollow tetrahedron
    let sets = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
    report("tetrahedron boundary", &nerve_of_sets(4, &sets, 3)?)?;

    // a necklace: a large circle with small circular beads on it
    let points = gen_necklace(&NecklaceParams { n_string: 40, points_per_bead: 30, ..Default::default() })?;
    let space = DissimilaritySpace::euclidean(&points)?;
    for m in [6, 12, 24, 48] {
        let result = landmarks(&space, &SamplerConfig::lastfirst().with_num(m))?;
        let cover = build_cover(&space, &result, CoverKind::Neighborhood, 0.5, 0.0)?;
        report(&format!("necklace, lastfirst m={m}"), &nerve(&cover, 2)?)?;
    }
    Ok(())
}
