//! Heavily duplicated data: co-location classes and exhaustive landmark runs.

use lastfirst::landmark::{landmarks, Procedure, SamplerConfig};
use lastfirst::space::DissimilaritySpace;
use lastfirst::synth::gen_duplicated_lattice;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let points = gen_duplicated_lattice(2000, 1);
    let space = DissimilaritySpace::euclidean(&points)?;
    let classes = space.colocation();
    let mut sizes: Vec<usize> = classes.classes().iter().map(Vec::len).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    println!("{} points in {} classes; largest {:?}", space.len(), classes.num_classes(), &sizes[..5]);

    for procedure in [Procedure::Maxmin, Procedure::Lastfirst] {
        let r = landmarks(&space, &SamplerConfig::new(procedure).exhaustive())?;
        let first: Vec<&Vec<f64>> = r.landmarks.iter().take(6).map(|&l| &points[l]).collect();
        println!("{procedure}: {} landmarks, first six at {first:?}", r.len());
        let params: Vec<f64> = r.steps.iter().take(6).map(|s| s.cover_param.as_f64()).collect();
        println!("  covering values {params:?}");
    }
    Ok(())
}
