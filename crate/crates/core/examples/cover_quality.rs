//! Cover crispness and cover-based risk scores on a synthetic cohort.

use lastfirst::evalmetrics::{auroc, cover_risk_scores, mpc};
use lastfirst::landmark::{build_cover, landmarks, CoverKind, Procedure, SamplerConfig};
use lastfirst::space::DissimilaritySpace;
use lastfirst::synth::gen_planted_cohort;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cohort = gen_planted_cohort(400, 12.0, 1, 2)?;
    let space = DissimilaritySpace::euclidean(&cohort.points)?;
    println!("procedure  landmarks  ext_mult  MPC    AUROC");
    for procedure in [Procedure::Random, Procedure::Maxmin, Procedure::Lastfirst] {
        let kind = if procedure == Procedure::Lastfirst { CoverKind::Neighborhood } else { CoverKind::Ball };
        for m in [8, 32] {
            let result = landmarks(&space, &SamplerConfig::new(procedure).with_num(m).with_rng_seed(1))?;
            for ext_mult in [0.0, 1.0] {
                let cover = build_cover(&space, &result, kind, ext_mult, 0.0)?;
                let q = cover_risk_scores(&cover, &cohort.outcomes)?;
                println!(
                    "{:<10} {m:>9}  {ext_mult:>8}  {:.3}  {:.3}",
                    procedure.to_string(),
                    mpc(&cover)?,
                    auroc(&q, &cohort.outcomes)?
                );
            }
        }
    }
    Ok(())
}
