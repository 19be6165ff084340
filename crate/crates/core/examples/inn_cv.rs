//! Nested and temporal cross-validation of landmark nearest-neighbor prediction.

use std::collections::BTreeMap;
use std::sync::Mutex;

use lastfirst::evalmetrics::{nested_cv_observed, temporal_cv, CvPlan, Stage, WeightKind, WeightingScheme};
use lastfirst::landmark::{Procedure, SamplerConfig};
use lastfirst::space::DissimilaritySpace;
use lastfirst::synth::gen_planted_cohort;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cohort = gen_planted_cohort(360, 12.0, 3, 8)?;
    let space = DissimilaritySpace::euclidean(&cohort.points)?;
    let plan = CvPlan::default().with_neighborhood_size(60).with_rng_seed(4);
    let schemes: Vec<WeightingScheme> = WeightKind::ALL.iter().map(|&k| WeightingScheme::new(k)).collect();

    for procedure in [Procedure::Random, Procedure::Maxmin, Procedure::Lastfirst] {
        let cfg = SamplerConfig::new(procedure);
        // count how many points each stage looked at
        let seen = Mutex::new(BTreeMap::<&str, usize>::new());
        let rows = nested_cv_observed(&space, &cohort.outcomes, &cfg, &plan, &[36], &schemes, &|ev| {
            let name = match ev.stage {
                Stage::Train => "train",
                Stage::Tune => "tune",
                Stage::Evaluate => "evaluate",
            };
            *seen.lock().unwrap().entry(name).or_default() += ev.indices.len();
        })?;
        let mean = rows.iter().map(|r| r.auroc).sum::<f64>() / rows.len() as f64;
        let mut picked = BTreeMap::<&str, usize>::new();
        for r in &rows {
            *picked.entry(r.scheme.name()).or_default() += 1;
        }
        println!("{procedure}: {} folds, mean AUROC {mean:.3}, schemes chosen {picked:?}", rows.len());
        println!("  points touched per stage {:?}", seen.into_inner().unwrap());
    }

    let rows = temporal_cv(&space, &cohort.outcomes, &cohort.periods, &SamplerConfig::lastfirst(), &plan, &[36])?;
    for r in &rows {
        println!("temporal: period {} part {} k={} AUROC {:.3}", r.period, r.part, r.k, r.auroc);
    }
    Ok(())
}
