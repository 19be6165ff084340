//! Landmarks on a hand-built asymmetric dissimilarity and on mixed-type records.

use lastfirst::landmark::{landmarks, SamplerConfig};
use lastfirst::space::{Direction, DissimilaritySpace, GowerValue, RankVariant};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // travel times that differ by direction
    let d = [
        [0.0, 2.0, 5.0, 9.0],
        [4.0, 0.0, 3.0, 6.0],
        [5.0, 1.0, 0.0, 2.0],
        [9.0, 8.0, 4.0, 0.0],
    ];
    let space = DissimilaritySpace::from_rows(&d, false, 0.0)?;
    for x in 0..space.len() {
        let out = space.k_neighborhood(RankVariant::Check, Direction::Out, x, 1)?;
        let inn = space.k_neighborhood(RankVariant::Check, Direction::In, x, 1)?;
        println!("point {x}: N_1 = {out:?}, N_1^- = {inn:?}");
    }
    let r = landmarks(&space, &SamplerConfig::lastfirst().exhaustive())?;
    println!("lastfirst order {:?}", r.landmarks);

    let records = vec![
        vec![GowerValue::Num(34.0), GowerValue::Cat("f".into()), GowerValue::Cat("A".into())],
        vec![GowerValue::Num(61.0), GowerValue::Cat("m".into()), GowerValue::Cat("B".into())],
        vec![GowerValue::Num(35.0), GowerValue::Cat("f".into()), GowerValue::Cat("A".into())],
        vec![GowerValue::Num(70.0), GowerValue::Cat("m".into()), GowerValue::Cat("A".into())],
        vec![GowerValue::Num(52.0), GowerValue::Cat("f".into()), GowerValue::Cat("B".into())],
    ];
    let gower = DissimilaritySpace::gower(&records, None)?;
    for i in 0..gower.len() {
        let row: Vec<String> = gower.row(i).iter().map(|v| format!("{v:.2}")).collect();
        println!("{}", row.join(" "));
    }
    let r = landmarks(&gower, &SamplerConfig::maxmin().with_num(3))?;
    println!("maxmin on records {:?}, radius {:?}", r.landmarks, r.final_radius());
    Ok(())
}
