pub mod bench;
pub mod cli;
pub mod complex;
pub mod evalmetrics;
pub mod landmark;
pub mod space;
pub mod synth;
