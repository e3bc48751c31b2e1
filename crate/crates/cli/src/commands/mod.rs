pub mod evolve;
pub mod oracle;
pub mod pulse;
pub mod revival;
pub mod spectrum;
pub mod synth;
pub mod validate;
