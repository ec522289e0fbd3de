//! File formats, instance generators and the command-line frontend over
//! `shacq-core`.

pub mod cli;
pub mod files;
pub mod generate;
pub mod sample;

pub use shacq_core as core;
