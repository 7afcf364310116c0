//! Experiment driver for `stochbool-core`: parameter sweeps, CSV/JSON
//! output, netlist and dataset file formats, and the `stochbool` CLI.

pub mod cli;
pub mod dataset_csv;
pub mod experiments;
pub mod netlist_json;
pub mod rows;

pub use rows::{OutputFormat, SweepRow};
