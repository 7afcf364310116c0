//! Accuracy experiments: multiplication RMSE across precisions and encoding
//! modes, and a linear-regression-plus-threshold classifier evaluated in
//! floating point, quantized BE fixed point and SC.
//!
//! Every random draw is keyed by `(seed, index, ...)` rather than taken from
//! a shared sequential stream, so results do not depend on evaluation order.

mod classifier;
mod dataset;
mod linalg;
mod rmse;
mod sampling;

pub use classifier::{
    be_response, classification_r2, predict_be, predict_be_netlist, predict_float, predict_sc,
    predict_sc_with, r2_real, r2_score, sc_response, train_float, InferenceMode, LinearModel,
    R2Pair,
};
pub use dataset::{
    generate_dataset, generate_dataset_with_noise, Dataset, DEFAULT_NOISE_STD, LABEL_THRESHOLD,
};
pub use rmse::{mult_estimate, rmse_mult_sweep, rmse_mult_sweep_with, SweepMode};
pub use sampling::{quantize, ScRngFamily, UNIT_MAX};
