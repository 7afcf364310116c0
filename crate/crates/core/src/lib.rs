//! Gate-level workbench for comparing stochastic (SC) and binary-encoded (BE)
//! arithmetic when every 2-input gate costs one bootstrapped homomorphic
//! gate evaluation.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, the CLI and
//! parallel sweep drivers live in the `stochbool` companion crate.
//!
//! Module map:
//!
//! - [`bitstream`] / [`rng`]: D/S and S/D conversion of unipolar values.
//! - [`netlist`] / [`circuits`]: the circuit IR and the four arithmetic
//!   generators, plus analytic and measured size/depth.
//! - [`backend`]: plaintext and cost-simulating evaluation of netlists.
//! - [`perfmodel`]: closed-form total time, parallel latency and SIMD models.
//! - [`accuracy`]: RMSE sweeps and the linear threshold classifier.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

#[cfg(test)]
#[macro_use]
extern crate std;

pub mod accuracy;
pub mod backend;
pub mod bitstream;
pub mod circuits;
mod error;
pub mod netlist;
pub mod perfmodel;
pub mod rng;

pub use error::{Error, Result};

pub use backend::{BitBackend, CostParams, CostReport, PlainBackend, SimBackend};
pub use bitstream::{Bitstream, Precision};
pub use circuits::CircuitFamily;
pub use netlist::{CircuitStats, GateKind, Netlist, NetlistBuilder, SignalId};
pub use perfmodel::{BeDepthModel, Encoding, PerfModelConfig, WorkloadPoint};
pub use rng::RngSource;
