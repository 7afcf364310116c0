use core::fmt;

use crate::bitstream::{ds_encode, Precision};
use crate::{Error, Result};

use super::sampling::{
    derive_key, keyed_rng, quantize, unit_f64, ScRngFamily, TAG_MULT_ENCODE, TAG_MULT_SAMPLE,
};

/// How a product `x * y` is estimated at precision `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepMode {
    /// Simulated SC: encode, AND, decode. With `independent_rngs` false both
    /// operands are compared against the same random sequence.
    ScSim { independent_rngs: bool },
    /// Exact product of the quantized operands rounded to `n` bits: SC with
    /// only quantization error.
    ScIdeal,
    /// Exact `2n`-bit product of the quantized operands.
    BeQuant,
}

impl SweepMode {
    pub fn name(self) -> &'static str {
        match self {
            SweepMode::ScSim {
                independent_rngs: true,
            } => "sc_sim",
            SweepMode::ScSim {
                independent_rngs: false,
            } => "sc_sim_shared",
            SweepMode::ScIdeal => "sc_ideal",
            SweepMode::BeQuant => "be_quant",
        }
    }

    pub fn is_sc(self) -> bool {
        !matches!(self, SweepMode::BeQuant)
    }
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for SweepMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "sc_sim" => Ok(SweepMode::ScSim {
                independent_rngs: true,
            }),
            "sc_sim_shared" => Ok(SweepMode::ScSim {
                independent_rngs: false,
            }),
            "sc_ideal" => Ok(SweepMode::ScIdeal),
            "be_quant" => Ok(SweepMode::BeQuant),
            _ => Err(Error::Domain(alloc::format!("unknown sweep mode {s:?}"))),
        }
    }
}

/// Estimate of `x * y` for one sample. `index` keys the encoder RNGs.
pub fn mult_estimate(
    x: f64,
    y: f64,
    n: Precision,
    mode: SweepMode,
    family: ScRngFamily,
    seed: u64,
    index: u64,
) -> Result<f64> {
    let qx = quantize(x, n);
    let qy = quantize(y, n);
    let levels = f64::from(n.max_value());
    Ok(match mode {
        SweepMode::BeQuant => f64::from(qx) * f64::from(qy) / (levels * levels),
        SweepMode::ScIdeal => {
            let product = u64::from(qx) * u64::from(qy);
            let half = 1u64 << (n.bits() - 1);
            ((product + half) >> n.bits()) as f64 / levels
        }
        SweepMode::ScSim { independent_rngs } => {
            let key_x = derive_key(seed, &[TAG_MULT_ENCODE, index, 0]);
            let key_y = if independent_rngs {
                derive_key(seed, &[TAG_MULT_ENCODE, index, 1])
            } else {
                key_x
            };
            let sx = ds_encode(qx, n, &mut family.source(n, key_x))?;
            let sy = ds_encode(qy, n, &mut family.source(n, key_y))?;
            sx.and(&sy)?.popcount() as f64 / levels
        }
    })
}

/// RMSE of `mode` against floating-point `x * y` over `samples` pairs drawn
/// uniformly from `[0, 1)^2`, using LFSR encoders for SC simulation.
pub fn rmse_mult_sweep(n: Precision, mode: SweepMode, samples: u64, seed: u64) -> Result<f64> {
    rmse_mult_sweep_with(n, mode, samples, seed, ScRngFamily::default())
}

pub fn rmse_mult_sweep_with(
    n: Precision,
    mode: SweepMode,
    samples: u64,
    seed: u64,
    family: ScRngFamily,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::Domain("sample count must be >= 1".into()));
    }
    let mut sum_sq = 0.0;
    for i in 0..samples {
        let mut rng = keyed_rng(seed, &[TAG_MULT_SAMPLE, i]);
        let x = unit_f64(&mut rng);
        let y = unit_f64(&mut rng);
        let err = mult_estimate(x, y, n, mode, family, seed, i)? - x * y;
        sum_sq += err * err;
    }
    Ok(libm::sqrt(sum_sq / samples as f64))
}
