use core::fmt;
use core::str::FromStr;

use alloc::format;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::bitstream::Precision;
use crate::rng::RngSource;
use crate::Error;

/// Largest value treated as inside the unipolar range `[0, 1)`.
pub const UNIT_MAX: f64 = 1.0 - 1.0 / (1u64 << 20) as f64;

/// Round-to-nearest (ties away from zero) `n`-bit fixed-point level of `v`,
/// saturated to `[0, 2^n - 1]`.
pub fn quantize(v: f64, n: Precision) -> u32 {
    let top = n.max_value() - 1;
    let scaled = libm::round(v * f64::from(n.max_value()));
    if scaled.is_nan() || scaled <= 0.0 {
        0
    } else if scaled >= f64::from(top) {
        top
    } else {
        scaled as u32
    }
}

/// Comparator RNG family for simulated SC encoders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ScRngFamily {
    /// Width-`n` maximal LFSR started at a keyed nonzero phase.
    #[default]
    Lfsr,
    /// ChaCha keystream, i.i.d. uniform thresholds.
    Uniform,
}

impl ScRngFamily {
    pub fn name(self) -> &'static str {
        match self {
            ScRngFamily::Lfsr => "lfsr",
            ScRngFamily::Uniform => "uniform",
        }
    }

    /// Encoder RNG for one operand, fully determined by `key`.
    pub(crate) fn source(self, n: Precision, key: u64) -> RngSource {
        match self {
            ScRngFamily::Lfsr => {
                let period = u64::from(n.max_value()) - 1;
                let phase = 1 + key % period;
                RngSource::lfsr(n.bits(), phase as u32).expect("phase is nonzero and width valid")
            }
            ScRngFamily::Uniform => RngSource::seeded_uniform(key, 0),
        }
    }
}

impl fmt::Display for ScRngFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScRngFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "lfsr" => Ok(ScRngFamily::Lfsr),
            "uniform" => Ok(ScRngFamily::Uniform),
            _ => Err(Error::Domain(format!("unknown SC RNG family {s:?}"))),
        }
    }
}

pub(crate) fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash of `(seed, parts...)`.
pub(crate) fn derive_key(seed: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(splitmix64(seed), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

pub(crate) fn keyed_rng(seed: u64, parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_key(seed, parts))
}

/// Uniform draw in `[0, 1)` with 53 random bits.
pub(crate) fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal draw (Box-Muller).
pub(crate) fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1 = 1.0 - unit_f64(rng);
    let u2 = unit_f64(rng);
    libm::sqrt(-2.0 * libm::log(u1)) * libm::cos(2.0 * core::f64::consts::PI * u2)
}

// Domain-separation tags for keyed draws.
pub(crate) const TAG_MULT_SAMPLE: u64 = 1;
pub(crate) const TAG_MULT_ENCODE: u64 = 2;
pub(crate) const TAG_DATASET_MODEL: u64 = 3;
pub(crate) const TAG_DATASET_ROW: u64 = 4;
pub(crate) const TAG_SC_INFERENCE: u64 = 5;

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Precision {
        Precision::new(n).unwrap()
    }

    #[test]
    fn quantize_rounds_and_saturates() {
        assert_eq!(quantize(0.0, p(4)), 0);
        assert_eq!(quantize(0.5, p(4)), 8);
        // 0.53125 * 16 = 8.5 rounds away from zero
        assert_eq!(quantize(0.53125, p(4)), 9);
        assert_eq!(quantize(0.999, p(4)), 15);
        assert_eq!(quantize(-0.2, p(4)), 0);
        assert_eq!(quantize(f64::NAN, p(4)), 0);
    }

    #[test]
    fn unit_draws_in_range_and_normal_is_centered() {
        let mut rng = keyed_rng(9, &[1]);
        let mut sum = 0.0;
        let mut sq = 0.0;
        for _ in 0..20_000 {
            let u = unit_f64(&mut rng);
            assert!((0.0..1.0).contains(&u));
            let z = standard_normal(&mut rng);
            sum += z;
            sq += z * z;
        }
        let mean = sum / 20_000.0;
        let var = sq / 20_000.0 - mean * mean;
        assert!(mean.abs() < 0.05, "mean {mean}");
        assert!((var - 1.0).abs() < 0.05, "var {var}");
    }

    #[test]
    fn lfsr_family_phase_is_nonzero() {
        for key in [0u64, 1, 14, 15, u64::MAX] {
            let RngSource::Lfsr(l) = ScRngFamily::Lfsr.source(p(4), key) else {
                panic!("expected LFSR");
            };
            assert!(l.state() >= 1 && l.state() <= 15);
        }
        // width 1 has a single nonzero state
        assert!(matches!(
            ScRngFamily::Lfsr.source(p(1), 77),
            RngSource::Lfsr(_)
        ));
    }

    #[test]
    fn derive_key_separates_parts() {
        assert_ne!(derive_key(1, &[2, 3]), derive_key(1, &[3, 2]));
        assert_ne!(derive_key(1, &[2]), derive_key(2, &[2]));
        assert_eq!(derive_key(5, &[6, 7]), derive_key(5, &[6, 7]));
    }
}
