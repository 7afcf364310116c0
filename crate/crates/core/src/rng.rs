//! Random-number sources for the digital-to-stochastic comparator.
//!
//! Three families are provided so experiments can separate error sources:
//! a maximal-length LFSR (what a hardware SC front end would use), a plain
//! counter (every level visited exactly once, so encoding is exact) and a
//! seeded ChaCha stream (an i.i.d. uniform baseline).

use alloc::boxed::Box;
use alloc::format;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::bitstream::Precision;
use crate::{Error, Result};

/// Feedback tap positions (1-based) of a maximal-length Fibonacci LFSR for
/// widths 1 through 16.
const MAXIMAL_TAPS: [&[u32]; 17] = [
    &[],
    &[1],
    &[2, 1],
    &[3, 2],
    &[4, 3],
    &[5, 3],
    &[6, 5],
    &[7, 6],
    &[8, 6, 5, 4],
    &[9, 5],
    &[10, 7],
    &[11, 9],
    &[12, 6, 4, 1],
    &[13, 4, 3, 1],
    &[14, 5, 3, 1],
    &[15, 14],
    &[16, 15, 13, 4],
];

pub const MAX_LFSR_WIDTH: u32 = 16;

/// Tap mask of the built-in maximal-period polynomial for `width`.
pub fn maximal_taps(width: u32) -> Result<u32> {
    if width == 0 || width > MAX_LFSR_WIDTH {
        return Err(Error::Lfsr(format!("width {width} outside 1..=16")));
    }
    Ok(MAXIMAL_TAPS[width as usize]
        .iter()
        .fold(0, |mask, &t| mask | (1 << (t - 1))))
}

/// Fibonacci LFSR: shift left, feed the parity of the tapped bits into bit 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lfsr {
    width: u32,
    state: u32,
    taps: u32,
}

impl Lfsr {
    /// LFSR with the built-in maximal taps for `width`.
    pub fn new(width: u32, seed: u32) -> Result<Self> {
        let taps = maximal_taps(width)?;
        Self::from_parts(width, seed, taps)
    }

    /// LFSR with a caller-supplied tap mask. The mask is rejected unless it
    /// yields the full `2^width - 1` period.
    pub fn with_taps(width: u32, seed: u32, taps: u32) -> Result<Self> {
        let lfsr = Self::from_parts(width, seed, taps)?;
        let period = lfsr.period();
        if period != (1u64 << width) - 1 {
            return Err(Error::Lfsr(format!(
                "tap mask {taps:#x} has period {period}, not maximal for width {width}"
            )));
        }
        Ok(lfsr)
    }

    fn from_parts(width: u32, seed: u32, taps: u32) -> Result<Self> {
        if width == 0 || width > MAX_LFSR_WIDTH {
            return Err(Error::Lfsr(format!("width {width} outside 1..=16")));
        }
        let mask = Self::mask_for(width);
        if taps & !mask != 0 || taps & (1 << (width - 1)) == 0 {
            return Err(Error::Lfsr(format!(
                "tap mask {taps:#x} must include bit {width} and stay within the register"
            )));
        }
        let state = seed & mask;
        if state == 0 {
            return Err(Error::ZeroSeed);
        }
        Ok(Self { width, state, taps })
    }

    fn mask_for(width: u32) -> u32 {
        ((1u64 << width) - 1) as u32
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn state(&self) -> u32 {
        self.state
    }

    pub fn step(&mut self) {
        let feedback = (self.state & self.taps).count_ones() & 1;
        self.state = ((self.state << 1) | feedback) & Self::mask_for(self.width);
    }

    /// Number of steps until the current state recurs.
    pub fn period(&self) -> u64 {
        let mut probe = self.clone();
        let start = probe.state;
        let mut steps = 0u64;
        loop {
            probe.step();
            steps += 1;
            if probe.state == start || steps > (1u64 << self.width) {
                return steps;
            }
        }
    }
}

/// Counter source: yields `start_offset, start_offset + 1, ...` modulo `2^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counter {
    state: u64,
}

/// ChaCha8 keystream selected by `(seed, stream_id)`; distinct stream ids
/// give independent sequences under the same seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeededUniform {
    rng: ChaCha8Rng,
}

impl SeededUniform {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { rng }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RngSource {
    Lfsr(Lfsr),
    Counter(Counter),
    SeededUniform(Box<SeededUniform>),
}

impl RngSource {
    pub fn lfsr(width: u32, seed: u32) -> Result<Self> {
        Lfsr::new(width, seed).map(Self::Lfsr)
    }

    pub fn counter(start_offset: u64) -> Self {
        Self::Counter(Counter {
            state: start_offset,
        })
    }

    pub fn seeded_uniform(seed: u64, stream_id: u64) -> Self {
        Self::SeededUniform(Box::new(SeededUniform::new(seed, stream_id)))
    }

    /// Next comparator threshold in `[0, 2^n)`.
    ///
    /// The LFSR reports its current state truncated to the low `n` bits and
    /// then steps, so the seed is the first value produced.
    pub fn next_value(&mut self, n: Precision) -> u32 {
        let mask = n.max_value() - 1;
        match self {
            Self::Lfsr(lfsr) => {
                let value = lfsr.state & mask;
                lfsr.step();
                value
            }
            Self::Counter(counter) => {
                let value = (counter.state & u64::from(mask)) as u32;
                counter.state = counter.state.wrapping_add(1);
                value
            }
            Self::SeededUniform(u) => u.rng.next_u32() >> (32 - n.bits()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::vec::Vec;

    fn p(n: u32) -> Precision {
        Precision::new(n).unwrap()
    }

    #[test]
    fn counter_wraps_modulo_stream_length() {
        let mut rng = RngSource::counter(0);
        let seq: Vec<u32> = (0..5).map(|_| rng.next_value(p(2))).collect();
        assert_eq!(seq, [0, 1, 2, 3, 0]);

        let mut offset = RngSource::counter(6);
        assert_eq!(offset.next_value(p(2)), 2);
    }

    #[test]
    fn lfsr_width4_has_fifteen_distinct_values() {
        let mut rng = RngSource::lfsr(4, 1).unwrap();
        let values: Vec<u32> = (0..15).map(|_| rng.next_value(p(4))).collect();
        let distinct: BTreeSet<u32> = values.iter().copied().collect();
        assert_eq!(distinct.len(), 15);
        assert!(!distinct.contains(&0));
        assert_eq!(rng.next_value(p(4)), values[0]);
    }

    #[test]
    fn every_builtin_tap_set_is_maximal() {
        for width in 1..=MAX_LFSR_WIDTH {
            let lfsr = Lfsr::new(width, 1).unwrap();
            assert_eq!(lfsr.period(), (1u64 << width) - 1, "width {width}");
        }
    }

    #[test]
    fn zero_seed_is_rejected() {
        assert_eq!(RngSource::lfsr(8, 0), Err(Error::ZeroSeed));
        // seed bits above the register width are discarded
        assert_eq!(RngSource::lfsr(4, 0x10), Err(Error::ZeroSeed));
    }

    #[test]
    fn non_maximal_taps_are_rejected() {
        // x^4 + x^2 + 1 is not primitive
        assert!(Lfsr::with_taps(4, 1, 0b1010).is_err());
        assert!(Lfsr::with_taps(4, 1, 0b1100).is_ok());
        assert!(Lfsr::with_taps(4, 1, 0b0011).is_err());
    }

    #[test]
    fn seeded_uniform_is_deterministic_and_streams_differ() {
        let mut a = RngSource::seeded_uniform(7, 0);
        let mut b = RngSource::seeded_uniform(7, 0);
        assert_eq!(a.next_value(p(16)), b.next_value(p(16)));

        let mut s0 = RngSource::seeded_uniform(7, 0);
        let mut s1 = RngSource::seeded_uniform(7, 1);
        let v0: Vec<u32> = (0..32).map(|_| s0.next_value(p(16))).collect();
        let v1: Vec<u32> = (0..32).map(|_| s1.next_value(p(16))).collect();
        assert_ne!(v0, v1);
    }

    #[test]
    fn seeded_uniform_stays_in_range() {
        let mut rng = RngSource::seeded_uniform(3, 9);
        for n in 1..=16 {
            for _ in 0..200 {
                assert!(rng.next_value(p(n)) < 1 << n);
            }
        }
    }
}
