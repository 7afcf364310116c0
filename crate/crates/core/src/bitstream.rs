//! Unipolar stochastic encoding.
//!
//! A value `x` at precision `n` is carried by a bitstream of length `2^n`
//! whose fraction of ones approximates `x / 2^n`. Streams are packed into
//! `u64` words, bit `i` living at bit `i % 64` of word `i / 64`; bits past
//! `len` are always zero.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::rng::RngSource;
use crate::{Error, Result};

/// Bit width `n` of a fixed-point operand, `1 <= n <= 16`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub const MIN: u32 = 1;
    pub const MAX: u32 = 16;

    pub fn new(n: u32) -> Result<Self> {
        if (Self::MIN..=Self::MAX).contains(&n) {
            Ok(Self(n))
        } else {
            Err(Error::Precision(n))
        }
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// `2^n`, the number of representable levels (and the SC stream length).
    pub fn max_value(self) -> u32 {
        1 << self.0
    }

    pub fn stream_length(self) -> usize {
        1 << self.0
    }

    /// All supported precisions in increasing order.
    pub fn all() -> impl Iterator<Item = Precision> {
        (Self::MIN..=Self::MAX).map(Precision)
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<u32> for Precision {
    type Error = Error;

    fn try_from(n: u32) -> Result<Self> {
        Self::new(n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bitstream {
    words: Vec<u64>,
    len: usize,
}

impl Bitstream {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut s = Self {
            words: vec![u64::MAX; len.div_ceil(64)],
            len,
        };
        s.clear_tail();
        s
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        bits.iter().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    pub fn popcount(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<bool> {
        self.iter().collect()
    }

    pub fn to_bit_string(&self) -> String {
        format!("{self}")
    }

    /// Bitwise AND, the stochastic multiplier.
    pub fn and(&self, other: &Bitstream) -> Result<Bitstream> {
        self.check_same_len(other)?;
        Ok(Bitstream {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
            len: self.len,
        })
    }

    /// Scaled addition by position selection: output bit `i` comes from
    /// `self` when bit `select_bit` of `i` is clear and from `other`
    /// otherwise. `select_bit = 0` is the even/odd interleave.
    pub fn select_interleave(&self, other: &Bitstream, select_bit: u32) -> Result<Bitstream> {
        self.check_same_len(other)?;
        let words = if select_bit < 6 {
            let take_self = INTERLEAVE_MASKS[select_bit as usize];
            self.words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| (a & take_self) | (b & !take_self))
                .collect()
        } else {
            let word_bit = select_bit - 6;
            self.words
                .iter()
                .zip(&other.words)
                .enumerate()
                .map(|(w, (a, b))| {
                    if word_bit < usize::BITS && (w >> word_bit) & 1 == 1 {
                        *b
                    } else {
                        *a
                    }
                })
                .collect()
        };
        Ok(Bitstream {
            words,
            len: self.len,
        })
    }

    fn check_same_len(&self, other: &Bitstream) -> Result<()> {
        if self.len == other.len {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: self.len,
                actual: other.len,
            })
        }
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

/// Bit `i` of the mask is set when bit `k` of `i` is clear, for `k < 6`.
const INTERLEAVE_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

impl FromIterator<bool> for Bitstream {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0usize;
        for bit in iter {
            if len.is_multiple_of(64) {
                words.push(0);
            }
            if bit {
                *words.last_mut().unwrap() |= 1 << (len % 64);
            }
            len += 1;
        }
        Self { words, len }
    }
}

impl fmt::Display for Bitstream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Parses a string of `0`/`1` characters, bit 0 first.
impl FromStr for Bitstream {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Domain(format!("invalid bit character {other:?}"))),
            })
            .collect()
    }
}

fn check_level(x: u32, n: Precision) -> Result<()> {
    if x > n.max_value() {
        Err(Error::ValueOutOfRange {
            value: u64::from(x),
            max: u64::from(n.max_value()),
        })
    } else {
        Ok(())
    }
}

/// Digital-to-stochastic conversion: bit `i` is `x > r_i` for the `i`-th
/// draw `r_i` of `rng`.
pub fn ds_encode(x: u32, n: Precision, rng: &mut RngSource) -> Result<Bitstream> {
    check_level(x, n)?;
    let len = n.stream_length();
    let mut words = vec![0u64; len.div_ceil(64)];
    for (w, word) in words.iter_mut().enumerate() {
        let bits = (len - w * 64).min(64);
        let mut acc = 0u64;
        for b in 0..bits {
            if x > rng.next_value(n) {
                acc |= 1 << b;
            }
        }
        *word = acc;
    }
    Ok(Bitstream { words, len })
}

/// Deterministic encoding with exactly `x` ones: the first `x` positions.
pub fn ds_encode_ideal(x: u32, n: Precision) -> Result<Bitstream> {
    ds_encode(x, n, &mut RngSource::counter(0))
}

/// Stochastic-to-digital conversion: the popcount. The represented value is
/// `popcount / 2^n`.
pub fn sd_decode(s: &Bitstream, n: Precision) -> Result<u32> {
    if s.len() != n.stream_length() {
        return Err(Error::LengthMismatch {
            expected: n.stream_length(),
            actual: s.len(),
        });
    }
    Ok(s.popcount() as u32)
}

/// `popcount / 2^n` as a real.
pub fn sd_decode_value(s: &Bitstream, n: Precision) -> Result<f64> {
    Ok(f64::from(sd_decode(s, n)?) / f64::from(n.max_value()))
}
