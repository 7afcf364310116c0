//! The four arithmetic circuits and their closed-form size/depth.
//!
//! Multi-bit ports are LSB first. Binary circuits take operand `a` on inputs
//! `0..n` and `b` on `n..2n`; SC circuits take stream `A` on `0..2^n` and
//! `B` on `2^n..2^(n+1)`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::bitstream::Precision;
use crate::netlist::{CircuitStats, Netlist, NetlistBuilder, SignalId};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CircuitFamily {
    /// Ripple-carry adder.
    BeAdd,
    /// Array multiplier.
    BeMult,
    /// Bitwise-AND stochastic multiplier.
    ScMult,
    /// Interleaving stochastic scaled adder, `(a + b) / 2`.
    ScScaledAdd,
}

impl CircuitFamily {
    pub const ALL: [CircuitFamily; 4] = [
        CircuitFamily::BeAdd,
        CircuitFamily::BeMult,
        CircuitFamily::ScMult,
        CircuitFamily::ScScaledAdd,
    ];

    /// Short CLI name.
    pub fn name(self) -> &'static str {
        match self {
            CircuitFamily::BeAdd => "be-add",
            CircuitFamily::BeMult => "be-mult",
            CircuitFamily::ScMult => "sc-mult",
            CircuitFamily::ScScaledAdd => "sc-sadd",
        }
    }

    pub fn build(self, n: Precision) -> Netlist {
        match self {
            CircuitFamily::BeAdd => build_ripple_carry_adder(n),
            CircuitFamily::BeMult => build_array_multiplier(n),
            CircuitFamily::ScMult => build_sc_and_multiplier(n),
            CircuitFamily::ScScaledAdd => build_sc_scaled_adder(n),
        }
    }
}

impl fmt::Display for CircuitFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CircuitFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        match key.as_str() {
            "be-add" => Ok(CircuitFamily::BeAdd),
            "be-mult" => Ok(CircuitFamily::BeMult),
            "sc-mult" => Ok(CircuitFamily::ScMult),
            "sc-sadd" | "sc-scaled-add" => Ok(CircuitFamily::ScScaledAdd),
            _ => Err(Error::Domain(format!("unknown circuit family {s:?}"))),
        }
    }
}

/// Closed-form gate count and depth used by the performance models:
/// adder `(5n, 3n)`, array multiplier `(6n^2, 8n)`, SC multiplier
/// `(2^n, 1)`, scaled adder `(0, 0)`.
pub fn analytic_stats(kind: CircuitFamily, n: Precision) -> CircuitStats {
    let n = u64::from(n.bits());
    let (gates, depth) = match kind {
        CircuitFamily::BeAdd => (5 * n, 3 * n),
        CircuitFamily::BeMult => (6 * n * n, 8 * n),
        CircuitFamily::ScMult => (1 << n, 1),
        CircuitFamily::ScScaledAdd => (0, 0),
    };
    CircuitStats {
        two_input_gate_count: gates,
        not_count: 0,
        depth,
    }
}

/// n-bit ripple-carry adder with `n + 1` outputs (sum bits, then carry).
/// Every position is a full adder; the first carry-in is constant zero.
pub fn build_ripple_carry_adder(n: Precision) -> Netlist {
    let n = n.bits();
    let mut b = NetlistBuilder::new(2 * n);
    let mut carry = b.zero();
    let mut outputs = Vec::with_capacity(n as usize + 1);
    for i in 0..n {
        let (sum, c) = b.full_adder(i, n + i, carry);
        outputs.push(sum);
        carry = c;
    }
    outputs.push(carry);
    b.finish(outputs)
}

/// n-by-n array multiplier with `2n` outputs.
///
/// Partial products `a_j & b_i` are formed for all `n^2` pairs. Row 0 seeds
/// the accumulator; each further row is added by a row of `n` full adders
/// (carry-in zero), so the circuit has `n^2 + 5n(n - 1)` gates.
pub fn build_array_multiplier(n: Precision) -> Netlist {
    let n = n.bits();
    let mut b = NetlistBuilder::new(2 * n);
    let a = |j: u32| j;
    let bb = |i: u32| n + i;

    // acc[k] holds the running sum bit of weight `row + k`.
    let mut acc: Vec<SignalId> = (0..n).map(|j| b.and(a(j), bb(0))).collect();
    let mut outputs = Vec::with_capacity(2 * n as usize);

    for row in 1..n {
        outputs.push(acc[0]);
        let zero = b.zero();
        let mut carry = zero;
        let mut next = Vec::with_capacity(n as usize + 1);
        for j in 0..n {
            let pp = b.and(a(j), bb(row));
            let upper = acc.get(j as usize + 1).copied().unwrap_or(zero);
            let (sum, c) = b.full_adder(pp, upper, carry);
            next.push(sum);
            carry = c;
        }
        next.push(carry);
        acc = next;
    }
    outputs.extend_from_slice(&acc);
    while outputs.len() < 2 * n as usize {
        let zero = b.zero();
        outputs.push(zero);
    }
    b.finish(outputs)
}

/// `2^n` AND gates, one per stream position.
pub fn build_sc_and_multiplier(n: Precision) -> Netlist {
    let len = n.max_value();
    let mut b = NetlistBuilder::new(2 * len);
    let outputs = (0..len).map(|i| b.and(i, len + i)).collect();
    b.finish(outputs)
}

/// Even/odd interleave: output `i` is `A[i]` for even `i`, `B[i]` for odd.
pub fn build_sc_scaled_adder(n: Precision) -> Netlist {
    build_sc_scaled_adder_select(n, 0)
}

/// Generalised interleave: output `i` is `A[i]` when bit `select_bit` of
/// `i` is clear and `B[i]` otherwise. Successive levels of an adder tree use
/// successive select bits so every leaf keeps a disjoint share of positions.
pub fn build_sc_scaled_adder_select(n: Precision, select_bit: u32) -> Netlist {
    let len = n.max_value();
    let mut b = NetlistBuilder::new(2 * len);
    let outputs = (0..len)
        .map(|i| {
            let src = if (i >> select_bit) & 1 == 0 {
                i
            } else {
                len + i
            };
            b.alias(src)
        })
        .collect();
    b.finish(outputs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstream::ds_encode_ideal;
    use crate::netlist::measure_stats;

    fn p(n: u32) -> Precision {
        Precision::new(n).unwrap()
    }

    fn to_bits(v: u64, width: u32) -> impl Iterator<Item = bool> {
        (0..width).map(move |i| v >> i & 1 == 1)
    }

    fn from_bits(bits: &[bool]) -> u64 {
        bits.iter().rev().fold(0, |acc, &b| acc << 1 | u64::from(b))
    }

    fn eval_binary(c: &Netlist, a: u64, b: u64, width: u32) -> u64 {
        let inputs: Vec<bool> = to_bits(a, width).chain(to_bits(b, width)).collect();
        from_bits(&c.eval(&inputs).unwrap())
    }

    #[test]
    fn rca_single_bit() {
        let c = build_ripple_carry_adder(p(1));
        let s = measure_stats(&c);
        assert_eq!((s.two_input_gate_count, s.depth), (5, 3));
    }

    #[test]
    fn rca_zero_plus_zero() {
        let c = build_ripple_carry_adder(p(4));
        assert_eq!(c.eval(&[false; 8]).unwrap(), [false; 5]);
    }

    #[test]
    fn rca_exhaustive_n4() {
        let c = build_ripple_carry_adder(p(4));
        for a in 0..16 {
            for b in 0..16 {
                assert_eq!(eval_binary(&c, a, b, 4), a + b);
            }
        }
    }

    #[test]
    fn rca_counts_match_formula() {
        for n in 1..=16 {
            let s = measure_stats(&build_ripple_carry_adder(p(n)));
            assert_eq!(s.two_input_gate_count, 5 * u64::from(n));
            assert!(s.depth <= 3 * u64::from(n));
        }
    }

    #[test]
    fn multiplier_single_bit_is_one_and() {
        let c = build_array_multiplier(p(1));
        assert_eq!(measure_stats(&c).two_input_gate_count, 1);
        assert_eq!(c.outputs().len(), 2);
        assert_eq!(eval_binary(&c, 1, 1, 1), 1);
        assert_eq!(eval_binary(&c, 1, 0, 1), 0);
    }

    #[test]
    fn multiplier_exhaustive_n5() {
        let c = build_array_multiplier(p(5));
        assert_eq!(c.outputs().len(), 10);
        for a in 0..32 {
            for b in 0..32 {
                assert_eq!(eval_binary(&c, a, b, 5), a * b, "{a} * {b}");
            }
        }
    }

    #[test]
    fn multiplier_size_and_depth_bounds() {
        for n in 1..=8u64 {
            let s = measure_stats(&build_array_multiplier(p(n as u32)));
            assert_eq!(s.two_input_gate_count, n * n + 5 * n * (n - 1));
            assert!(s.two_input_gate_count <= 6 * n * n);
            assert!(s.depth <= 8 * n, "n={n} depth {}", s.depth);
            if n >= 3 {
                let ratio = s.two_input_gate_count as f64 / (6 * n * n) as f64;
                assert!((0.65..=1.35).contains(&ratio), "n={n} ratio {ratio}");
            }
        }
    }

    #[test]
    fn sc_multiplier_shape() {
        let c = build_sc_and_multiplier(p(2));
        let s = measure_stats(&c);
        assert_eq!((s.two_input_gate_count, s.depth), (4, 1));
        assert_eq!(
            measure_stats(&build_sc_and_multiplier(p(3))),
            CircuitStats {
                two_input_gate_count: 8,
                not_count: 0,
                depth: 1
            }
        );
    }

    #[test]
    fn sc_multiplier_identity_operand() {
        let n = p(3);
        let c = build_sc_and_multiplier(n);
        let b: Vec<bool> = [1, 0, 0, 1, 1, 0, 1, 0].iter().map(|&x| x == 1).collect();
        let inputs: Vec<bool> = std::iter::repeat_n(true, 8)
            .chain(b.iter().copied())
            .collect();
        assert_eq!(c.eval(&inputs).unwrap(), b);
    }

    #[test]
    fn sc_multiplier_correlated_operands() {
        // identical streams: AND returns the stream itself, 2/4 not 1/4
        let n = p(2);
        let s = ds_encode_ideal(2, n).unwrap();
        let inputs: Vec<bool> = s.iter().chain(s.iter()).collect();
        let out = build_sc_and_multiplier(n).eval(&inputs).unwrap();
        assert_eq!(out.iter().filter(|&&x| x).count(), 2);
    }

    #[test]
    fn scaled_adder_is_wiring() {
        assert_eq!(
            measure_stats(&build_sc_scaled_adder(p(4))),
            CircuitStats::default()
        );
        let n = p(3);
        let c = build_sc_scaled_adder(n);
        let inputs: Vec<bool> = std::iter::repeat_n(true, 8)
            .chain(std::iter::repeat_n(false, 8))
            .collect();
        let out = c.eval(&inputs).unwrap();
        assert_eq!(out.iter().filter(|&&x| x).count(), 4);
        assert_eq!(out, [true, false, true, false, true, false, true, false]);
    }

    #[test]
    fn analytic_formulas() {
        let s = analytic_stats(CircuitFamily::BeMult, p(8));
        assert_eq!((s.two_input_gate_count, s.depth), (384, 64));
        let s = analytic_stats(CircuitFamily::ScMult, p(8));
        assert_eq!((s.two_input_gate_count, s.depth), (256, 1));
        let s = analytic_stats(CircuitFamily::BeAdd, p(4));
        assert_eq!((s.two_input_gate_count, s.depth), (20, 12));
        let s = analytic_stats(CircuitFamily::BeMult, p(4));
        assert_eq!((s.two_input_gate_count, s.depth), (96, 32));
        assert_eq!(
            analytic_stats(CircuitFamily::ScScaledAdd, p(9)),
            CircuitStats::default()
        );
    }

    #[test]
    fn family_names_parse() {
        for f in CircuitFamily::ALL {
            assert_eq!(f.name().parse::<CircuitFamily>().unwrap(), f);
        }
        assert!("be-div".parse::<CircuitFamily>().is_err());
    }
}
