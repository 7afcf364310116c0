//! Netlist evaluation under interchangeable bit backends.
//!
//! [`SimBackend`] models a Boolean HE library where every 2-input gate is
//! followed by a bootstrap: it computes plaintext bits and charges a fixed
//! latency per bootstrapped gate. No cryptography is performed.

use core::ops::{Add, AddAssign};

use alloc::vec::Vec;

use crate::bitstream::{ds_encode, Bitstream, Precision};
use crate::circuits::{build_array_multiplier, build_sc_and_multiplier};
use crate::netlist::{GateKind, Netlist, Node};
use crate::rng::RngSource;
use crate::{Error, Result};

/// Simulated execution cost of one or more evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CostReport {
    pub two_input_gate_evals: u64,
    pub not_evals: u64,
    pub sequential_ms: f64,
    pub critical_path_ms: f64,
}

impl Add for CostReport {
    type Output = CostReport;

    fn add(self, rhs: CostReport) -> CostReport {
        CostReport {
            two_input_gate_evals: self.two_input_gate_evals + rhs.two_input_gate_evals,
            not_evals: self.not_evals + rhs.not_evals,
            sequential_ms: self.sequential_ms + rhs.sequential_ms,
            critical_path_ms: self.critical_path_ms + rhs.critical_path_ms,
        }
    }
}

impl AddAssign for CostReport {
    fn add_assign(&mut self, rhs: CostReport) {
        *self = *self + rhs;
    }
}

impl core::iter::Sum for CostReport {
    fn sum<I: Iterator<Item = CostReport>>(iter: I) -> CostReport {
        iter.fold(CostReport::default(), Add::add)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
    pub gate_latency_ms: f64,
    pub not_latency_ms: f64,
    pub bootstrap_every_gate: bool,
    /// With `bootstrap_every_gate` off, a 2-input gate is bootstrapped (and
    /// charged) only when its depth along the path is a multiple of this.
    pub bootstrap_every_k: u32,
}

impl Default for CostParams {
    fn default() -> Self {
        Self {
            gate_latency_ms: 600.0,
            not_latency_ms: 0.0,
            bootstrap_every_gate: true,
            bootstrap_every_k: 1,
        }
    }
}

impl CostParams {
    pub fn validate(&self) -> Result<()> {
        let ok_latency = |v: f64| v.is_finite() && v >= 0.0;
        if !ok_latency(self.gate_latency_ms) || !ok_latency(self.not_latency_ms) {
            return Err(Error::Domain(
                "gate latencies must be finite and >= 0".into(),
            ));
        }
        if self.bootstrap_every_k == 0 {
            return Err(Error::Domain("bootstrap interval k must be >= 1".into()));
        }
        Ok(())
    }

    fn bootstraps_at(&self, depth: u32) -> bool {
        self.bootstrap_every_gate || depth.is_multiple_of(self.bootstrap_every_k)
    }
}

/// A machine that holds encrypted bits and evaluates gates on them.
pub trait BitBackend {
    type Cell: Clone;

    fn encrypt(&mut self, bit: bool) -> Self::Cell;
    /// `b` is `None` exactly for `Not`.
    fn gate(&mut self, kind: GateKind, a: &Self::Cell, b: Option<&Self::Cell>) -> Self::Cell;
    fn decrypt(&self, cell: &Self::Cell) -> bool;
    /// Cost accrued since the last [`take_report`](Self::take_report).
    fn cost_report(&self) -> CostReport;
    /// Returns the accrued cost and resets the counters.
    fn take_report(&mut self) -> CostReport;
}

/// Reference evaluator; counts gates but charges nothing.
#[derive(Debug, Clone, Default)]
pub struct PlainBackend {
    report: CostReport,
}

impl PlainBackend {
    pub fn new() -> Self {
        Self::default()
    }
}

impl BitBackend for PlainBackend {
    type Cell = bool;

    fn encrypt(&mut self, bit: bool) -> bool {
        bit
    }

    fn gate(&mut self, kind: GateKind, a: &bool, b: Option<&bool>) -> bool {
        if kind.is_two_input() {
            self.report.two_input_gate_evals += 1;
        } else {
            self.report.not_evals += 1;
        }
        kind.apply(*a, b.copied().unwrap_or(false))
    }

    fn decrypt(&self, cell: &bool) -> bool {
        *cell
    }

    fn cost_report(&self) -> CostReport {
        self.report
    }

    fn take_report(&mut self) -> CostReport {
        core::mem::take(&mut self.report)
    }
}

/// Simulated ciphertext: the plaintext bit plus path bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimCell {
    bit: bool,
    depth: u32,
    path_ms: f64,
}

/// Cost-simulating abstract HE machine.
#[derive(Debug, Clone, Default)]
pub struct SimBackend {
    params: CostParams,
    report: CostReport,
}

impl SimBackend {
    pub fn new(params: CostParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params,
            report: CostReport::default(),
        })
    }

    pub fn params(&self) -> &CostParams {
        &self.params
    }
}

impl BitBackend for SimBackend {
    type Cell = SimCell;

    fn encrypt(&mut self, bit: bool) -> SimCell {
        SimCell {
            bit,
            depth: 0,
            path_ms: 0.0,
        }
    }

    fn gate(&mut self, kind: GateKind, a: &SimCell, b: Option<&SimCell>) -> SimCell {
        let cell = if kind.is_two_input() {
            let b = b.expect("2-input gate needs two operands");
            let depth = a.depth.max(b.depth) + 1;
            let charge = if self.params.bootstraps_at(depth) {
                self.params.gate_latency_ms
            } else {
                0.0
            };
            self.report.two_input_gate_evals += 1;
            self.report.sequential_ms += charge;
            SimCell {
                bit: kind.apply(a.bit, b.bit),
                depth,
                path_ms: a.path_ms.max(b.path_ms) + charge,
            }
        } else {
            self.report.not_evals += 1;
            self.report.sequential_ms += self.params.not_latency_ms;
            SimCell {
                bit: kind.apply(a.bit, false),
                depth: a.depth,
                path_ms: a.path_ms + self.params.not_latency_ms,
            }
        };
        self.report.critical_path_ms = self.report.critical_path_ms.max(cell.path_ms);
        cell
    }

    fn decrypt(&self, cell: &SimCell) -> bool {
        cell.bit
    }

    fn cost_report(&self) -> CostReport {
        self.report
    }

    fn take_report(&mut self) -> CostReport {
        core::mem::take(&mut self.report)
    }
}

/// Evaluates `c` gate by gate on `backend`. The report covers everything the
/// backend accrued since its last `take_report`, normally just this call.
pub fn evaluate<B: BitBackend>(
    c: &Netlist,
    inputs: &[bool],
    backend: &mut B,
) -> Result<(Vec<bool>, CostReport)> {
    if inputs.len() != c.input_count() {
        return Err(Error::InputCount {
            expected: c.input_count(),
            actual: inputs.len(),
        });
    }
    let mut cells: Vec<B::Cell> = Vec::with_capacity(c.signal_count());
    for (id, node) in c.nodes().iter().enumerate() {
        let cell = match *node {
            Node::Input => backend.encrypt(inputs[id]),
            Node::Const(v) => backend.encrypt(v),
            Node::Alias(from) => cells[from as usize].clone(),
            Node::Gate(g) => {
                let gate = &c.gates()[g];
                let a = &cells[gate.inputs[0] as usize];
                let b = gate.inputs.get(1).map(|&i| &cells[i as usize]);
                backend.gate(gate.kind, a, b)
            }
        };
        cells.push(cell);
    }
    let outputs = c
        .outputs()
        .iter()
        .map(|&o| backend.decrypt(&cells[o as usize]))
        .collect();
    Ok((outputs, backend.take_report()))
}

pub(crate) fn int_to_bits(value: u64, width: u32) -> impl Iterator<Item = bool> {
    (0..width).map(move |i| value >> i & 1 == 1)
}

pub(crate) fn bits_to_int(bits: &[bool]) -> u64 {
    bits.iter().rev().fold(0, |acc, &b| acc << 1 | u64::from(b))
}

/// Encodes both operands, ANDs the streams through the SC multiplier netlist
/// on `backend`, and decodes. Returns the product as a value in `[0, 1]`.
pub fn run_sc_multiply<B: BitBackend>(
    a: u32,
    b: u32,
    n: Precision,
    rng_a: &mut RngSource,
    rng_b: &mut RngSource,
    backend: &mut B,
) -> Result<(f64, CostReport)> {
    let sa = ds_encode(a, n, rng_a)?;
    let sb = ds_encode(b, n, rng_b)?;
    let inputs: Vec<bool> = sa.iter().chain(sb.iter()).collect();
    let (out, report) = evaluate(&build_sc_and_multiplier(n), &inputs, backend)?;
    let product = Bitstream::from_bits(&out);
    Ok((product.popcount() as f64 / f64::from(n.max_value()), report))
}

/// Exact `a * b` through the array multiplier netlist on `backend`.
pub fn run_be_multiply<B: BitBackend>(
    a: u32,
    b: u32,
    n: Precision,
    backend: &mut B,
) -> Result<(u64, CostReport)> {
    for v in [a, b] {
        if v >= n.max_value() {
            return Err(Error::ValueOutOfRange {
                value: u64::from(v),
                max: u64::from(n.max_value() - 1),
            });
        }
    }
    let w = n.bits();
    let inputs: Vec<bool> = int_to_bits(a.into(), w)
        .chain(int_to_bits(b.into(), w))
        .collect();
    let (out, report) = evaluate(&build_array_multiplier(n), &inputs, backend)?;
    Ok((bits_to_int(&out), report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::{build_ripple_carry_adder, CircuitFamily};
    use crate::netlist::NetlistBuilder;
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    fn p(n: u32) -> Precision {
        Precision::new(n).unwrap()
    }

    fn single(kind: GateKind) -> Netlist {
        let mut b = NetlistBuilder::new(kind.arity() as u32);
        let inputs: Vec<u32> = (0..kind.arity() as u32).collect();
        let o = b.gate(kind, &inputs);
        b.finish(vec![o])
    }

    #[test]
    fn single_and_costs_one_gate_latency() {
        let (out, report) = evaluate(
            &single(GateKind::And),
            &[true, true],
            &mut SimBackend::default(),
        )
        .unwrap();
        assert_eq!(out, [true]);
        assert_eq!(
            report,
            CostReport {
                two_input_gate_evals: 1,
                not_evals: 0,
                sequential_ms: 600.0,
                critical_path_ms: 600.0
            }
        );
    }

    #[test]
    fn single_not_is_free() {
        let (out, report) =
            evaluate(&single(GateKind::Not), &[true], &mut SimBackend::default()).unwrap();
        assert_eq!(out, [false]);
        assert_eq!(
            report,
            CostReport {
                two_input_gate_evals: 0,
                not_evals: 1,
                sequential_ms: 0.0,
                critical_path_ms: 0.0
            }
        );
    }

    #[test]
    fn multiplier_three_bits() {
        let n = p(3);
        let c = build_array_multiplier(n);
        let mut sim = SimBackend::default();
        let (value, report) = run_be_multiply(5, 6, n, &mut sim).unwrap();
        assert_eq!(value, 30);
        let stats = c.stats();
        assert_eq!(report.two_input_gate_evals, stats.two_input_gate_count);
        assert_eq!(report.critical_path_ms, stats.depth as f64 * 600.0);
        assert_eq!(
            report.sequential_ms,
            stats.two_input_gate_count as f64 * 600.0
        );
    }

    #[test]
    fn be_multiply_examples() {
        let mut sim = SimBackend::default();
        assert_eq!(run_be_multiply(3, 5, p(4), &mut sim).unwrap().0, 15);
        assert_eq!(run_be_multiply(0, 13, p(4), &mut sim).unwrap().0, 0);
        let (_, report) = run_be_multiply(9, 11, p(4), &mut sim).unwrap();
        let analytic = 96.0 * 600.0;
        assert!((report.sequential_ms - analytic).abs() <= 0.35 * analytic);
        assert!(run_be_multiply(16, 1, p(4), &mut sim).is_err());
    }

    #[test]
    fn sc_multiply_examples() {
        let n = p(4);
        let mut sim = SimBackend::default();
        let (v, report) = run_sc_multiply(
            16,
            11,
            n,
            &mut RngSource::counter(0),
            &mut RngSource::counter(0),
            &mut sim,
        )
        .unwrap();
        assert_eq!(v, 11.0 / 16.0);
        assert_eq!(report.two_input_gate_evals, 16);
        assert_eq!(report.critical_path_ms, 600.0);
        assert_eq!(report.sequential_ms, 16.0 * 600.0);

        let (zero, _) = run_sc_multiply(
            0,
            9,
            n,
            &mut RngSource::seeded_uniform(1, 0),
            &mut RngSource::seeded_uniform(1, 1),
            &mut sim,
        )
        .unwrap();
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn wrong_input_width_is_error() {
        let c = build_ripple_carry_adder(p(2));
        assert!(matches!(
            evaluate(&c, &[true; 3], &mut PlainBackend::new()),
            Err(Error::InputCount {
                expected: 4,
                actual: 3
            })
        ));
    }

    #[test]
    fn backends_agree_on_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for family in CircuitFamily::ALL {
            for n in [1, 3, 4] {
                let c = family.build(p(n));
                for _ in 0..1000 {
                    let inputs: Vec<bool> = (0..c.input_count())
                        .map(|_| rng.next_u32() & 1 == 1)
                        .collect();
                    let (plain, _) = evaluate(&c, &inputs, &mut PlainBackend::new()).unwrap();
                    let (sim, _) = evaluate(&c, &inputs, &mut SimBackend::default()).unwrap();
                    assert_eq!(plain, sim);
                    assert_eq!(plain, c.eval(&inputs).unwrap());
                }
            }
        }
    }

    #[test]
    fn reports_add_fieldwise() {
        let c = build_array_multiplier(p(3));
        let mut sim = SimBackend::default();
        let (_, first) = evaluate(&c, &[true; 6], &mut sim).unwrap();
        let (_, second) = evaluate(&build_ripple_carry_adder(p(3)), &[false; 6], &mut sim).unwrap();
        let total = first + second;
        assert_eq!(
            total.two_input_gate_evals,
            first.two_input_gate_evals + second.two_input_gate_evals
        );
        assert_eq!(
            total.sequential_ms,
            first.sequential_ms + second.sequential_ms
        );
        assert_eq!(
            total.critical_path_ms,
            first.critical_path_ms + second.critical_path_ms
        );
        assert_eq!([first, second].into_iter().sum::<CostReport>(), total);
    }

    #[test]
    fn bootstrap_elision_never_exceeds_default() {
        let c = build_array_multiplier(p(5));
        let inputs = [true; 10];
        let (_, full) = evaluate(&c, &inputs, &mut SimBackend::default()).unwrap();
        for k in 1..=6 {
            let params = CostParams {
                bootstrap_every_gate: false,
                bootstrap_every_k: k,
                ..CostParams::default()
            };
            let (_, elided) = evaluate(&c, &inputs, &mut SimBackend::new(params).unwrap()).unwrap();
            assert!(elided.critical_path_ms <= full.critical_path_ms);
            assert!(elided.sequential_ms <= full.sequential_ms);
            assert!(elided.critical_path_ms <= elided.sequential_ms);
            assert_eq!(elided.two_input_gate_evals, full.two_input_gate_evals);
            let expected_path = (c.stats().depth / u64::from(k)) as f64 * 600.0;
            assert_eq!(elided.critical_path_ms, expected_path, "k={k}");
            if k == 1 {
                assert_eq!(elided, full);
            }
        }
    }

    #[test]
    fn invalid_params_rejected() {
        let bad = CostParams {
            gate_latency_ms: -1.0,
            ..CostParams::default()
        };
        assert!(SimBackend::new(bad).is_err());
        let bad_k = CostParams {
            bootstrap_every_k: 0,
            ..CostParams::default()
        };
        assert!(SimBackend::new(bad_k).is_err());
    }

    #[test]
    fn not_latency_is_charged_when_configured() {
        let params = CostParams {
            not_latency_ms: 2.5,
            ..CostParams::default()
        };
        let mut b = NetlistBuilder::new(2);
        let x = b.not(0);
        let y = b.and(x, 1);
        let c = b.finish(vec![y]);
        let (_, r) = evaluate(&c, &[false, true], &mut SimBackend::new(params).unwrap()).unwrap();
        assert_eq!(r.sequential_ms, 602.5);
        assert_eq!(r.critical_path_ms, 602.5);
    }
}
