//! Closed-form performance models for one multiplication (or a workload of
//! `m` independent ones): single-threaded total time, latency on `T`
//! threads, and SIMD vector-op counts. Gate counts come from
//! [`analytic_stats`], never from measured netlists.

use alloc::format;
use core::fmt;
use core::str::FromStr;

use crate::bitstream::Precision;
use crate::circuits::{analytic_stats, CircuitFamily};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Encoding {
    Be,
    Sc,
}

impl Encoding {
    pub fn name(self) -> &'static str {
        match self {
            Encoding::Be => "be",
            Encoding::Sc => "sc",
        }
    }

    fn multiplier(self) -> CircuitFamily {
        match self {
            Encoding::Be => CircuitFamily::BeMult,
            Encoding::Sc => CircuitFamily::ScMult,
        }
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Critical-path depth assumed for the BE multiplier in the latency model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BeDepthModel {
    /// `2n` gates, i.e. `n * 1200 ms` at 600 ms per gate.
    #[default]
    Paper2n,
    /// `8n` gates, the array-multiplier depth formula.
    Array8n,
}

impl BeDepthModel {
    pub fn name(self) -> &'static str {
        match self {
            BeDepthModel::Paper2n => "paper2n",
            BeDepthModel::Array8n => "array8n",
        }
    }
}

impl FromStr for BeDepthModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "paper2n" => Ok(BeDepthModel::Paper2n),
            "array8n" => Ok(BeDepthModel::Array8n),
            _ => Err(Error::Domain(format!("unknown depth model {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerfModelConfig {
    pub gate_latency_ms: f64,
    pub threads: u64,
    pub vector_length: u64,
    pub be_depth_model: BeDepthModel,
}

impl Default for PerfModelConfig {
    fn default() -> Self {
        Self {
            gate_latency_ms: 600.0,
            threads: 64,
            vector_length: 8192,
            be_depth_model: BeDepthModel::Paper2n,
        }
    }
}

impl PerfModelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.threads == 0 || self.vector_length == 0 {
            return Err(Error::Domain(
                "threads and vector length must be >= 1".into(),
            ));
        }
        if !(self.gate_latency_ms.is_finite() && self.gate_latency_ms >= 0.0) {
            return Err(Error::Domain("gate latency must be finite and >= 0".into()));
        }
        Ok(())
    }
}

/// `m` independent multiplications at precision `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkloadPoint {
    pub n: Precision,
    pub m: u64,
}

impl WorkloadPoint {
    pub fn new(n: Precision, m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain(
                "workload needs at least one multiplication".into(),
            ));
        }
        Ok(Self { n, m })
    }
}

fn gates(encoding: Encoding, n: Precision) -> u64 {
    analytic_stats(encoding.multiplier(), n).two_input_gate_count
}

/// Single-threaded time of one multiplication: `6n^2 c` for BE, `2^n c` for SC.
pub fn total_time_ms(encoding: Encoding, n: Precision, cfg: &PerfModelConfig) -> f64 {
    gates(encoding, n) as f64 * cfg.gate_latency_ms
}

/// Largest precision at which SC total time is below BE total time, or 0 if
/// there is none.
pub fn crossover_precision(cfg: &PerfModelConfig) -> u32 {
    Precision::all()
        .filter(|&n| total_time_ms(Encoding::Sc, n, cfg) < total_time_ms(Encoding::Be, n, cfg))
        .map(Precision::bits)
        .max()
        .unwrap_or(0)
}

fn latency_depth(encoding: Encoding, n: Precision, cfg: &PerfModelConfig) -> u64 {
    let n_bits = u64::from(n.bits());
    match (encoding, cfg.be_depth_model) {
        (Encoding::Sc, _) => analytic_stats(CircuitFamily::ScMult, n).depth,
        (Encoding::Be, BeDepthModel::Paper2n) => 2 * n_bits,
        (Encoding::Be, BeDepthModel::Array8n) => analytic_stats(CircuitFamily::BeMult, n).depth,
    }
}

/// Latency with `T` threads and no parallelization overhead:
/// `max(depth, ceil(m * work / T)) * c`.
pub fn parallel_latency_ms(encoding: Encoding, w: WorkloadPoint, cfg: &PerfModelConfig) -> f64 {
    let depth = latency_depth(encoding, w.n, cfg);
    let work = w.m.saturating_mul(gates(encoding, w.n));
    let rounds = depth.max(work.div_ceil(cfg.threads));
    rounds as f64 * cfg.gate_latency_ms
}

pub fn parallel_speedup(w: WorkloadPoint, cfg: &PerfModelConfig) -> f64 {
    parallel_latency_ms(Encoding::Be, w, cfg) / parallel_latency_ms(Encoding::Sc, w, cfg)
}

/// Vector-gate operations with SIMD width `V`.
///
/// BE is bit-sliced (`n` vectors of `m` slots), so every gate of the
/// multiplier runs once per group of `V` numbers. SC bits pack freely, so
/// the `m * 2^n` AND gates fill whole vectors.
pub fn simd_vector_ops(encoding: Encoding, w: WorkloadPoint, cfg: &PerfModelConfig) -> u64 {
    let v = cfg.vector_length;
    match encoding {
        Encoding::Be => gates(Encoding::Be, w.n) * w.m.div_ceil(v),
        Encoding::Sc => w.m.saturating_mul(gates(Encoding::Sc, w.n)).div_ceil(v),
    }
}

pub fn simd_speedup(w: WorkloadPoint, cfg: &PerfModelConfig) -> f64 {
    simd_vector_ops(Encoding::Be, w, cfg) as f64 / simd_vector_ops(Encoding::Sc, w, cfg) as f64
}

/// Fraction of occupied slots across all vectors used.
pub fn vector_utilization(encoding: Encoding, w: WorkloadPoint, cfg: &PerfModelConfig) -> f64 {
    let v = cfg.vector_length;
    let used = match encoding {
        Encoding::Be => w.m,
        Encoding::Sc => w.m * u64::from(w.n.max_value()),
    };
    used as f64 / (used.div_ceil(v) * v) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Precision {
        Precision::new(n).unwrap()
    }

    fn w(n: u32, m: u64) -> WorkloadPoint {
        WorkloadPoint::new(p(n), m).unwrap()
    }

    #[test]
    fn total_time_examples() {
        let cfg = PerfModelConfig::default();
        assert_eq!(total_time_ms(Encoding::Be, p(8), &cfg), 230_400.0);
        assert_eq!(total_time_ms(Encoding::Sc, p(8), &cfg), 153_600.0);
        assert_eq!(total_time_ms(Encoding::Sc, p(1), &cfg), 1200.0);
    }

    #[test]
    fn crossover_is_eight_bits() {
        let cfg = PerfModelConfig::default();
        assert_eq!(crossover_precision(&cfg), 8);
        // 2^8 = 256 < 384 = 6*64, 2^9 = 512 > 486 = 6*81
        assert!(total_time_ms(Encoding::Sc, p(8), &cfg) < total_time_ms(Encoding::Be, p(8), &cfg));
        assert!(total_time_ms(Encoding::Sc, p(9), &cfg) > total_time_ms(Encoding::Be, p(9), &cfg));
    }

    #[test]
    fn latency_examples() {
        let cfg = PerfModelConfig::default();
        // 256 ANDs over 64 threads take 4 rounds; one round needs T >= 2^n
        assert_eq!(parallel_latency_ms(Encoding::Sc, w(8, 1), &cfg), 2400.0);
        let wide = PerfModelConfig {
            threads: 256,
            ..cfg
        };
        assert_eq!(parallel_latency_ms(Encoding::Sc, w(8, 1), &wide), 600.0);
        assert_eq!(parallel_latency_ms(Encoding::Be, w(8, 1), &cfg), 9600.0);
        for n in 2..=12 {
            assert_eq!(
                parallel_latency_ms(Encoding::Be, w(n, 1), &cfg),
                f64::from(n) * 1200.0
            );
        }
        assert_eq!(
            parallel_latency_ms(Encoding::Sc, w(8, 1024), &cfg),
            2_457_600.0
        );
        let array = PerfModelConfig {
            be_depth_model: BeDepthModel::Array8n,
            ..cfg
        };
        assert_eq!(
            parallel_latency_ms(Encoding::Be, w(8, 1), &array),
            64.0 * 600.0
        );
    }

    #[test]
    fn speedup_examples() {
        let cfg = PerfModelConfig::default();
        assert_eq!(parallel_speedup(w(8, 1), &cfg), 4.0);
        assert_eq!(
            parallel_speedup(
                w(8, 1),
                &PerfModelConfig {
                    threads: 256,
                    ..cfg
                }
            ),
            16.0
        );
        assert_eq!(parallel_speedup(w(8, 1 << 20), &cfg), 1.5);
        let big = parallel_speedup(w(12, 1 << 20), &cfg);
        assert!((big - 864.0 / 4096.0).abs() < 1e-12);
        let single = PerfModelConfig { threads: 1, ..cfg };
        assert_eq!(parallel_speedup(w(8, 1), &single), 1.5);
    }

    #[test]
    fn simd_examples() {
        let cfg = PerfModelConfig::default();
        assert_eq!(simd_vector_ops(Encoding::Be, w(8, 1), &cfg), 384);
        assert_eq!(simd_vector_ops(Encoding::Sc, w(8, 1), &cfg), 1);
        assert_eq!(simd_vector_ops(Encoding::Sc, w(8, 8192), &cfg), 256);
        assert_eq!(simd_speedup(w(8, 1), &cfg), 384.0);
        assert_eq!(simd_speedup(w(8, 8192), &cfg), 1.5);
        assert_eq!(simd_speedup(w(13, 1), &cfg), 1014.0);
    }

    #[test]
    fn utilization_examples() {
        let cfg = PerfModelConfig::default();
        assert_eq!(vector_utilization(Encoding::Sc, w(13, 1), &cfg), 1.0);
        assert_eq!(vector_utilization(Encoding::Sc, w(8, 1), &cfg), 0.03125);
        assert_eq!(vector_utilization(Encoding::Be, w(5, 8192), &cfg), 1.0);
    }

    #[test]
    fn invalid_inputs() {
        assert!(WorkloadPoint::new(p(4), 0).is_err());
        let cfg = PerfModelConfig {
            threads: 0,
            ..PerfModelConfig::default()
        };
        assert!(cfg.validate().is_err());
        assert!("paper3n".parse::<BeDepthModel>().is_err());
    }
}
