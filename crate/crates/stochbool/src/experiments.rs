//! Experiment sweeps that produce [`SweepRow`]s.
//!
//! Each configuration is computed independently (parallel over
//! configurations only) and the rows are sorted afterwards, so the output
//! does not depend on the number of worker threads.

use anyhow::{bail, ensure, Result};
use rayon::prelude::*;

use stochbool_core::accuracy::{
    classification_r2, generate_dataset, rmse_mult_sweep, train_float, InferenceMode, ScRngFamily,
    SweepMode,
};
use stochbool_core::backend::evaluate;
use stochbool_core::circuits::analytic_stats;
use stochbool_core::netlist::measure_stats;
use stochbool_core::perfmodel::{
    parallel_latency_ms, parallel_speedup, simd_speedup, simd_vector_ops, total_time_ms,
    vector_utilization,
};
use stochbool_core::{
    CircuitFamily, CostParams, Encoding, Netlist, PerfModelConfig, Precision, SimBackend,
    WorkloadPoint,
};

use crate::rows::{sort_rows, SweepRow};

/// `1, 2, 4, ...` up to and including the largest power of two `<= m_max`.
pub fn powers_of_two(m_max: u64) -> Vec<u64> {
    std::iter::successors(Some(1u64), |&m| m.checked_mul(2))
        .take_while(|&m| m <= m_max)
        .collect()
}

fn precisions(ns: &[u32]) -> Result<Vec<Precision>> {
    ns.iter().map(|&n| Ok(Precision::new(n)?)).collect()
}

fn precision_range(n_min: u32, n_max: u32) -> Result<Vec<Precision>> {
    ensure!(n_min <= n_max, "--n-min {n_min} exceeds --n-max {n_max}");
    precisions(&(n_min..=n_max).collect::<Vec<_>>())
}

pub struct StatsReport {
    pub rows: Vec<SweepRow>,
    pub netlist: Netlist,
}

/// Analytic against measured statistics of one circuit, plus the simulated
/// cost of evaluating it once under `cost`.
pub fn stats(circuit: CircuitFamily, n: u32, cost: CostParams) -> Result<StatsReport> {
    let p = Precision::new(n)?;
    cost.validate()?;
    let netlist = circuit.build(p);
    let analytic = analytic_stats(circuit, p);
    let measured = measure_stats(&netlist);
    // gate costs do not depend on the input values
    let zeros = vec![false; netlist.input_count()];
    let (_, report) = evaluate(&netlist, &zeros, &mut SimBackend::new(cost)?)?;

    let model_ms = analytic.two_input_gate_count as f64 * cost.gate_latency_ms;
    let name = circuit.name();
    let row = |metric: &str, value: f64| {
        SweepRow::new("stats", Some(n), name, 1, metric, value, model_ms)
    };
    let rows = vec![
        row("analytic_gates", analytic.two_input_gate_count as f64),
        row("measured_gates", measured.two_input_gate_count as f64),
        row("analytic_depth", analytic.depth as f64),
        row("measured_depth", measured.depth as f64),
        row("measured_not_gates", measured.not_count as f64),
        row("sim_sequential_ms", report.sequential_ms),
        row("sim_critical_path_ms", report.critical_path_ms),
    ];
    Ok(StatsReport { rows, netlist })
}

pub struct MultSweep {
    pub n_min: u32,
    pub n_max: u32,
    pub samples: u64,
    pub seed: u64,
    pub modes: Vec<SweepMode>,
    pub gate_ms: f64,
}

/// RMSE of each mode at each precision, with the single-threaded model
/// runtime of the matching multiplier.
pub fn mult_sweep(cfg: &MultSweep) -> Result<Vec<SweepRow>> {
    ensure!(cfg.samples >= 1, "--samples must be >= 1");
    ensure!(!cfg.modes.is_empty(), "no sweep modes given");
    let model = PerfModelConfig {
        gate_latency_ms: cfg.gate_ms,
        ..PerfModelConfig::default()
    };
    model.validate()?;
    let configs: Vec<(Precision, SweepMode)> = precision_range(cfg.n_min, cfg.n_max)?
        .into_iter()
        .flat_map(|n| cfg.modes.iter().map(move |&mode| (n, mode)))
        .collect();
    let mut rows = configs
        .par_iter()
        .map(|&(n, mode)| {
            let rmse = rmse_mult_sweep(n, mode, cfg.samples, cfg.seed)?;
            let enc = if mode.is_sc() {
                Encoding::Sc
            } else {
                Encoding::Be
            };
            let runtime = total_time_ms(enc, n, &model);
            Ok(SweepRow::new(
                "mult_sweep",
                Some(n.bits()),
                mode.name(),
                cfg.samples,
                "rmse",
                rmse,
                runtime,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    sort_rows(&mut rows);
    Ok(rows)
}

/// Parallel latency of both encodings and their ratio over `m` in powers of
/// two.
pub fn latency(ns: &[u32], m_max: u64, model: &PerfModelConfig) -> Result<Vec<SweepRow>> {
    model.validate()?;
    ensure!(m_max >= 1, "--m-max must be >= 1");
    let mut rows = Vec::new();
    for n in precisions(ns)? {
        for m in powers_of_two(m_max) {
            let w = WorkloadPoint::new(n, m)?;
            let be = parallel_latency_ms(Encoding::Be, w, model);
            let sc = parallel_latency_ms(Encoding::Sc, w, model);
            let nb = Some(n.bits());
            rows.push(SweepRow::new("latency", nb, "be", m, "latency_ms", be, be));
            rows.push(SweepRow::new("latency", nb, "sc", m, "latency_ms", sc, sc));
            rows.push(SweepRow::new(
                "latency",
                nb,
                "sc_over_be",
                m,
                "speedup",
                parallel_speedup(w, model),
                sc,
            ));
        }
    }
    sort_rows(&mut rows);
    Ok(rows)
}

/// SIMD vector-op counts, speedup and slot utilization over `m`.
pub fn simd(ns: &[u32], m_max: u64, model: &PerfModelConfig) -> Result<Vec<SweepRow>> {
    model.validate()?;
    ensure!(m_max >= 1, "--m-max must be >= 1");
    let c = model.gate_latency_ms;
    let mut rows = Vec::new();
    for n in precisions(ns)? {
        for m in powers_of_two(m_max) {
            let w = WorkloadPoint::new(n, m)?;
            let nb = Some(n.bits());
            for enc in [Encoding::Be, Encoding::Sc] {
                let ops = simd_vector_ops(enc, w, model) as f64;
                rows.push(SweepRow::new(
                    "simd",
                    nb,
                    enc.name(),
                    m,
                    "vector_ops",
                    ops,
                    ops * c,
                ));
                rows.push(SweepRow::new(
                    "simd",
                    nb,
                    enc.name(),
                    m,
                    "utilization",
                    vector_utilization(enc, w, model),
                    ops * c,
                ));
            }
            let sc_ms = simd_vector_ops(Encoding::Sc, w, model) as f64 * c;
            rows.push(SweepRow::new(
                "simd",
                nb,
                "sc_over_be",
                m,
                "speedup",
                simd_speedup(w, model),
                sc_ms,
            ));
        }
    }
    sort_rows(&mut rows);
    Ok(rows)
}

pub struct Classify {
    pub n_min: u32,
    pub n_max: u32,
    pub seeds: u64,
    pub d: usize,
    pub samples: usize,
    pub seed: u64,
    pub gate_ms: f64,
}

/// Dataset and SC-encoder seed of repetition `k`.
pub fn repetition_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_add(k)
}

fn ceil_log2(v: usize) -> u32 {
    usize::BITS - (v.max(1) - 1).leading_zeros()
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, var.sqrt())
}

/// Mean and sample standard deviation of R^2 across `seeds` repetitions for
/// the float baseline and for BE and SC inference at every precision.
///
/// The model runtime is the analytic gate cost of one inference: `d`
/// multiplications plus `d` accumulator additions for BE, `d` AND
/// multiplications for SC (the scaled-adder tree is wiring).
pub fn classify(cfg: &Classify) -> Result<Vec<SweepRow>> {
    ensure!(cfg.seeds >= 1, "--seeds must be >= 1");
    let ns = precision_range(cfg.n_min, cfg.n_max)?;
    let levels = ceil_log2(cfg.d + 1);
    if cfg.n_min < levels {
        bail!(
            "SC inference over {} terms needs n >= {levels}; raise --n-min or lower --d",
            cfg.d + 1
        );
    }

    let reps: Vec<u64> = (0..cfg.seeds).collect();
    let models = reps
        .par_iter()
        .map(|&k| {
            let s = repetition_seed(cfg.seed, k);
            let ds = generate_dataset(s, cfg.samples, cfg.d)?;
            let model = train_float(&ds)?;
            Ok((s, ds, model))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut configs = vec![(InferenceMode::Float, ns[0])];
    for &n in &ns {
        configs.push((InferenceMode::Be, n));
        configs.push((InferenceMode::Sc, n));
    }
    let jobs: Vec<(usize, usize)> = (0..configs.len())
        .flat_map(|c| (0..models.len()).map(move |r| (c, r)))
        .collect();
    let scores = jobs
        .par_iter()
        .map(|&(c, r)| {
            let (mode, n) = configs[c];
            let (s, ds, model) = &models[r];
            Ok(classification_r2(
                model,
                ds,
                mode,
                n,
                *s,
                ScRngFamily::default(),
            )?)
        })
        .collect::<Result<Vec<_>>>()?;

    let d = cfg.d as f64;
    let mut rows = Vec::new();
    for (c, &(mode, n)) in configs.iter().enumerate() {
        let chunk = &scores[c * models.len()..(c + 1) * models.len()];
        let label: Vec<f64> = chunk.iter().map(|p| p.label).collect();
        let response: Vec<f64> = chunk.iter().map(|p| p.response).collect();
        let nb = n.bits() as f64;
        let gates = match mode {
            InferenceMode::Float => 0.0,
            InferenceMode::Be => d * (6.0 * nb * nb + 5.0 * (2.0 * nb + f64::from(levels))),
            InferenceMode::Sc => d * f64::from(n.max_value()),
        };
        let runtime = gates * cfg.gate_ms;
        let n_col = (mode != InferenceMode::Float).then_some(n.bits());
        let m = cfg.samples as u64;
        let (lm, ls) = mean_std(&label);
        let (rm, rs) = mean_std(&response);
        for (metric, value) in [
            ("r2_label_mean", lm),
            ("r2_label_std", ls),
            ("r2_response_mean", rm),
            ("r2_response_std", rs),
        ] {
            rows.push(SweepRow::new(
                "classify",
                n_col,
                mode.name(),
                m,
                metric,
                value,
                runtime,
            ));
        }
    }
    sort_rows(&mut rows);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers() {
        assert_eq!(powers_of_two(1), [1]);
        assert_eq!(powers_of_two(10), [1, 2, 4, 8]);
        assert_eq!(powers_of_two(16), [1, 2, 4, 8, 16]);
        assert!(powers_of_two(0).is_empty());
    }

    #[test]
    fn mean_and_sample_std() {
        assert_eq!(mean_std(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn stats_rows_for_be_mult() {
        let r = stats(CircuitFamily::BeMult, 4, CostParams::default()).unwrap();
        let get = |name: &str| {
            r.rows
                .iter()
                .find(|x| x.metric_name == name)
                .unwrap()
                .metric_value
        };
        assert_eq!(get("analytic_gates"), 96.0);
        assert_eq!(get("analytic_depth"), 32.0);
        assert_eq!(get("sim_sequential_ms"), get("measured_gates") * 600.0);
    }

    #[test]
    fn classify_rejects_too_few_bits() {
        let cfg = Classify {
            n_min: 2,
            n_max: 4,
            seeds: 1,
            d: 4,
            samples: 50,
            seed: 1,
            gate_ms: 600.0,
        };
        assert!(classify(&cfg).is_err());
    }

    #[test]
    fn float_row_appears_once_without_precision() {
        let cfg = Classify {
            n_min: 3,
            n_max: 4,
            seeds: 2,
            d: 2,
            samples: 60,
            seed: 1,
            gate_ms: 600.0,
        };
        let rows = classify(&cfg).unwrap();
        let float: Vec<_> = rows.iter().filter(|r| r.mode == "float").collect();
        assert_eq!(float.len(), 4);
        assert!(float
            .iter()
            .all(|r| r.n.is_none() && r.runtime_ms_model == 0.0));
        assert_eq!(rows.len(), 4 * (1 + 2 * 2));
    }
}
