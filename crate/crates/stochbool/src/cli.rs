use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use stochbool_core::accuracy::{generate_dataset_with_noise, SweepMode, DEFAULT_NOISE_STD};
use stochbool_core::{BeDepthModel, CircuitFamily, CostParams, PerfModelConfig};

use crate::dataset_csv::write_dataset_csv;
use crate::experiments::{self, Classify, MultSweep};
use crate::netlist_json::to_json_string;
use crate::rows::{write_rows, OutputFormat, SweepRow};

#[derive(Debug, Parser)]
#[command(
    name = "stochbool",
    version,
    about = "Stochastic vs binary-encoded arithmetic under a per-gate HE cost model"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Latency of one bootstrapped 2-input gate, in ms.
    #[arg(long, global = true, default_value_t = 600.0)]
    pub gate_ms: f64,
    /// Latency of a NOT gate, in ms.
    #[arg(long, global = true, default_value_t = 0.0)]
    pub not_ms: f64,
    /// Bootstrap only every k-th gate along each path.
    #[arg(long, global = true)]
    pub no_bootstrap_every_gate: bool,
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub bootstrap_every_k: u32,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

impl GlobalOpts {
    pub fn cost_params(&self) -> CostParams {
        CostParams {
            gate_latency_ms: self.gate_ms,
            not_latency_ms: self.not_ms,
            bootstrap_every_gate: !self.no_bootstrap_every_gate,
            bootstrap_every_k: self.bootstrap_every_k,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic and measured gate count and depth of one circuit.
    Stats {
        #[arg(long, value_parser = parse_circuit)]
        circuit: CircuitFamily,
        #[arg(long)]
        n: u32,
        /// Also write the netlist as JSON.
        #[arg(long)]
        emit_netlist: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multiplication RMSE per precision and mode.
    MultSweep {
        #[arg(long, default_value_t = 2)]
        n_min: u32,
        #[arg(long, default_value_t = 10)]
        n_max: u32,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        /// Comma-separated: sc_sim, sc_sim_shared, sc_ideal, be_quant.
        #[arg(long, value_delimiter = ',', default_value = "sc_sim,sc_ideal,be_quant", value_parser = parse_mode)]
        modes: Vec<SweepMode>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parallel latency speedup of SC over BE on T threads.
    Latency {
        /// Precisions, e.g. `4,8,12` or `4-12`.
        #[arg(long, default_value = "4-12", value_parser = parse_n_list)]
        n: NList,
        #[arg(long, default_value_t = 65536)]
        m_max: u64,
        /// Modeled thread count T.
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(1..))]
        threads: u64,
        #[arg(long, default_value = "paper2n", value_parser = parse_depth_model)]
        depth_model: BeDepthModel,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SIMD vector-op speedup and slot utilization.
    Simd {
        #[arg(long, default_value = "2-13", value_parser = parse_n_list)]
        n: NList,
        #[arg(long, default_value_t = 65536)]
        m_max: u64,
        #[arg(long, default_value_t = 8192, value_parser = clap::value_parser!(u64).range(1..))]
        vector_length: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// R^2 of float, BE and SC classifier inference across seeds.
    Classify {
        #[arg(long, default_value_t = 3)]
        n_min: u32,
        #[arg(long, default_value_t = 12)]
        n_max: u32,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        seeds: u64,
        #[arg(long, default_value_t = 4, value_parser = parse_positive)]
        d: usize,
        #[arg(long, default_value_t = 500, value_parser = parse_samples)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the synthetic classification dataset as CSV.
    Dataset {
        #[arg(long, default_value_t = 4, value_parser = parse_positive)]
        d: usize,
        #[arg(long, default_value_t = 500, value_parser = parse_samples)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_NOISE_STD)]
        noise: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NList(pub Vec<u32>);

fn parse_circuit(s: &str) -> Result<CircuitFamily, String> {
    s.parse()
        .map_err(|e| format!("{e}; expected be-add, be-mult, sc-mult or sc-sadd"))
}

fn parse_mode(s: &str) -> Result<SweepMode, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_depth_model(s: &str) -> Result<BeDepthModel, String> {
    s.parse()
        .map_err(|e| format!("{e}; expected paper2n or array8n"))
}

fn parse_positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(format!("{s:?} is not a positive integer")),
    }
}

fn parse_samples(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v >= 10 => Ok(v),
        _ => Err(format!("{s:?}: need at least 10 samples")),
    }
}

/// Comma-separated precisions and inclusive `a-b` ranges.
pub fn parse_n_list(s: &str) -> Result<NList, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        let num = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad precision {t:?}"))
        };
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(format!("empty range {part:?}"));
                }
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(NList(out))
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot write {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(rows: &[SweepRow], format: OutputFormat, out: Option<&Path>) -> Result<()> {
    write_rows(rows, format, open_out(out)?)
}

pub fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = g.jobs {
        pool = pool.num_threads(t);
    }
    let pool = pool.build().context("cannot start worker threads")?;
    pool.install(|| dispatch(g, &cli.command))
}

fn dispatch(g: &GlobalOpts, command: &Command) -> Result<()> {
    let model = |threads: u64, vector_length: u64, be_depth_model: BeDepthModel| PerfModelConfig {
        gate_latency_ms: g.gate_ms,
        threads,
        vector_length,
        be_depth_model,
    };
    let defaults = PerfModelConfig::default();
    match command {
        Command::Stats {
            circuit,
            n,
            emit_netlist,
            out,
        } => {
            let report = experiments::stats(*circuit, *n, g.cost_params())?;
            if let Some(path) = emit_netlist {
                std::fs::write(path, to_json_string(&report.netlist)?)
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            emit(&report.rows, g.format, out.as_deref())
        }
        Command::MultSweep {
            n_min,
            n_max,
            samples,
            modes,
            out,
        } => {
            let rows = experiments::mult_sweep(&MultSweep {
                n_min: *n_min,
                n_max: *n_max,
                samples: *samples,
                seed: g.seed,
                modes: modes.clone(),
                gate_ms: g.gate_ms,
            })?;
            emit(&rows, g.format, out.as_deref())
        }
        Command::Latency {
            n,
            m_max,
            threads,
            depth_model,
            out,
        } => {
            let cfg = model(*threads, defaults.vector_length, *depth_model);
            emit(
                &experiments::latency(&n.0, *m_max, &cfg)?,
                g.format,
                out.as_deref(),
            )
        }
        Command::Simd {
            n,
            m_max,
            vector_length,
            out,
        } => {
            let cfg = model(defaults.threads, *vector_length, defaults.be_depth_model);
            emit(
                &experiments::simd(&n.0, *m_max, &cfg)?,
                g.format,
                out.as_deref(),
            )
        }
        Command::Classify {
            n_min,
            n_max,
            seeds,
            d,
            samples,
            out,
        } => {
            let rows = experiments::classify(&Classify {
                n_min: *n_min,
                n_max: *n_max,
                seeds: *seeds,
                d: *d,
                samples: *samples,
                seed: g.seed,
                gate_ms: g.gate_ms,
            })?;
            emit(&rows, g.format, out.as_deref())
        }
        Command::Dataset {
            d,
            samples,
            noise,
            out,
        } => {
            let ds = generate_dataset_with_noise(g.seed, *samples, *d, *noise)?;
            write_dataset_csv(&ds, open_out(out.as_deref())?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn n_lists() {
        assert_eq!(parse_n_list("4-6,2,6").unwrap(), NList(vec![2, 4, 5, 6]));
        assert_eq!(parse_n_list("8").unwrap(), NList(vec![8]));
        assert!(parse_n_list("6-4").is_err());
        assert!(parse_n_list("a").is_err());
    }

    #[test]
    fn zero_samples_is_a_usage_error() {
        let r = Cli::try_parse_from(["stochbool", "mult-sweep", "--samples", "0"]);
        assert!(r.is_err());
    }
}
