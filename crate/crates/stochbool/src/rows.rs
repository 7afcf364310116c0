//! The flat record type every experiment emits, and its CSV/JSON writers.

use std::io::Write;

use serde::Serialize;

pub const CSV_HEADER: [&str; 7] = [
    "experiment",
    "n",
    "mode",
    "m",
    "metric_name",
    "metric_value",
    "runtime_ms_model",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub experiment: String,
    /// `None` where precision does not apply (the float baseline).
    pub n: Option<u32>,
    pub mode: String,
    /// Workload size or sample count; 1 when unused.
    pub m: u64,
    pub metric_name: String,
    pub metric_value: f64,
    pub runtime_ms_model: f64,
}

impl SweepRow {
    pub fn new(
        experiment: &str,
        n: Option<u32>,
        mode: &str,
        m: u64,
        metric_name: &str,
        metric_value: f64,
        runtime_ms_model: f64,
    ) -> Self {
        Self {
            experiment: experiment.to_owned(),
            n,
            mode: mode.to_owned(),
            m,
            metric_name: metric_name.to_owned(),
            metric_value,
            runtime_ms_model,
        }
    }
}

/// Stable sort by `(experiment, n, mode, m)`; metrics of one configuration
/// keep their emission order.
pub fn sort_rows(rows: &mut [SweepRow]) {
    rows.sort_by(|a, b| {
        (&a.experiment, a.n, &a.mode, a.m).cmp(&(&b.experiment, b.n, &b.mode, b.m))
    });
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

pub fn write_rows<W: Write>(rows: &[SweepRow], format: OutputFormat, out: W) -> anyhow::Result<()> {
    match format {
        OutputFormat::Csv => write_csv(rows, out),
        OutputFormat::Json => write_json(rows, out),
    }
}

fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> anyhow::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.experiment.clone(),
            r.n.map(|n| n.to_string()).unwrap_or_default(),
            r.mode.clone(),
            r.m.to_string(),
            r.metric_name.clone(),
            r.metric_value.to_string(),
            r.runtime_ms_model.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn write_json<W: Write>(rows: &[SweepRow], mut out: W) -> anyhow::Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}
