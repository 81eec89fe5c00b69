//! CSV and JSON output of run records.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use crate::experiment::RunRecord;

pub const CSV_HEADER: [&str; 14] = [
    "instance",
    "algorithm",
    "p",
    "seed",
    "lambda",
    "final_loss",
    "success_prob",
    "iters_to_plateau",
    "depth",
    "cnots",
    "param_gates",
    "params",
    "infeasible_mass",
    "wall_seconds",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// One long-format row per (record, seed).
#[derive(Debug, Serialize)]
struct Row<'a> {
    instance: &'a str,
    algorithm: &'a str,
    p: usize,
    seed: u64,
    lambda: f64,
    final_loss: f64,
    success_prob: f64,
    iters_to_plateau: usize,
    depth: usize,
    cnots: usize,
    param_gates: usize,
    params: usize,
    infeasible_mass: f64,
    wall_seconds: f64,
}

pub fn write_csv<W: Write>(records: &[RunRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        for s in &r.seeds {
            w.serialize(Row {
                instance: &r.instance,
                algorithm: r.algorithm.name(),
                p: r.p,
                seed: s.seed,
                lambda: r.lambda,
                final_loss: s.final_loss,
                success_prob: s.success_prob,
                iters_to_plateau: s.iters_to_plateau,
                depth: r.resources.depth,
                cnots: r.resources.cnots,
                param_gates: r.resources.param_gates,
                params: r.resources.params,
                infeasible_mass: s.infeasible_mass,
                wall_seconds: s.wall_seconds,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(records: &[RunRecord], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, records)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_records<W: Write>(records: &[RunRecord], format: Format, out: W) -> Result<()> {
    match format {
        Format::Csv => write_csv(records, out),
        Format::Json => write_json(records, out),
    }
}

/// Write to `path`, or to stdout when `path` is `None`.
pub fn emit(records: &[RunRecord], format: Format, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p).with_context(|| format!("cannot write {}", p.display()))?;
            write_records(records, format, io::BufWriter::new(file))
                .with_context(|| format!("writing {}", p.display()))
        }
        None => write_records(records, format, io::stdout().lock()),
    }
}
