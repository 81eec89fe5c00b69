use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use uflp_vqa::experiment::{
    self, parse_seeds, resolve_instance, Algorithm, ExperimentConfig, Lambda, Problem,
};
use uflp_vqa::instance_file::{instance_to_json, save_instance};
use uflp_vqa::qubo_to_json;
use uflp_vqa::report::{self, Format};
use uflp_vqa_core::hamiltonian::{qubo_full, qubo_pfs};
use uflp_vqa_core::optimizer::PlateauStop;
use uflp_vqa_core::uflp::brute_force;
use uflp_vqa_core::{AdamConfig, MixerSchedule};

/// Variational solvers for the uncapacitated facility location problem.
#[derive(Debug, Parser)]
#[command(name = "uflp-vqa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train one algorithm on one instance for each seed.
    Run(RunArgs),
    /// Sweep instances x algorithms x layer counts with shared seeds.
    Compare(CompareArgs),
    /// Exhaustively solve an instance.
    Oracle(OracleArgs),
    /// Print depth, CNOT and parameter counts of a circuit.
    Resources(CircuitArgs),
    /// Print a text diagram of a circuit.
    Circuit(CircuitArgs),
    /// Print the QUBO coefficients used as the cost.
    DumpQubo(DumpQuboArgs),
    /// Write a registry instance as a JSON instance file.
    ExportInstance {
        #[arg(long)]
        instance: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct TrainArgs {
    /// Penalty weight or `default`.
    #[arg(long, default_value = "default")]
    lambda: Lambda,
    /// Seeds: `0..10`, `0-9` or `1,2,3`.
    #[arg(long, default_value = "0..10")]
    seeds: String,
    #[arg(long, default_value_t = 0.05)]
    lr: f64,
    #[arg(long, default_value_t = 300)]
    iters: usize,
    /// Stop once the loss stops changing (relative change < 1e-8 for 20 iterations).
    #[arg(long)]
    plateau_stop: bool,
    /// VQA-PFS: one mixer after the last HEA layer instead of one per layer.
    #[arg(long)]
    final_mixer_only: bool,
    /// Score only the first optimal bitstring.
    #[arg(long)]
    single_optimum: bool,
    /// Write zero wall times so repeated runs are byte-identical.
    #[arg(long)]
    omit_timing: bool,
    /// Include per-iteration losses (JSON only).
    #[arg(long)]
    losses: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

impl TrainArgs {
    fn config(&self, algorithm: Algorithm, instance: String, p: usize) -> Result<ExperimentConfig> {
        let adam = AdamConfig {
            learning_rate: self.lr,
            max_iters: self.iters,
            plateau_stop: self.plateau_stop.then(PlateauStop::default),
            ..AdamConfig::default()
        };
        Ok(ExperimentConfig {
            lambda: self.lambda,
            adam,
            schedule: if self.final_mixer_only {
                MixerSchedule::FinalOnly
            } else {
                MixerSchedule::PerLayer
            },
            single_optimum: self.single_optimum,
            omit_timing: self.omit_timing,
            keep_losses: self.losses,
            ..ExperimentConfig::new(algorithm, instance, p, parse_seeds(&self.seeds)?)
        })
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    algorithm: Algorithm,
    /// Registry key (`instance-01` .. `instance-12`) or JSON file.
    #[arg(long)]
    instance: String,
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[command(flatten)]
    train: TrainArgs,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// Comma-separated; defaults to the five 2x2 instances.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "instance-01,instance-02,instance-03,instance-04,instance-05"
    )]
    instances: Vec<String>,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "qaoa,qaoa-plus,hea,vqa-pfs"
    )]
    algorithms: Vec<Algorithm>,
    /// Comma-separated layer counts.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    p: Vec<usize>,
    #[command(flatten)]
    train: TrainArgs,
}

#[derive(Debug, Args)]
struct OracleArgs {
    #[arg(long)]
    instance: String,
    #[arg(long, default_value = "default")]
    lambda: Lambda,
}

#[derive(Debug, Args)]
struct CircuitArgs {
    #[arg(long, value_enum)]
    algorithm: Algorithm,
    #[arg(long)]
    instance: String,
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long, default_value = "default")]
    lambda: Lambda,
    #[arg(long)]
    final_mixer_only: bool,
}

impl CircuitArgs {
    fn problem(&self) -> Result<Problem> {
        let inst = resolve_instance(&self.instance)?;
        let schedule = if self.final_mixer_only {
            MixerSchedule::FinalOnly
        } else {
            MixerSchedule::PerLayer
        };
        Problem::new(
            &inst,
            self.algorithm,
            self.p,
            self.lambda.resolve(&inst),
            schedule,
        )
    }
}

#[derive(Debug, Args)]
struct DumpQuboArgs {
    #[arg(long)]
    instance: String,
    #[arg(long, default_value = "default")]
    lambda: Lambda,
    /// Include the one-facility-per-customer row penalty.
    #[arg(long)]
    full: bool,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(a) => {
            let cfg = a.train.config(a.algorithm, a.instance, a.p)?;
            let record = experiment::run(&cfg)?;
            report::emit(&[record], a.train.format, a.train.out.as_deref())?;
        }
        Command::Compare(a) => {
            let base = a.train.config(Algorithm::VqaPfs, String::new(), 1)?;
            let records = experiment::compare(&a.instances, &a.algorithms, &a.p, &base)?;
            report::emit(&records, a.train.format, a.train.out.as_deref())?;
        }
        Command::Oracle(a) => {
            let inst = resolve_instance(&a.instance)?;
            let lambda = a.lambda.resolve(&inst);
            let r = brute_force(&inst, lambda)?;
            println!("instance       {}", inst.name);
            println!("lambda         {lambda}");
            println!("optimal value  {}", r.optimal_value);
            if let Some(k) = inst.known_optimal {
                let note = if k == r.optimal_value {
                    ""
                } else {
                    "  (differs from the computed optimum)"
                };
                println!("listed value   {k}{note}");
            }
            println!("evaluations    {}", r.evaluations);
            for b in &r.optimal_bits {
                println!("optimal bits   {b}");
            }
        }
        Command::Resources(a) => {
            let p = a.problem()?;
            let r = p.resources;
            println!("algorithm    {}", a.algorithm);
            println!("qubits       {}", p.circuit.n_qubits());
            println!("depth        {}", r.depth);
            println!("cnots        {}", r.cnot_count);
            println!("param_gates  {}", r.param_gate_count);
            println!("params       {}", r.param_count);
        }
        Command::Circuit(a) => print!("{}", a.problem()?.circuit),
        Command::DumpQubo(a) => {
            let inst = resolve_instance(&a.instance)?;
            let lambda = a.lambda.resolve(&inst);
            let q = if a.full {
                qubo_full(&inst, lambda)
            } else {
                qubo_pfs(&inst, lambda)
            };
            println!("{}", serde_json::to_string_pretty(&qubo_to_json(&q))?);
        }
        Command::ExportInstance { instance, out } => {
            let inst = resolve_instance(&instance)?;
            match out {
                Some(path) => {
                    save_instance(&inst, &path).with_context(|| format!("exporting {instance}"))?
                }
                None => println!("{}", instance_to_json(&inst)),
            }
        }
    }
    Ok(())
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
    fn parses_run_flags_and_rejects_unknown_algorithms() {
        let cli = Cli::try_parse_from([
            "uflp-vqa",
            "run",
            "--algorithm",
            "hea",
            "--instance",
            "instance-01",
            "--losses",
        ]);
        assert!(cli.is_ok());
        let bad = Cli::try_parse_from([
            "uflp-vqa",
            "run",
            "--algorithm",
            "nope",
            "--instance",
            "instance-01",
        ]);
        assert!(bad.is_err());
    }
}
