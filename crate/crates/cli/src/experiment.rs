//! Experiment configuration, single runs and comparison sweeps.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use uflp_vqa_core::ansatz::{build_hea, build_qaoa, build_qaoa_plus, build_vqa_pfs_with};
use uflp_vqa_core::hamiltonian::{diagonal_table, mixer_pairs, qubo_full, qubo_pfs};
use uflp_vqa_core::metrics::{
    self, feasible_indices, infeasible_mass_over, iterations_to_plateau, success_probability,
};
use uflp_vqa_core::optimizer::{
    adam_minimize_observed, cost_and_gradient_with, random_init, Strategy,
};
use uflp_vqa_core::resources::resources;
use uflp_vqa_core::uflp::{brute_force, BruteForceResult};
use uflp_vqa_core::{
    registry, AdamConfig, Circuit, MixerSchedule, QuboForm, ResourceReport, UflpInstance,
};

use crate::instance_file::load_instance;

/// Relative band used for iterations-to-plateau.
pub const PLATEAU_BAND: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Qaoa,
    QaoaPlus,
    Hea,
    VqaPfs,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Qaoa,
        Algorithm::QaoaPlus,
        Algorithm::Hea,
        Algorithm::VqaPfs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Qaoa => "qaoa",
            Algorithm::QaoaPlus => "qaoa-plus",
            Algorithm::Hea => "hea",
            Algorithm::VqaPfs => "vqa-pfs",
        }
    }

    /// QAOA+ and VQA-PFS keep the customer blocks one-hot and train on the
    /// slack-penalised cost; QAOA and HEA need the row penalty as well.
    pub fn uses_full_penalty(self) -> bool {
        matches!(self, Algorithm::Qaoa | Algorithm::Hea)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .with_context(|| {
                format!("unknown algorithm `{s}` (expected qaoa, qaoa-plus, hea or vqa-pfs)")
            })
    }
}

/// Penalty weight: the instance's own value (or the `2 (max d + max g)` policy), or an explicit number.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Lambda {
    #[default]
    Default,
    Value(f64),
}

impl Lambda {
    pub fn resolve(self, inst: &UflpInstance) -> f64 {
        match self {
            Lambda::Default => inst.resolved_penalty(),
            Lambda::Value(v) => v,
        }
    }
}

impl FromStr for Lambda {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "default" {
            return Ok(Lambda::Default);
        }
        let v: f64 = s
            .parse()
            .with_context(|| format!("lambda `{s}` is neither `default` nor a number"))?;
        if !(v.is_finite() && v >= 0.0) {
            bail!("lambda must be finite and nonnegative, got {v}");
        }
        Ok(Lambda::Value(v))
    }
}

/// Parse `0..10`, `0-9`, `1,4,7` or mixtures like `0..3,9`.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b): (u64, u64) = (a.parse()?, b.parse()?);
            if a >= b {
                bail!("empty seed range `{part}`");
            }
            out.extend(a..b);
        } else if let Some((a, b)) = part.split_once('-') {
            let (a, b): (u64, u64) = (a.parse()?, b.parse()?);
            if a > b {
                bail!("empty seed range `{part}`");
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().with_context(|| format!("bad seed `{part}`"))?);
        }
    }
    if out.is_empty() {
        bail!("no seeds given");
    }
    Ok(out)
}

/// Registry key (`instance-07`) or path to a JSON instance file.
pub fn resolve_instance(spec: &str) -> Result<UflpInstance> {
    if let Some(inst) = registry::by_key(spec) {
        return Ok(inst);
    }
    let path = Path::new(spec);
    if path.exists() {
        return Ok(load_instance(path)?);
    }
    bail!("unknown instance `{spec}`: not a registry key (instance-01 .. instance-12) and no such file")
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub instance: String,
    pub p: usize,
    pub lambda: Lambda,
    pub seeds: Vec<u64>,
    pub adam: AdamConfig,
    pub schedule: MixerSchedule,
    /// Score only the first optimal string instead of all degenerate optima.
    pub single_optimum: bool,
    /// Record zero wall time so repeated runs produce identical output.
    pub omit_timing: bool,
    /// Keep every per-iteration loss in the record.
    pub keep_losses: bool,
}

impl ExperimentConfig {
    pub fn new(
        algorithm: Algorithm,
        instance: impl Into<String>,
        p: usize,
        seeds: Vec<u64>,
    ) -> Self {
        Self {
            algorithm,
            instance: instance.into(),
            p,
            lambda: Lambda::Default,
            seeds,
            adam: AdamConfig::default(),
            schedule: MixerSchedule::PerLayer,
            single_optimum: false,
            omit_timing: false,
            keep_losses: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 {
            bail!("p must be at least 1");
        }
        if self.seeds.is_empty() {
            bail!("at least one seed is required");
        }
        self.adam.validate()?;
        Ok(())
    }
}

/// Everything a run needs that does not depend on the seed.
#[derive(Debug, Clone)]
pub struct Problem {
    pub instance: UflpInstance,
    pub algorithm: Algorithm,
    pub p: usize,
    pub lambda: f64,
    pub circuit: Circuit,
    pub qubo: QuboForm,
    pub table: Vec<f64>,
    pub optimum: BruteForceResult,
    pub table_minimum: f64,
    pub resources: ResourceReport,
    feasible: Vec<usize>,
}

impl Problem {
    pub fn new(
        instance: &UflpInstance,
        algorithm: Algorithm,
        p: usize,
        lambda: f64,
        schedule: MixerSchedule,
    ) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            bail!("lambda must be finite and nonnegative, got {lambda}");
        }
        let l = instance.layout();
        let n = l.total_qubits();
        let mix = mixer_pairs(l.m, l.n);
        let circuit = match algorithm {
            Algorithm::Qaoa => build_qaoa(&l, p)?,
            Algorithm::QaoaPlus => build_qaoa_plus(&l, &mix, p)?,
            Algorithm::Hea => build_hea(n, p)?,
            Algorithm::VqaPfs => build_vqa_pfs_with(&l, &mix, p, schedule)?,
        };
        let qubo = if algorithm.uses_full_penalty() {
            qubo_full(instance, lambda)
        } else {
            qubo_pfs(instance, lambda)
        };
        let table = diagonal_table(&qubo, n)?;
        let table_minimum = table.iter().copied().fold(f64::INFINITY, f64::min);
        let optimum = brute_force(instance, lambda)?;
        let resources = resources(&circuit, circuit.has_diagonal().then_some(&qubo))?;
        Ok(Self {
            instance: instance.clone(),
            algorithm,
            p,
            lambda,
            circuit,
            qubo,
            table,
            optimum,
            table_minimum,
            resources,
            feasible: feasible_indices(&l),
        })
    }

    /// Train from `random_init(seed)` and score the final parameters.
    pub fn run_seed(
        &self,
        seed: u64,
        adam: &AdamConfig,
        single_optimum: bool,
    ) -> Result<SeedRecord> {
        let start = Instant::now();
        let mut optimal = self.optimum.optimal_indices();
        if single_optimum {
            optimal.truncate(1);
        }
        let init = random_init(self.circuit.n_params(), seed);
        let mut worst_infeasible: f64 = 0.0;
        let traj = adam_minimize_observed(
            &self.circuit,
            &self.table,
            &init,
            adam,
            Strategy::Auto,
            &mut |_, d| {
                worst_infeasible = worst_infeasible.max(infeasible_mass_over(d, &self.feasible));
            },
        )?;
        let mut success = 0.0;
        let mut score = Ok(());
        let final_eval = cost_and_gradient_with(
            &self.circuit,
            &traj.final_params,
            &self.table,
            Strategy::Auto,
            Some(&mut |d| {
                worst_infeasible = worst_infeasible.max(infeasible_mass_over(d, &self.feasible));
                match success_probability(d, &optimal) {
                    Ok(s) => success = s,
                    Err(e) => score = Err(e),
                }
            }),
        )?;
        score?;
        let mut losses = traj.losses;
        losses.push(final_eval.loss);
        let min_loss = losses.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(SeedRecord {
            seed,
            final_loss: final_eval.loss,
            min_loss,
            success_prob: success,
            iters_to_plateau: iterations_to_plateau(&losses, PLATEAU_BAND),
            iterations: losses.len() - 1,
            infeasible_mass: worst_infeasible,
            wall_seconds: start.elapsed().as_secs_f64(),
            losses,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedRecord {
    pub seed: u64,
    pub final_loss: f64,
    /// Smallest loss seen, including the final evaluation.
    pub min_loss: f64,
    pub success_prob: f64,
    pub iters_to_plateau: usize,
    /// Adam updates performed.
    pub iterations: usize,
    /// Largest probability outside the feasible space over all iterations.
    pub infeasible_mass: f64,
    pub wall_seconds: f64,
    /// Loss before each update, then the loss at the final parameters.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub losses: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Resources {
    pub depth: usize,
    pub cnots: usize,
    pub param_gates: usize,
    pub params: usize,
}

impl From<ResourceReport> for Resources {
    fn from(r: ResourceReport) -> Self {
        Self {
            depth: r.depth,
            cnots: r.cnot_count,
            param_gates: r.param_gate_count,
            params: r.param_count,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub median: f64,
    pub max: f64,
}

impl Summary {
    fn of(xs: &[f64]) -> Self {
        Self {
            mean: metrics::mean(xs).unwrap_or(f64::NAN),
            median: metrics::median(xs).unwrap_or(f64::NAN),
            max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub instance: String,
    pub algorithm: Algorithm,
    pub p: usize,
    pub lambda: f64,
    pub mixer_schedule: &'static str,
    pub learning_rate: f64,
    pub max_iters: usize,
    pub optimal_value: f64,
    pub optimal_count: usize,
    pub table_minimum: f64,
    pub resources: Resources,
    pub success_prob: Summary,
    pub seeds: Vec<SeedRecord>,
}

pub fn run(config: &ExperimentConfig) -> Result<RunRecord> {
    config.validate()?;
    let inst = resolve_instance(&config.instance)?;
    let problem = Problem::new(
        &inst,
        config.algorithm,
        config.p,
        config.lambda.resolve(&inst),
        config.schedule,
    )?;
    run_problem(&problem, config)
}

/// Run every seed of `config` on a prepared problem, in parallel; records keep seed order.
pub fn run_problem(problem: &Problem, config: &ExperimentConfig) -> Result<RunRecord> {
    let mut seeds = config
        .seeds
        .par_iter()
        .map(|&s| problem.run_seed(s, &config.adam, config.single_optimum))
        .collect::<Result<Vec<_>>>()?;
    for s in &mut seeds {
        if config.omit_timing {
            s.wall_seconds = 0.0;
        }
        if !config.keep_losses {
            s.losses.clear();
        }
    }
    let probs: Vec<f64> = seeds.iter().map(|s| s.success_prob).collect();
    Ok(RunRecord {
        instance: problem.instance.name.clone(),
        algorithm: problem.algorithm,
        p: problem.p,
        lambda: problem.lambda,
        mixer_schedule: match config.schedule {
            MixerSchedule::PerLayer => "per-layer",
            MixerSchedule::FinalOnly => "final-only",
        },
        learning_rate: config.adam.learning_rate,
        max_iters: config.adam.max_iters,
        optimal_value: problem.optimum.optimal_value,
        optimal_count: problem.optimum.optimal_bits.len(),
        table_minimum: problem.table_minimum,
        resources: problem.resources.into(),
        success_prob: Summary::of(&probs),
        seeds,
    })
}

/// Every (instance, algorithm, p) cell with the seeds and optimizer settings of `base`.
pub fn compare(
    instances: &[String],
    algorithms: &[Algorithm],
    ps: &[usize],
    base: &ExperimentConfig,
) -> Result<Vec<RunRecord>> {
    if instances.is_empty() || algorithms.is_empty() || ps.is_empty() {
        bail!("compare needs at least one instance, algorithm and p");
    }
    let mut out = Vec::with_capacity(instances.len() * algorithms.len() * ps.len());
    for spec in instances {
        let inst = resolve_instance(spec)?;
        for &algorithm in algorithms {
            for &p in ps {
                let cfg = ExperimentConfig {
                    algorithm,
                    instance: spec.clone(),
                    p,
                    ..base.clone()
                };
                cfg.validate()?;
                let problem =
                    Problem::new(&inst, algorithm, p, cfg.lambda.resolve(&inst), cfg.schedule)?;
                out.push(run_problem(&problem, &cfg)?);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_parse() {
        assert_eq!(parse_seeds("0..3").unwrap(), vec![0, 1, 2]);
        assert_eq!(parse_seeds("2-4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_seeds("7, 1,0..2").unwrap(), vec![7, 1, 0, 1]);
        assert!(parse_seeds("").is_err());
        assert!(parse_seeds("3..3").is_err());
        assert!(parse_seeds("x").is_err());
    }

    #[test]
    fn lambda_parse() {
        assert_eq!("default".parse::<Lambda>().unwrap(), Lambda::Default);
        assert_eq!("12.5".parse::<Lambda>().unwrap(), Lambda::Value(12.5));
        assert!("-1".parse::<Lambda>().is_err());
        assert!("nan".parse::<Lambda>().is_err());
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("qaoa+".parse::<Algorithm>().is_err());
    }

    #[test]
    fn unknown_instance_is_rejected() {
        assert!(resolve_instance("instance-99").is_err());
        assert!(resolve_instance("/no/such/file.json").is_err());
    }

    #[test]
    fn small_run_is_deterministic_and_bounded() {
        let mut cfg = ExperimentConfig::new(Algorithm::VqaPfs, "instance-01", 1, vec![3, 4]);
        cfg.adam.max_iters = 20;
        cfg.omit_timing = true;
        let a = run(&cfg).unwrap();
        assert_eq!(a, run(&cfg).unwrap());
        assert_eq!(a.optimal_value, 16.0);
        assert_eq!(a.seeds.len(), 2);
        for s in &a.seeds {
            assert!((0.0..=1.0).contains(&s.success_prob));
            assert!(s.infeasible_mass < 1e-10);
            assert!(s.min_loss >= a.table_minimum - 1e-9);
            assert_eq!(s.iterations, 20);
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = ExperimentConfig::new(Algorithm::Qaoa, "instance-01", 0, vec![0]);
        assert!(cfg.validate().is_err());
        cfg.p = 1;
        cfg.seeds.clear();
        assert!(cfg.validate().is_err());
    }
}
