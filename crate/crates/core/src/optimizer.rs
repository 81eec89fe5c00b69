//! Expectation values, adjoint-method gradients and the Adam loop.
//!
//! The loss is `<psi(theta)| H |psi(theta)>` for a diagonal `H` given as a
//! table of `2^N` values. Gradients use one forward and one backward sweep:
//! for a gate `U = exp(-i a G)` the derivative with respect to `a` is
//! `2 Im <lambda| G |psi>` where `lambda` is `H psi` propagated back to that gate.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ansatz::{apply_gate, Circuit, Gate};
use crate::error::{Error, Result};
use crate::factorized::{self, ProductState};
use crate::statevector::{BasisDistribution, Generator, StateVector};

/// How to evaluate a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Use the per-cluster product form when the circuit splits, the dense simulator otherwise.
    #[default]
    Auto,
    /// Always simulate the full register.
    Dense,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub loss: f64,
    pub gradient: Vec<f64>,
}

fn check_table(circuit: &Circuit, table: &[f64]) -> Result<()> {
    let dim = 1usize << circuit.n_qubits();
    if table.len() != dim {
        return Err(Error::LengthMismatch {
            what: "diagonal table",
            expected: dim,
            found: table.len(),
        });
    }
    Ok(())
}

/// `<psi| H |psi>`. `table` is the diagonal of `H` and also feeds any phase separator.
pub fn cost(circuit: &Circuit, params: &[f64], table: &[f64]) -> Result<f64> {
    cost_with(circuit, params, table, Strategy::Auto)
}

pub fn cost_with(
    circuit: &Circuit,
    params: &[f64],
    table: &[f64],
    strategy: Strategy,
) -> Result<f64> {
    circuit.check_params(params)?;
    check_table(circuit, table)?;
    if strategy == Strategy::Auto && factorized::split(circuit)?.is_some() {
        return Ok(ProductState::simulate(circuit, params)?
            .marginal_costs(table)?
            .0);
    }
    crate::ansatz::simulate(circuit, params, Some(table))?.expectation_diagonal(table)
}

pub fn gradient(circuit: &Circuit, params: &[f64], table: &[f64]) -> Result<Vec<f64>> {
    Ok(cost_and_gradient(circuit, params, table)?.gradient)
}

pub fn cost_and_gradient(circuit: &Circuit, params: &[f64], table: &[f64]) -> Result<Evaluation> {
    cost_and_gradient_with(circuit, params, table, Strategy::Auto, None)
}

/// Loss and gradient; `observe` sees the output distribution before the backward sweep.
pub fn cost_and_gradient_with(
    circuit: &Circuit,
    params: &[f64],
    table: &[f64],
    strategy: Strategy,
    observe: Option<&mut dyn FnMut(&dyn BasisDistribution)>,
) -> Result<Evaluation> {
    circuit.check_params(params)?;
    check_table(circuit, table)?;
    let mut gradient = vec![0.0; params.len()];
    if strategy == Strategy::Auto {
        if let Some(locals) = factorized::split(circuit)? {
            let mut clusters = Vec::with_capacity(locals.len());
            let mut states = Vec::with_capacity(locals.len());
            for lc in &locals {
                let mut s = lc.initial.clone();
                for g in &lc.gates {
                    apply_gate(&mut s, g, params, None, false)?;
                }
                clusters.push(lc.qubits.clone());
                states.push(s);
            }
            let product = ProductState::new(circuit.n_qubits(), clusters, states)?;
            if let Some(f) = observe {
                f(&product);
            }
            let (loss, eff) = product.marginal_costs(table)?;
            for ((lc, state), local_table) in locals.iter().zip(product.states()).zip(&eff) {
                backward(state.clone(), &lc.gates, params, local_table, &mut gradient)?;
            }
            return Ok(Evaluation { loss, gradient });
        }
    }
    let psi = crate::ansatz::simulate(circuit, params, Some(table))?;
    if let Some(f) = observe {
        f(&psi);
    }
    let loss = psi.expectation_diagonal(table)?;
    backward(psi, circuit.gates(), params, table, &mut gradient)?;
    Ok(Evaluation { loss, gradient })
}

/// Adjoint sweep from the final state `psi` of `gates`, adding into `gradient`.
fn backward(
    mut psi: StateVector,
    gates: &[Gate],
    params: &[f64],
    table: &[f64],
    gradient: &mut [f64],
) -> Result<()> {
    let mut lambda = psi.clone();
    lambda.assign_diagonal_product(&psi, table)?;
    for g in gates.iter().rev() {
        if let Some(angle) = g.angle() {
            let (gen, weight) = match *g {
                Gate::Rx { qubit, .. } => (Generator::PauliX(qubit), 0.5),
                Gate::Ry { qubit, .. } => (Generator::PauliY(qubit), 0.5),
                Gate::Rz { qubit, .. } => (Generator::PauliZ(qubit), 0.5),
                Gate::Xy { a, b, .. } => (Generator::XyPair(a, b), 1.0),
                Gate::DiagPhase { .. } => (Generator::Diagonal(table), 1.0),
                _ => unreachable!("gate without angle"),
            };
            let ov = lambda.generator_overlap(&psi, gen)?;
            gradient[angle.slot] += 2.0 * weight * angle.scale * ov.im;
        }
        apply_gate(&mut psi, g, params, Some(table), true)?;
        apply_gate(&mut lambda, g, params, Some(table), true)?;
    }
    Ok(())
}

/// Stop once the relative loss change stays below `rel_tol` for `window` consecutive iterations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateauStop {
    pub rel_tol: f64,
    pub window: usize,
}

impl Default for PlateauStop {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            window: 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub max_iters: usize,
    pub plateau_stop: Option<PlateauStop>,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.05,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            max_iters: 300,
            plateau_stop: None,
        }
    }
}

impl AdamConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidConfig(
                "learning rate must be positive and finite",
            ));
        }
        if !(0.0..1.0).contains(&self.beta1) || !(0.0..1.0).contains(&self.beta2) {
            return Err(Error::InvalidConfig(
                "Adam moment decays must lie in [0, 1)",
            ));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(Error::InvalidConfig("epsilon must be positive and finite"));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1"));
        }
        if let Some(s) = self.plateau_stop {
            if !(s.rel_tol >= 0.0) || s.window == 0 {
                return Err(Error::InvalidConfig(
                    "plateau stop needs rel_tol >= 0 and window >= 1",
                ));
            }
        }
        Ok(())
    }
}

/// `losses[k]` and `grad_norms[k]` are taken at the parameters before update `k`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub losses: Vec<f64>,
    pub grad_norms: Vec<f64>,
    pub final_params: Vec<f64>,
}

impl Trajectory {
    pub fn final_loss(&self) -> Option<f64> {
        self.losses.last().copied()
    }

    pub fn iterations(&self) -> usize {
        self.losses.len()
    }
}

/// Uniform draws on `[-pi, pi)` from a seeded ChaCha8 stream.
pub fn random_init(n_params: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_params)
        .map(|_| rng.gen_range(-core::f64::consts::PI..core::f64::consts::PI))
        .collect()
}

pub fn adam_minimize(
    circuit: &Circuit,
    table: &[f64],
    init: &[f64],
    cfg: &AdamConfig,
) -> Result<Trajectory> {
    adam_minimize_observed(circuit, table, init, cfg, Strategy::Auto, &mut |_, _| {})
}

/// Adam on the expectation of `table`. `observer(k, dist)` sees the output
/// distribution at the parameters of iteration `k`.
pub fn adam_minimize_observed(
    circuit: &Circuit,
    table: &[f64],
    init: &[f64],
    cfg: &AdamConfig,
    strategy: Strategy,
    observer: &mut dyn FnMut(usize, &dyn BasisDistribution),
) -> Result<Trajectory> {
    cfg.validate()?;
    circuit.check_params(init)?;
    check_table(circuit, table)?;
    let mut theta = init.to_vec();
    let mut m = vec![0.0; theta.len()];
    let mut v = vec![0.0; theta.len()];
    let mut traj = Trajectory::default();
    let mut quiet = 0usize;
    for k in 0..cfg.max_iters {
        let mut see = |d: &dyn BasisDistribution| observer(k, d);
        let ev = cost_and_gradient_with(circuit, &theta, table, strategy, Some(&mut see))?;
        if !ev.loss.is_finite() {
            return Err(Error::NonFinite {
                iteration: k,
                what: "loss",
            });
        }
        if ev.gradient.iter().any(|g| !g.is_finite()) {
            return Err(Error::NonFinite {
                iteration: k,
                what: "gradient",
            });
        }
        let norm = libm::sqrt(ev.gradient.iter().map(|g| g * g).sum());
        if let (Some(stop), Some(&prev)) = (cfg.plateau_stop, traj.losses.last()) {
            let scale = libm::fabs(prev).max(f64::MIN_POSITIVE);
            if libm::fabs(ev.loss - prev) / scale < stop.rel_tol {
                quiet += 1;
            } else {
                quiet = 0;
            }
        }
        traj.losses.push(ev.loss);
        traj.grad_norms.push(norm);
        if cfg.plateau_stop.is_some_and(|s| quiet >= s.window) {
            break;
        }
        let t = (k + 1) as i32;
        let c1 = 1.0 - libm::pow(cfg.beta1, t as f64);
        let c2 = 1.0 - libm::pow(cfg.beta2, t as f64);
        for i in 0..theta.len() {
            let g = ev.gradient[i];
            m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
            v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
            let mh = m[i] / c1;
            let vh = v[i] / c2;
            theta[i] -= cfg.learning_rate * mh / (libm::sqrt(vh) + cfg.epsilon);
        }
    }
    traj.final_params = theta;
    Ok(traj)
}
