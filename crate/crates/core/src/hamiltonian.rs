//! Phase-separator Hamiltonians as QUBO forms, their Pauli-Z images, and the
//! XY mixer pair structure.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::bits::{qubit_bit, qubit_mask};
use crate::error::{Error, Result};
use crate::uflp::UflpInstance;
use crate::MAX_QUBITS;

/// `constant + sum_a h_a b_a + sum_{a<b} J_ab b_a b_b` over binary variables.
///
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QuboForm {
    pub constant: f64,
    linear: BTreeMap<usize, f64>,
    quadratic: BTreeMap<(usize, usize), f64>,
}

fn accumulate<K: Ord + Copy>(map: &mut BTreeMap<K, f64>, key: K, c: f64) {
    if c == 0.0 {
        return;
    }
    let v = map.entry(key).or_insert(0.0);
    *v += c;
    if *v == 0.0 {
        map.remove(&key);
    }
}

impl QuboForm {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_constant(&mut self, c: f64) {
        self.constant += c;
    }

    pub fn add_linear(&mut self, a: usize, c: f64) {
        accumulate(&mut self.linear, a, c);
    }

    /// `c b_a b_b`; a repeated index folds into the linear term since `b^2 = b`.
    pub fn add_quadratic(&mut self, a: usize, b: usize, c: f64) {
        if a == b {
            self.add_linear(a, c);
        } else {
            accumulate(&mut self.quadratic, (a.min(b), a.max(b)), c);
        }
    }

    /// Add `weight (offset + sum_k c_k b_k)^2`.
    pub fn add_squared_affine(&mut self, terms: &[(usize, f64)], offset: f64, weight: f64) {
        if weight == 0.0 {
            return;
        }
        self.add_constant(weight * offset * offset);
        for (k, &(a, ca)) in terms.iter().enumerate() {
            self.add_linear(a, weight * (ca * ca + 2.0 * offset * ca));
            for &(b, cb) in &terms[k + 1..] {
                self.add_quadratic(a, b, weight * 2.0 * ca * cb);
            }
        }
    }

    pub fn linear(&self) -> &BTreeMap<usize, f64> {
        &self.linear
    }

    pub fn quadratic(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.quadratic
    }

    /// Largest variable index referenced plus one.
    pub fn min_vars(&self) -> usize {
        let l = self.linear.keys().next_back().map_or(0, |&a| a + 1);
        let q = self
            .quadratic
            .keys()
            .map(|&(_, b)| b + 1)
            .max()
            .unwrap_or(0);
        l.max(q)
    }

    /// Value on the basis index `index` of an `n_qubits` register.
    pub fn eval_index(&self, index: usize, n_qubits: usize) -> f64 {
        let bit = |a: usize| qubit_bit(index, n_qubits, a);
        let mut v = self.constant;
        for (&a, &c) in &self.linear {
            if bit(a) {
                v += c;
            }
        }
        for (&(a, b), &c) in &self.quadratic {
            if bit(a) && bit(b) {
                v += c;
            }
        }
        v
    }

    pub fn eval(&self, bits: &crate::BitString) -> f64 {
        self.eval_index(bits.index() as usize, bits.len())
    }

    /// Substitute `b = (1 - Z) / 2`.
    pub fn to_pauli_z(&self) -> PauliZForm {
        let mut z = PauliZForm {
            constant: self.constant,
            ..PauliZForm::default()
        };
        for (&a, &c) in &self.linear {
            z.constant += c / 2.0;
            accumulate(&mut z.z, a, -c / 2.0);
        }
        for (&(a, b), &c) in &self.quadratic {
            z.constant += c / 4.0;
            accumulate(&mut z.z, a, -c / 4.0);
            accumulate(&mut z.z, b, -c / 4.0);
            accumulate(&mut z.zz, (a, b), c / 4.0);
        }
        z
    }
}

/// `constant + sum_a h_a Z_a + sum_{a<b} J_ab Z_a Z_b`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PauliZForm {
    pub constant: f64,
    pub z: BTreeMap<usize, f64>,
    pub zz: BTreeMap<(usize, usize), f64>,
}

impl PauliZForm {
    /// Eigenvalue on basis index `index`, with `Z|0> = |0>` and `Z|1> = -|1>`.
    pub fn eval_index(&self, index: usize, n_qubits: usize) -> f64 {
        let s = |a: usize| {
            if qubit_bit(index, n_qubits, a) {
                -1.0
            } else {
                1.0
            }
        };
        let mut v = self.constant;
        for (&a, &c) in &self.z {
            v += c * s(a);
        }
        for (&(a, b), &c) in &self.zz {
            v += c * s(a) * s(b);
        }
        v
    }

    /// Substitute `Z = 1 - 2 b`.
    pub fn to_qubo(&self) -> QuboForm {
        let mut q = QuboForm {
            constant: self.constant,
            ..QuboForm::default()
        };
        for (&a, &c) in &self.z {
            q.add_constant(c);
            q.add_linear(a, -2.0 * c);
        }
        for (&(a, b), &c) in &self.zz {
            q.add_constant(c);
            q.add_linear(a, -2.0 * c);
            q.add_linear(b, -2.0 * c);
            q.add_quadratic(a, b, 4.0 * c);
        }
        q
    }
}

fn add_objective(q: &mut QuboForm, inst: &UflpInstance) {
    let l = inst.layout();
    for i in 0..inst.m() {
        for j in 0..inst.n() {
            q.add_linear(l.y_index(i, j), inst.service_cost(i, j));
        }
    }
    for j in 0..inst.n() {
        q.add_linear(l.x_index(j), inst.opening_cost(j));
    }
}

fn add_slack_penalty(q: &mut QuboForm, inst: &UflpInstance, lambda: f64) {
    let l = inst.layout();
    for i in 0..inst.m() {
        for j in 0..inst.n() {
            let terms = [
                (l.y_index(i, j), 1.0),
                (l.z_index(i, j), 1.0),
                (l.x_index(j), -1.0),
            ];
            q.add_squared_affine(&terms, 0.0, lambda);
        }
    }
}

/// Objective plus the slack penalty only; the one-hot rows are left to the mixer.
pub fn qubo_pfs(inst: &UflpInstance, lambda: f64) -> QuboForm {
    let mut q = QuboForm::new();
    add_objective(&mut q, inst);
    add_slack_penalty(&mut q, inst, lambda);
    q
}

/// Objective plus slack and one-hot row penalties, for ansatzes that search
/// the whole Hilbert space.
pub fn qubo_full(inst: &UflpInstance, lambda: f64) -> QuboForm {
    let mut q = qubo_pfs(inst, lambda);
    let l = inst.layout();
    for i in 0..inst.m() {
        let row: Vec<(usize, f64)> = (0..inst.n()).map(|j| (l.y_index(i, j), 1.0)).collect();
        q.add_squared_affine(&row, -1.0, lambda);
    }
    q
}

/// Nearest-neighbour XY pairs inside each customer block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixerSpec {
    pub pairs: Vec<(usize, usize)>,
}

/// Pairs `(j + i n, j + i n + 1)` for `i < m`, `j < n - 1`.
pub fn mixer_pairs(m: usize, n: usize) -> MixerSpec {
    let pairs = (0..m)
        .flat_map(|i| (0..n.saturating_sub(1)).map(move |j| (j + i * n, j + i * n + 1)))
        .collect();
    MixerSpec { pairs }
}

/// `qubo.eval` tabulated over every basis index of an `n_qubits` register.
pub fn diagonal_table(qubo: &QuboForm, n_qubits: usize) -> Result<Vec<f64>> {
    if n_qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            requested: n_qubits,
            max: MAX_QUBITS,
        });
    }
    if qubo.min_vars() > n_qubits {
        return Err(Error::QubitOutOfRange {
            qubit: qubo.min_vars() - 1,
            n_qubits,
        });
    }
    let lin: Vec<(usize, f64)> = qubo
        .linear
        .iter()
        .map(|(&a, &c)| (qubit_mask(n_qubits, a), c))
        .collect();
    let quad: Vec<(usize, f64)> = qubo
        .quadratic
        .iter()
        .map(|(&(a, b), &c)| (qubit_mask(n_qubits, a) | qubit_mask(n_qubits, b), c))
        .collect();
    Ok((0..1usize << n_qubits)
        .map(|idx| {
            let mut v = qubo.constant;
            for &(m, c) in &lin {
                if idx & m != 0 {
                    v += c;
                }
            }
            for &(m, c) in &quad {
                if idx & m == m {
                    v += c;
                }
            }
            v
        })
        .collect())
}
