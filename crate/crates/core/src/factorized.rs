//! Exact evaluation of circuits whose gates never couple certain qubit groups.
//!
//! If the two-qubit gates of a circuit split the register into several
//! connected clusters and no phase separator is present, the output state is
//! a tensor product of one small state per cluster. Expectations of an
//! arbitrary diagonal cost then need only one sweep over the cost table, and
//! each cluster's gradient is the gradient of its own small state against the
//! cost marginalised over the other clusters. VQA-PFS has this structure:
//! every customer block and the unconstrained HEA block are independent.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::ansatz::{Circuit, Gate, InitialState};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::statevector::{BasisDistribution, StateVector};

/// Connected components of the qubit interaction graph, each sorted, ordered by first qubit.
/// A phase-separator gate joins every qubit.
pub fn qubit_clusters(circuit: &Circuit) -> Vec<Vec<usize>> {
    let n = circuit.n_qubits();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    let mut union = |a: usize, b: usize| {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    };
    for g in circuit.gates() {
        match g.operands() {
            (ops, 2) => union(ops[0], ops[1]),
            (_, 0) => (1..n).for_each(|q| union(0, q)),
            _ => {}
        }
    }
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut slot_of_root = vec![usize::MAX; n];
    for q in 0..n {
        let r = find(&mut parent, q);
        if slot_of_root[r] == usize::MAX {
            slot_of_root[r] = clusters.len();
            clusters.push(Vec::new());
        }
        clusters[slot_of_root[r]].push(q);
    }
    clusters
}

/// Maps a global basis index to a cluster-local one with two table lookups.
#[derive(Debug, Clone)]
struct Gather {
    lo_bits: usize,
    lo: Vec<u32>,
    hi: Vec<u32>,
}

impl Gather {
    fn new(n_qubits: usize, qubits: &[usize]) -> Self {
        let lo_bits = n_qubits.min(12);
        let k = qubits.len();
        let local_of = |global: usize| -> u32 {
            let mut v = 0u32;
            for (j, &q) in qubits.iter().enumerate() {
                if global >> (n_qubits - 1 - q) & 1 == 1 {
                    v |= 1 << (k - 1 - j);
                }
            }
            v
        };
        let lo = (0..1usize << lo_bits).map(local_of).collect();
        let hi = (0..1usize << (n_qubits - lo_bits))
            .map(|h| local_of(h << lo_bits))
            .collect();
        Self { lo_bits, lo, hi }
    }

    #[inline]
    fn local(&self, index: usize) -> usize {
        (self.lo[index & ((1 << self.lo_bits) - 1)] | self.hi[index >> self.lo_bits]) as usize
    }
}

/// One cluster's share of a split circuit.
#[derive(Debug, Clone)]
pub(crate) struct LocalCircuit {
    pub qubits: Vec<usize>,
    pub initial: StateVector,
    pub gates: Vec<Gate>,
}

/// Split a circuit along its clusters. `None` when it does not factor.
pub(crate) fn split(circuit: &Circuit) -> Result<Option<Vec<LocalCircuit>>> {
    if circuit.has_diagonal() {
        return Ok(None);
    }
    let clusters = qubit_clusters(circuit);
    if clusters.len() < 2 {
        return Ok(None);
    }
    let mut position = vec![(0usize, 0usize); circuit.n_qubits()];
    for (c, qs) in clusters.iter().enumerate() {
        for (j, &q) in qs.iter().enumerate() {
            position[q] = (c, j);
        }
    }
    let mut locals: Vec<LocalCircuit> = Vec::with_capacity(clusters.len());
    for qs in clusters {
        let initial = match circuit.initial() {
            InitialState::Uniform => StateVector::uniform(qs.len())?,
            InitialState::Basis(bits) => {
                let local: Vec<bool> = qs.iter().map(|&q| bits.get(q)).collect();
                StateVector::basis_state(qs.len(), &BitString::from_bits(&local)?)?
            }
        };
        locals.push(LocalCircuit {
            qubits: qs,
            initial,
            gates: Vec::new(),
        });
    }
    for g in circuit.gates() {
        let (ops, k) = g.operands();
        debug_assert!(k > 0);
        let c = position[ops[0]].0;
        locals[c].gates.push(g.remap(|q| position[q].1));
    }
    Ok(Some(locals))
}

/// A tensor product of per-cluster states covering the whole register.
#[derive(Debug, Clone)]
pub struct ProductState {
    n_qubits: usize,
    clusters: Vec<Vec<usize>>,
    states: Vec<StateVector>,
    gathers: Vec<Gather>,
}

impl ProductState {
    /// `clusters` must partition `0..n_qubits`; `states[c]` is over `clusters[c]` in sorted order.
    pub fn new(
        n_qubits: usize,
        clusters: Vec<Vec<usize>>,
        states: Vec<StateVector>,
    ) -> Result<Self> {
        let mut seen = vec![false; n_qubits];
        for (qs, s) in clusters.iter().zip(&states) {
            if s.n_qubits() != qs.len() {
                return Err(Error::LengthMismatch {
                    what: "cluster state",
                    expected: qs.len(),
                    found: s.n_qubits(),
                });
            }
            for &q in qs {
                if q >= n_qubits || seen[q] {
                    return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
                }
                seen[q] = true;
            }
        }
        if clusters.len() != states.len() || seen.iter().any(|s| !s) {
            return Err(Error::InvalidConfig("clusters must partition the register"));
        }
        let gathers = clusters
            .iter()
            .map(|qs| Gather::new(n_qubits, qs))
            .collect();
        Ok(Self {
            n_qubits,
            clusters,
            states,
            gathers,
        })
    }

    /// Simulate a gate list that factors; errors if the circuit has a phase separator.
    pub fn simulate(circuit: &Circuit, params: &[f64]) -> Result<Self> {
        circuit.check_params(params)?;
        if circuit.has_diagonal() {
            return Err(Error::InvalidConfig(
                "circuits with a phase separator do not factor",
            ));
        }
        let locals = match split(circuit)? {
            Some(l) => l,
            None => {
                let s = crate::ansatz::simulate(circuit, params, None)?;
                return Self::new(
                    circuit.n_qubits(),
                    vec![(0..circuit.n_qubits()).collect()],
                    vec![s],
                );
            }
        };
        let mut clusters = Vec::with_capacity(locals.len());
        let mut states = Vec::with_capacity(locals.len());
        for lc in locals {
            let mut s = lc.initial;
            for g in &lc.gates {
                crate::ansatz::apply_gate(&mut s, g, params, None, false)?;
            }
            clusters.push(lc.qubits);
            states.push(s);
        }
        Self::new(circuit.n_qubits(), clusters, states)
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    /// Expand to a dense statevector.
    pub fn to_dense(&self) -> Result<StateVector> {
        let dim = 1usize << self.n_qubits;
        let amps = (0..dim)
            .map(|b| {
                self.states
                    .iter()
                    .zip(&self.gathers)
                    .fold(Complex64::new(1.0, 0.0), |acc, (s, g)| {
                        acc * s.amplitudes()[g.local(b)]
                    })
            })
            .collect();
        StateVector::from_amplitudes(self.n_qubits, amps)
    }

    /// Returns `<cost>` and, for every cluster, the cost averaged over the
    /// other clusters' distributions as a function of the cluster's own index.
    pub fn marginal_costs(&self, table: &[f64]) -> Result<(f64, Vec<Vec<f64>>)> {
        let dim = 1usize << self.n_qubits;
        if table.len() != dim {
            return Err(Error::LengthMismatch {
                what: "diagonal table",
                expected: dim,
                found: table.len(),
            });
        }
        let k = self.states.len();
        let probs: Vec<Vec<f64>> = self.states.iter().map(StateVector::probabilities).collect();
        let mut eff: Vec<Vec<f64>> = self.states.iter().map(|s| vec![0.0; s.dim()]).collect();
        let mut loc = vec![0usize; k];
        let mut pv = vec![0.0; k];
        let mut prefix = vec![1.0; k + 1];
        let mut total = 0.0;
        for (b, &c) in table.iter().enumerate() {
            for ci in 0..k {
                loc[ci] = self.gathers[ci].local(b);
                pv[ci] = probs[ci][loc[ci]];
                prefix[ci + 1] = prefix[ci] * pv[ci];
            }
            total += c * prefix[k];
            let mut suffix = 1.0;
            for ci in (0..k).rev() {
                eff[ci][loc[ci]] += c * prefix[ci] * suffix;
                suffix *= pv[ci];
            }
        }
        Ok((total, eff))
    }
}

impl BasisDistribution for ProductState {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn probability(&self, index: usize) -> f64 {
        self.states
            .iter()
            .zip(&self.gathers)
            .map(|(s, g)| s.probability(g.local(index)))
            .product()
    }
}
