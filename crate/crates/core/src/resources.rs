//! Gate-count and depth estimates after decomposition into CNOTs and
//! single-qubit gates.
//!
//! Decomposition rules:
//! - initial `|+>^N` is one `H` per qubit, a basis state one `X` per set bit;
//! - `R_X`, `R_Y`, `R_Z` are one parameter gate;
//! - an XY pair is the ladder `CNOT, R_Z, CNOT` twice (the `XX` and `YY`
//!   halves), i.e. four CNOTs and two parameter gates; single-qubit basis
//!   changes are not counted;
//! - the phase separator is one `R_Z` per nonzero linear QUBO term followed
//!   by `CNOT, R_Z, CNOT` per nonzero quadratic term, in key order.
//!
//! Depth is as-soon-as-possible layering of the decomposed list.

use alloc::vec;
use alloc::vec::Vec;

use crate::ansatz::{Circuit, Gate, InitialState};
use crate::error::{Error, Result};
use crate::hamiltonian::QuboForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ResourceReport {
    pub depth: usize,
    pub cnot_count: usize,
    pub param_gate_count: usize,
    pub param_count: usize,
}

/// A gate of the decomposed circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primitive {
    Single { qubit: usize, parametric: bool },
    Cnot { control: usize, target: usize },
}

fn zz_ladder(out: &mut Vec<Primitive>, a: usize, b: usize) {
    out.push(Primitive::Cnot {
        control: a,
        target: b,
    });
    out.push(Primitive::Single {
        qubit: b,
        parametric: true,
    });
    out.push(Primitive::Cnot {
        control: a,
        target: b,
    });
}

/// Flatten `circuit` into primitives. `qubo` is required when the circuit has a phase separator.
pub fn decompose(circuit: &Circuit, qubo: Option<&QuboForm>) -> Result<Vec<Primitive>> {
    let n = circuit.n_qubits();
    let mut out = Vec::new();
    match circuit.initial() {
        InitialState::Uniform => out.extend((0..n).map(|q| Primitive::Single {
            qubit: q,
            parametric: false,
        })),
        InitialState::Basis(bits) => {
            out.extend((0..n).filter(|&q| bits.get(q)).map(|q| Primitive::Single {
                qubit: q,
                parametric: false,
            }))
        }
    }
    for g in circuit.gates() {
        match *g {
            Gate::H(q) | Gate::X(q) => out.push(Primitive::Single {
                qubit: q,
                parametric: false,
            }),
            Gate::Rx { qubit, .. } | Gate::Ry { qubit, .. } | Gate::Rz { qubit, .. } => {
                out.push(Primitive::Single {
                    qubit,
                    parametric: true,
                })
            }
            Gate::Cnot { control, target } => out.push(Primitive::Cnot { control, target }),
            Gate::Xy { a, b, .. } => {
                zz_ladder(&mut out, a, b);
                zz_ladder(&mut out, a, b);
            }
            Gate::DiagPhase { .. } => {
                let q = qubo.ok_or(Error::MissingQubo)?;
                if q.min_vars() > n {
                    return Err(Error::QubitOutOfRange {
                        qubit: q.min_vars() - 1,
                        n_qubits: n,
                    });
                }
                out.extend(q.linear().keys().map(|&a| Primitive::Single {
                    qubit: a,
                    parametric: true,
                }));
                for &(a, b) in q.quadratic().keys() {
                    zz_ladder(&mut out, a, b);
                }
            }
        }
    }
    Ok(out)
}

/// ASAP depth: each gate lands one layer after the latest gate on any of its qubits.
pub fn asap_depth(n_qubits: usize, prims: &[Primitive]) -> usize {
    let mut frontier = vec![0usize; n_qubits];
    for p in prims {
        match *p {
            Primitive::Single { qubit, .. } => frontier[qubit] += 1,
            Primitive::Cnot { control, target } => {
                let layer = frontier[control].max(frontier[target]) + 1;
                frontier[control] = layer;
                frontier[target] = layer;
            }
        }
    }
    frontier.into_iter().max().unwrap_or(0)
}

pub fn resources(circuit: &Circuit, qubo: Option<&QuboForm>) -> Result<ResourceReport> {
    let prims = decompose(circuit, qubo)?;
    Ok(ResourceReport {
        depth: asap_depth(circuit.n_qubits(), &prims),
        cnot_count: prims
            .iter()
            .filter(|p| matches!(p, Primitive::Cnot { .. }))
            .count(),
        param_gate_count: prims
            .iter()
            .filter(|p| {
                matches!(
                    p,
                    Primitive::Single {
                        parametric: true,
                        ..
                    }
                )
            })
            .count(),
        param_count: circuit.n_params(),
    })
}
