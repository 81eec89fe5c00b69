//! Parametric circuits for QAOA, QAOA+, HEA and VQA-PFS.
//!
//! A [`Circuit`] is an initial product state followed by an ordered gate
//! list. Trainable angles are bound to parameter slots, optionally scaled,
//! so a slot may drive several gates (QAOA+ shares one `beta` between its
//! XY mixers and every `R_X` in a layer).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::hamiltonian::MixerSpec;
use crate::statevector::{SingleQubitGate, StateVector};
use crate::uflp::QubitLayout;

/// A slot binding: the gate angle is `scale * params[slot]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle {
    pub slot: usize,
    pub scale: f64,
}

impl Angle {
    pub fn slot(slot: usize) -> Self {
        Self { slot, scale: 1.0 }
    }

    pub fn scaled(slot: usize, scale: f64) -> Self {
        Self { slot, scale }
    }

    #[inline]
    pub fn value(&self, params: &[f64]) -> f64 {
        self.scale * params[self.slot]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Rx {
        qubit: usize,
        angle: Angle,
    },
    Ry {
        qubit: usize,
        angle: Angle,
    },
    Rz {
        qubit: usize,
        angle: Angle,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    /// `exp(-i beta (X_a X_b + Y_a Y_b))`
    Xy {
        a: usize,
        b: usize,
        angle: Angle,
    },
    /// `exp(-i gamma H_P)` with `H_P` supplied as a diagonal table at simulation time.
    DiagPhase {
        angle: Angle,
    },
}

impl Gate {
    pub fn angle(&self) -> Option<Angle> {
        match *self {
            Gate::Rx { angle, .. } | Gate::Ry { angle, .. } | Gate::Rz { angle, .. } => Some(angle),
            Gate::Xy { angle, .. } | Gate::DiagPhase { angle } => Some(angle),
            Gate::H(_) | Gate::X(_) | Gate::Cnot { .. } => None,
        }
    }

    /// Explicit qubit operands; empty for [`Gate::DiagPhase`], which acts on the whole register.
    pub fn operands(&self) -> ([usize; 2], usize) {
        match *self {
            Gate::H(q) | Gate::X(q) => ([q, 0], 1),
            Gate::Rx { qubit, .. } | Gate::Ry { qubit, .. } | Gate::Rz { qubit, .. } => {
                ([qubit, 0], 1)
            }
            Gate::Cnot { control, target } => ([control, target], 2),
            Gate::Xy { a, b, .. } => ([a, b], 2),
            Gate::DiagPhase { .. } => ([0, 0], 0),
        }
    }

    pub(crate) fn remap(&self, f: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(f(q)),
            Gate::X(q) => Gate::X(f(q)),
            Gate::Rx { qubit, angle } => Gate::Rx {
                qubit: f(qubit),
                angle,
            },
            Gate::Ry { qubit, angle } => Gate::Ry {
                qubit: f(qubit),
                angle,
            },
            Gate::Rz { qubit, angle } => Gate::Rz {
                qubit: f(qubit),
                angle,
            },
            Gate::Cnot { control, target } => Gate::Cnot {
                control: f(control),
                target: f(target),
            },
            Gate::Xy { a, b, angle } => Gate::Xy {
                a: f(a),
                b: f(b),
                angle,
            },
            Gate::DiagPhase { angle } => Gate::DiagPhase { angle },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// `|+>^N`
    Uniform,
    Basis(BitString),
}

/// How VQA-PFS schedules its XY mixer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MixerSchedule {
    /// One mixer with its own `beta` in every layer.
    #[default]
    PerLayer,
    /// A single mixer after the last HEA layer.
    FinalOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    initial: InitialState,
    gates: Vec<Gate>,
    n_params: usize,
}

impl Circuit {
    pub fn new(n_qubits: usize, initial: InitialState, n_params: usize) -> Result<Self> {
        if n_qubits > BitString::MAX_LEN {
            return Err(Error::TooManyQubits {
                requested: n_qubits,
                max: BitString::MAX_LEN,
            });
        }
        if let InitialState::Basis(bits) = &initial {
            if bits.len() != n_qubits {
                return Err(Error::LengthMismatch {
                    what: "initial bitstring",
                    expected: n_qubits,
                    found: bits.len(),
                });
            }
        }
        Ok(Self {
            n_qubits,
            initial,
            gates: Vec::new(),
            n_params,
        })
    }

    /// Append a gate after checking its operands and slot.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let (ops, k) = gate.operands();
        for &q in &ops[..k] {
            if q >= self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    n_qubits: self.n_qubits,
                });
            }
        }
        if k == 2 && ops[0] == ops[1] {
            return Err(Error::DuplicateQubit(ops[0]));
        }
        if let Some(a) = gate.angle() {
            if a.slot >= self.n_params {
                return Err(Error::BadParameterSlot {
                    slot: a.slot,
                    n_params: self.n_params,
                });
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Every parameter slot must be driven by at least one gate.
    pub fn validate(&self) -> Result<()> {
        let mut used = vec![false; self.n_params];
        for a in self.gates.iter().filter_map(Gate::angle) {
            used[a.slot] = true;
        }
        match used.iter().position(|u| !u) {
            Some(slot) => Err(Error::BadParameterSlot {
                slot,
                n_params: self.n_params,
            }),
            None => Ok(()),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn initial(&self) -> &InitialState {
        &self.initial
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn has_diagonal(&self) -> bool {
        self.gates
            .iter()
            .any(|g| matches!(g, Gate::DiagPhase { .. }))
    }

    pub fn initial_state(&self) -> Result<StateVector> {
        match &self.initial {
            InitialState::Uniform => StateVector::uniform(self.n_qubits),
            InitialState::Basis(bits) => StateVector::basis_state(self.n_qubits, bits),
        }
    }

    pub(crate) fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.n_params {
            return Err(Error::LengthMismatch {
                what: "parameter vector",
                expected: self.n_params,
                found: params.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_diag<'a>(&self, diag: Option<&'a [f64]>) -> Result<Option<&'a [f64]>> {
        match diag {
            Some(t) if t.len() != 1usize << self.n_qubits => Err(Error::LengthMismatch {
                what: "diagonal table",
                expected: 1 << self.n_qubits,
                found: t.len(),
            }),
            None if self.has_diagonal() => Err(Error::MissingDiagonal),
            d => Ok(d),
        }
    }
}

/// Apply `gate` (or its inverse when `inverse` is set) with bound parameters.
pub(crate) fn apply_gate(
    state: &mut StateVector,
    gate: &Gate,
    params: &[f64],
    diag: Option<&[f64]>,
    inverse: bool,
) -> Result<()> {
    let sign = if inverse { -1.0 } else { 1.0 };
    match *gate {
        Gate::H(q) => state.apply_single(q, SingleQubitGate::H),
        Gate::X(q) => state.apply_single(q, SingleQubitGate::X),
        Gate::Rx { qubit, angle } => {
            state.apply_single(qubit, SingleQubitGate::Rx(sign * angle.value(params)))
        }
        Gate::Ry { qubit, angle } => {
            state.apply_single(qubit, SingleQubitGate::Ry(sign * angle.value(params)))
        }
        Gate::Rz { qubit, angle } => {
            state.apply_single(qubit, SingleQubitGate::Rz(sign * angle.value(params)))
        }
        Gate::Cnot { control, target } => state.apply_cnot(control, target),
        Gate::Xy { a, b, angle } => state.apply_xy(a, b, sign * angle.value(params)),
        Gate::DiagPhase { angle } => {
            let table = diag.ok_or(Error::MissingDiagonal)?;
            state.apply_diagonal_phase(table, sign * angle.value(params))
        }
    }
}

/// Prepare the initial state and apply every gate in order.
pub fn simulate(circuit: &Circuit, params: &[f64], diag: Option<&[f64]>) -> Result<StateVector> {
    circuit.check_params(params)?;
    let diag = circuit.check_diag(diag)?;
    let mut state = circuit.initial_state()?;
    for g in &circuit.gates {
        apply_gate(&mut state, g, params, diag, false)?;
    }
    Ok(state)
}

fn check_layers(p: usize) -> Result<()> {
    if p == 0 {
        return Err(Error::ZeroLayers);
    }
    Ok(())
}

/// Standard QAOA: `|+>^N`, then per layer `exp(-i gamma_k H_P)` and `R_X(2 beta_k)` on every qubit.
///
/// Slots: `gamma_k = 2k`, `beta_k = 2k + 1`. The phase separator is the
/// fully penalised QUBO, supplied as a table to [`simulate`].
pub fn build_qaoa(layout: &QubitLayout, p: usize) -> Result<Circuit> {
    check_layers(p)?;
    let n = layout.total_qubits();
    let mut c = Circuit::new(n, InitialState::Uniform, 2 * p)?;
    for k in 0..p {
        c.push(Gate::DiagPhase {
            angle: Angle::slot(2 * k),
        })?;
        for q in 0..n {
            c.push(Gate::Rx {
                qubit: q,
                angle: Angle::scaled(2 * k + 1, 2.0),
            })?;
        }
    }
    Ok(c)
}

/// QAOA+: trivial feasible start, then per layer the slack-penalised phase
/// separator, XY mixers on the customer blocks, and `R_X(2 beta_k)` on every
/// unconstrained qubit sharing the mixer's slot.
pub fn build_qaoa_plus(layout: &QubitLayout, mixer: &MixerSpec, p: usize) -> Result<Circuit> {
    check_layers(p)?;
    let n = layout.total_qubits();
    let mut c = Circuit::new(
        n,
        InitialState::Basis(layout.trivial_feasible_bits()),
        2 * p,
    )?;
    for k in 0..p {
        c.push(Gate::DiagPhase {
            angle: Angle::slot(2 * k),
        })?;
        let beta = 2 * k + 1;
        for &(a, b) in &mixer.pairs {
            c.push(Gate::Xy {
                a,
                b,
                angle: Angle::slot(beta),
            })?;
        }
        for q in layout.unconstrained() {
            c.push(Gate::Rx {
                qubit: q,
                angle: Angle::scaled(beta, 2.0),
            })?;
        }
    }
    Ok(c)
}

fn push_hea_layer(c: &mut Circuit, qubits: &[usize], first_slot: usize) -> Result<()> {
    for (r, &q) in qubits.iter().enumerate() {
        c.push(Gate::Ry {
            qubit: q,
            angle: Angle::slot(first_slot + r),
        })?;
    }
    for w in qubits.windows(2) {
        c.push(Gate::Cnot {
            control: w[0],
            target: w[1],
        })?;
    }
    Ok(())
}

/// Hardware-efficient ansatz: `|+>^N`, then per layer an `R_Y` with its own
/// slot on every qubit followed by a linear CNOT chain.
pub fn build_hea(n_qubits: usize, p: usize) -> Result<Circuit> {
    check_layers(p)?;
    let mut c = Circuit::new(n_qubits, InitialState::Uniform, p * n_qubits)?;
    let qubits: Vec<usize> = (0..n_qubits).collect();
    for k in 0..p {
        push_hea_layer(&mut c, &qubits, k * n_qubits)?;
    }
    Ok(c)
}

/// VQA-PFS with one mixer per layer.
pub fn build_vqa_pfs(layout: &QubitLayout, mixer: &MixerSpec, p: usize) -> Result<Circuit> {
    build_vqa_pfs_with(layout, mixer, p, MixerSchedule::PerLayer)
}

/// VQA-PFS: trivial feasible start; an HEA block on the `l = mn + n`
/// unconstrained qubits and XY mixers on the customer blocks. No phase
/// separator appears in the circuit.
///
/// Per-layer slots are `k (l + 1) .. k (l + 1) + l` for the `R_Y` angles and
/// `k (l + 1) + l` for `beta_k`. With [`MixerSchedule::FinalOnly`] the HEA
/// slots are `k l + r` and the single mixer uses slot `p l`.
pub fn build_vqa_pfs_with(
    layout: &QubitLayout,
    mixer: &MixerSpec,
    p: usize,
    schedule: MixerSchedule,
) -> Result<Circuit> {
    check_layers(p)?;
    let n = layout.total_qubits();
    let unconstrained: Vec<usize> = layout.unconstrained().collect();
    let l = unconstrained.len();
    let n_params = match schedule {
        MixerSchedule::PerLayer => p * (l + 1),
        MixerSchedule::FinalOnly => p * l + 1,
    };
    let mut c = Circuit::new(
        n,
        InitialState::Basis(layout.trivial_feasible_bits()),
        n_params,
    )?;
    let push_mixer = |c: &mut Circuit, slot: usize| -> Result<()> {
        for &(a, b) in &mixer.pairs {
            c.push(Gate::Xy {
                a,
                b,
                angle: Angle::slot(slot),
            })?;
        }
        Ok(())
    };
    for k in 0..p {
        match schedule {
            MixerSchedule::PerLayer => {
                let base = k * (l + 1);
                push_hea_layer(&mut c, &unconstrained, base)?;
                push_mixer(&mut c, base + l)?;
            }
            MixerSchedule::FinalOnly => push_hea_layer(&mut c, &unconstrained, k * l)?,
        }
    }
    if schedule == MixerSchedule::FinalOnly {
        push_mixer(&mut c, p * l)?;
    }
    Ok(c)
}

/// Text diagram, one line per qubit, gates packed into as-early-as-possible columns.
impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n_qubits;
        let mut columns: Vec<Vec<Option<String>>> = Vec::new();
        let mut frontier = vec![0usize; n];
        for g in &self.gates {
            let (ops, k) = g.operands();
            let (lo, hi) = match k {
                0 => (0, n.saturating_sub(1)),
                1 => (ops[0], ops[0]),
                _ => (ops[0].min(ops[1]), ops[0].max(ops[1])),
            };
            let col = frontier[lo..=hi].iter().copied().max().unwrap_or(0);
            if col == columns.len() {
                columns.push(vec![None; n]);
            }
            let slot = |a: Option<Angle>| a.map_or(String::new(), |a| format!("{}", a.slot));
            let cell = &mut columns[col];
            match *g {
                Gate::H(q) => cell[q] = Some("H".into()),
                Gate::X(q) => cell[q] = Some("X".into()),
                Gate::Rx { qubit, angle } => cell[qubit] = Some(format!("Rx{}", slot(Some(angle)))),
                Gate::Ry { qubit, angle } => cell[qubit] = Some(format!("Ry{}", slot(Some(angle)))),
                Gate::Rz { qubit, angle } => cell[qubit] = Some(format!("Rz{}", slot(Some(angle)))),
                Gate::Cnot { control, target } => {
                    for q in lo..=hi {
                        cell[q] = Some("|".into());
                    }
                    cell[control] = Some("@".into());
                    cell[target] = Some("+".into());
                }
                Gate::Xy { a, b, angle } => {
                    for q in lo..=hi {
                        cell[q] = Some("|".into());
                    }
                    cell[a] = Some(format!("XY{}", slot(Some(angle))));
                    cell[b] = Some(format!("XY{}", slot(Some(angle))));
                }
                Gate::DiagPhase { angle } => {
                    for c in cell.iter_mut() {
                        *c = Some(format!("P{}", slot(Some(angle))));
                    }
                }
            }
            for fr in &mut frontier[lo..=hi] {
                *fr = col + 1;
            }
        }
        let width = columns
            .iter()
            .flatten()
            .flatten()
            .map(|s| s.len())
            .max()
            .unwrap_or(1)
            + 2;
        for q in 0..n {
            let init = match &self.initial {
                InitialState::Uniform => "|+>".into(),
                InitialState::Basis(b) => format!("|{}>", b.get(q) as u8),
            };
            write!(f, "q{q:<3}{init} -")?;
            for col in &columns {
                match &col[q] {
                    Some(s) => write!(f, "{s:-^width$}")?,
                    None => write!(f, "{}", "-".repeat(width))?,
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
