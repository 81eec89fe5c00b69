//! Exact simulation and training of variational ansatzes for the
//! Uncapacitated Facility Location Problem (UFLP).
//!
//! Four circuit families are provided: standard QAOA, QAOA+ with XY mixers,
//! a hardware-efficient ansatz (HEA), and VQA-PFS, which keeps the hard
//! one-facility-per-customer constraint inside the circuit via XY mixers and
//! drives the unconstrained variables with an HEA block.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, the CLI and
//! the experiment runner live in the `uflp-vqa` companion crate.
//!
//! Bit convention: qubit `k` of an `N`-qubit register occupies bit position
//! `N - 1 - k` of a basis index, so an index printed in binary reads
//! `q0 q1 ... q(N-1)` left to right.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod ansatz;
pub mod bits;
mod error;
pub mod factorized;
pub mod hamiltonian;
pub mod metrics;
pub mod optimizer;
pub mod registry;
pub mod resources;
pub mod statevector;
pub mod uflp;

pub use ansatz::{Angle, Circuit, Gate, InitialState, MixerSchedule};
pub use bits::BitString;
pub use error::{Error, Result};
pub use hamiltonian::{MixerSpec, PauliZForm, QuboForm};
pub use optimizer::{AdamConfig, PlateauStop, Trajectory};
pub use resources::ResourceReport;
pub use statevector::{BasisDistribution, SingleQubitGate, StateVector};
pub use uflp::{Assignment, BruteForceResult, QubitLayout, UflpInstance};

/// Largest register the dense simulator will allocate (2^24 amplitudes, 256 MiB).
pub const MAX_QUBITS: usize = 24;
