//! Dense statevector simulation of the gate set used by the ansatz builders.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::bits::{qubit_mask, BitString};
use crate::error::{Error, Result};
use crate::MAX_QUBITS;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// `exp(i * phi)`.
#[inline]
pub(crate) fn cis(phi: f64) -> Complex64 {
    Complex64::new(libm::cos(phi), libm::sin(phi))
}

/// Single-qubit gates. Rotations follow `R_A(theta) = exp(-i theta A / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingleQubitGate {
    H,
    X,
    Rx(f64),
    Ry(f64),
    Rz(f64),
}

impl SingleQubitGate {
    /// Row-major 2x2 unitary.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        match *self {
            SingleQubitGate::H => {
                let h = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
                [[h, h], [h, -h]]
            }
            SingleQubitGate::X => [[ZERO, ONE], [ONE, ZERO]],
            SingleQubitGate::Rx(theta) => {
                let c = Complex64::new(libm::cos(theta / 2.0), 0.0);
                let s = Complex64::new(0.0, -libm::sin(theta / 2.0));
                [[c, s], [s, c]]
            }
            SingleQubitGate::Ry(theta) => {
                let c = Complex64::new(libm::cos(theta / 2.0), 0.0);
                let s = Complex64::new(libm::sin(theta / 2.0), 0.0);
                [[c, -s], [s, c]]
            }
            SingleQubitGate::Rz(theta) => [[cis(-theta / 2.0), ZERO], [ZERO, cis(theta / 2.0)]],
        }
    }
}

/// Hermitian generators of the parametrised gates, used by the adjoint
/// gradient to evaluate `<bra| G |ket>`.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Generator<'a> {
    PauliX(usize),
    PauliY(usize),
    PauliZ(usize),
    /// `X_a X_b + Y_a Y_b`
    XyPair(usize, usize),
    Diagonal(&'a [f64]),
}

/// Anything that assigns a probability to each computational basis index.
pub trait BasisDistribution {
    fn n_qubits(&self) -> usize;

    fn probability(&self, index: usize) -> f64;

    /// Total probability of basis indices satisfying `pred`.
    fn mass_where(&self, pred: &dyn Fn(usize) -> bool) -> f64 {
        (0..1usize << self.n_qubits())
            .filter(|&b| pred(b))
            .map(|b| self.probability(b))
            .sum()
    }

    /// Total probability of the listed indices. Duplicates count once per occurrence.
    fn probability_mass(&self, indices: &[usize]) -> f64 {
        indices.iter().map(|&b| self.probability(b)).sum()
    }
}

/// `2^n` complex amplitudes of an `n`-qubit pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

fn check_size(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            requested: n_qubits,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis_index(n_qubits, 0)
    }

    pub fn basis_index(n_qubits: usize, index: usize) -> Result<Self> {
        check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::LengthMismatch {
                what: "basis index",
                expected: dim,
                found: index,
            });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { n_qubits, amps })
    }

    /// Computational basis state for `bits`, which must have `n_qubits` bits.
    pub fn basis_state(n_qubits: usize, bits: &BitString) -> Result<Self> {
        if bits.len() != n_qubits {
            return Err(Error::LengthMismatch {
                what: "bitstring",
                expected: n_qubits,
                found: bits.len(),
            });
        }
        Self::basis_index(n_qubits, bits.index() as usize)
    }

    /// `|+>^n`.
    pub fn uniform(n_qubits: usize) -> Result<Self> {
        check_size(n_qubits)?;
        let dim = 1usize << n_qubits;
        let a = Complex64::new(1.0 / libm::sqrt(dim as f64), 0.0);
        Ok(Self {
            n_qubits,
            amps: vec![a; dim],
        })
    }

    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_size(n_qubits)?;
        if amps.len() != 1usize << n_qubits {
            return Err(Error::LengthMismatch {
                what: "amplitudes",
                expected: 1 << n_qubits,
                found: amps.len(),
            });
        }
        Ok(Self { n_qubits, amps })
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_same_dim(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn check_same_dim(&self, other: &StateVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::LengthMismatch {
                what: "state dimension",
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::DuplicateQubit(a));
        }
        Ok(())
    }

    fn check_table(&self, table: &[f64]) -> Result<()> {
        if table.len() != self.dim() {
            return Err(Error::LengthMismatch {
                what: "diagonal table",
                expected: self.dim(),
                found: table.len(),
            });
        }
        Ok(())
    }

    pub fn apply_single(&mut self, qubit: usize, gate: SingleQubitGate) -> Result<()> {
        self.check_qubit(qubit)?;
        let [[m00, m01], [m10, m11]] = gate.matrix();
        let mask = qubit_mask(self.n_qubits, qubit);
        for chunk in self.amps.chunks_exact_mut(2 * mask) {
            let (lo, hi) = chunk.split_at_mut(mask);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (v0, v1) = (*a0, *a1);
                *a0 = m00 * v0 + m01 * v1;
                *a1 = m10 * v0 + m11 * v1;
            }
        }
        Ok(())
    }

    /// Flip `target` on every basis state whose `control` bit is set.
    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_pair(control, target)?;
        let mc = qubit_mask(self.n_qubits, control);
        let mt = qubit_mask(self.n_qubits, target);
        for i in 0..self.amps.len() {
            if i & mc != 0 && i & mt == 0 {
                self.amps.swap(i, i | mt);
            }
        }
        Ok(())
    }

    /// `exp(-i beta (X_a X_b + Y_a Y_b))`, applied as the exact unitary on the pair.
    ///
    /// On the `{|01>, |10>}` subspace of `(a, b)` this is a rotation by `2 beta`;
    /// `|00>` and `|11>` are left untouched.
    pub fn apply_xy(&mut self, a: usize, b: usize, beta: f64) -> Result<()> {
        self.check_pair(a, b)?;
        let ma = qubit_mask(self.n_qubits, a);
        let mb = qubit_mask(self.n_qubits, b);
        let c = Complex64::new(libm::cos(2.0 * beta), 0.0);
        let mis = Complex64::new(0.0, -libm::sin(2.0 * beta));
        for i in 0..self.amps.len() {
            // i has (a, b) = (0, 1); its partner has (1, 0)
            if i & ma == 0 && i & mb != 0 {
                let j = i ^ ma ^ mb;
                let (v01, v10) = (self.amps[i], self.amps[j]);
                self.amps[i] = c * v01 + mis * v10;
                self.amps[j] = mis * v01 + c * v10;
            }
        }
        Ok(())
    }

    /// `exp(-i gamma C)` for a diagonal `C` given as a table over basis indices.
    pub fn apply_diagonal_phase(&mut self, table: &[f64], gamma: f64) -> Result<()> {
        self.check_table(table)?;
        if gamma == 0.0 {
            return Ok(());
        }
        for (a, &c) in self.amps.iter_mut().zip(table) {
            *a *= cis(-gamma * c);
        }
        Ok(())
    }

    /// `sum_b |a_b|^2 cost(b)`.
    pub fn expectation_diagonal(&self, table: &[f64]) -> Result<f64> {
        self.check_table(table)?;
        Ok(self
            .amps
            .iter()
            .zip(table)
            .map(|(a, &c)| a.norm_sqr() * c)
            .sum())
    }

    /// Overwrite `self` with `diag(table) * other`.
    pub(crate) fn assign_diagonal_product(
        &mut self,
        other: &StateVector,
        table: &[f64],
    ) -> Result<()> {
        self.check_same_dim(other)?;
        self.check_table(table)?;
        for ((dst, src), &c) in self.amps.iter_mut().zip(&other.amps).zip(table) {
            *dst = src * c;
        }
        Ok(())
    }

    /// `<self| G |ket>` for a gate generator `G`.
    pub(crate) fn generator_overlap(
        &self,
        ket: &StateVector,
        gen: Generator<'_>,
    ) -> Result<Complex64> {
        self.check_same_dim(ket)?;
        let n = self.n_qubits;
        let bra = &self.amps;
        let ket = &ket.amps;
        let mut acc = ZERO;
        match gen {
            Generator::PauliX(q) => {
                self.check_qubit(q)?;
                let m = qubit_mask(n, q);
                for i in 0..bra.len() {
                    acc += bra[i].conj() * ket[i ^ m];
                }
            }
            Generator::PauliY(q) => {
                self.check_qubit(q)?;
                let m = qubit_mask(n, q);
                // (Y k)_i = -i k_{i^m} if bit q of i is 0, +i k_{i^m} otherwise
                for i in 0..bra.len() {
                    let s = if i & m == 0 { -I } else { I };
                    acc += bra[i].conj() * s * ket[i ^ m];
                }
            }
            Generator::PauliZ(q) => {
                self.check_qubit(q)?;
                let m = qubit_mask(n, q);
                for i in 0..bra.len() {
                    let t = bra[i].conj() * ket[i];
                    if i & m == 0 {
                        acc += t;
                    } else {
                        acc -= t;
                    }
                }
            }
            Generator::XyPair(a, b) => {
                self.check_pair(a, b)?;
                let ma = qubit_mask(n, a);
                let mb = qubit_mask(n, b);
                for i in 0..bra.len() {
                    if (i & ma == 0) != (i & mb == 0) {
                        acc += bra[i].conj() * ket[i ^ ma ^ mb];
                    }
                }
                acc *= 2.0;
            }
            Generator::Diagonal(table) => {
                self.check_table(table)?;
                for i in 0..bra.len() {
                    acc += bra[i].conj() * ket[i] * table[i];
                }
            }
        }
        Ok(acc)
    }
}

impl BasisDistribution for StateVector {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    fn mass_where(&self, pred: &dyn Fn(usize) -> bool) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(b, _)| pred(*b))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_8, PI};

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn basis_state_encodes_leftmost_bit_as_qubit_zero() {
        let s = StateVector::basis_state(2, &"10".parse().unwrap()).unwrap();
        assert_eq!(s.amplitudes()[2], ONE);
        let s = StateVector::basis_state(1, &"0".parse().unwrap()).unwrap();
        assert_eq!(s.amplitudes(), &[ONE, ZERO]);
        let bits = "1010000000".parse().unwrap();
        let s = StateVector::basis_state(10, &bits).unwrap();
        assert_eq!(s.amplitudes()[0b1010000000], ONE);
    }

    #[test]
    fn basis_state_rejects_length_mismatch() {
        let err = StateVector::basis_state(3, &"10".parse().unwrap()).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { .. }));
    }

    #[test]
    fn rx_pi_maps_zero_to_minus_i_one() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply_single(0, SingleQubitGate::Rx(PI)).unwrap();
        assert!(close(s.amplitudes()[0], ZERO));
        assert!(close(s.amplitudes()[1], -I));
    }

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::zero(1).unwrap();
        s.apply_single(0, SingleQubitGate::H).unwrap();
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        assert!(close(s.amplitudes()[0], h) && close(s.amplitudes()[1], h));
    }

    #[test]
    fn rz_on_one_is_a_phase() {
        let mut s = StateVector::basis_index(1, 1).unwrap();
        s.apply_single(0, SingleQubitGate::Rz(0.7)).unwrap();
        assert!(close(s.amplitudes()[1], cis(0.35)));
        assert!((s.probability(1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn single_gate_rejects_bad_qubit() {
        let mut s = StateVector::zero(2).unwrap();
        assert!(matches!(
            s.apply_single(2, SingleQubitGate::X),
            Err(Error::QubitOutOfRange { .. })
        ));
    }

    #[test]
    fn cnot_truth_table_and_involution() {
        let mut s = StateVector::basis_state(2, &"10".parse().unwrap()).unwrap();
        s.apply_cnot(0, 1).unwrap();
        assert_eq!(s.amplitudes()[0b11], ONE);
        let mut s = StateVector::zero(2).unwrap();
        s.apply_cnot(0, 1).unwrap();
        assert_eq!(s.amplitudes()[0], ONE);

        let mut s = StateVector::uniform(3).unwrap();
        s.apply_single(0, SingleQubitGate::Ry(0.3)).unwrap();
        s.apply_single(2, SingleQubitGate::Rx(1.1)).unwrap();
        let before = s.clone();
        s.apply_cnot(2, 0).unwrap();
        s.apply_cnot(2, 0).unwrap();
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert!(close(*a, *b));
        }
        assert_eq!(s.apply_cnot(1, 1), Err(Error::DuplicateQubit(1)));
    }

    #[test]
    fn xy_zero_angle_is_identity_and_fixes_00() {
        let mut s = StateVector::uniform(2).unwrap();
        let before = s.clone();
        s.apply_xy(0, 1, 0.0).unwrap();
        assert_eq!(s, before);
        let mut s = StateVector::zero(2).unwrap();
        s.apply_xy(0, 1, 1.234).unwrap();
        assert!(close(s.amplitudes()[0], ONE));
    }

    #[test]
    fn xy_rotates_within_single_excitation_subspace() {
        let mut s = StateVector::basis_state(2, &"10".parse().unwrap()).unwrap();
        s.apply_xy(0, 1, FRAC_PI_8).unwrap();
        let c = libm::cos(FRAC_PI_4);
        assert!(close(s.amplitudes()[0b10], Complex64::new(c, 0.0)));
        assert!(close(s.amplitudes()[0b01], Complex64::new(0.0, -c)));
        assert_eq!(s.apply_xy(1, 1, 0.1), Err(Error::DuplicateQubit(1)));
    }

    #[test]
    fn diagonal_phase_and_expectation() {
        let table = [3.0, -1.0, 0.5, 2.0];
        let mut s = StateVector::uniform(2).unwrap();
        let p0 = s.probabilities();
        s.apply_diagonal_phase(&table, 0.9).unwrap();
        for (a, b) in s.probabilities().iter().zip(&p0) {
            assert!((a - b).abs() < 1e-15);
        }
        let mean = table.iter().sum::<f64>() / 4.0;
        assert!((s.expectation_diagonal(&table).unwrap() - mean).abs() < 1e-14);

        let mut b = StateVector::basis_index(2, 2).unwrap();
        assert_eq!(b.expectation_diagonal(&table).unwrap(), 0.5);
        b.apply_diagonal_phase(&table, 0.9).unwrap();
        assert!(close(b.amplitudes()[2], cis(-0.45)));
        assert!((b.inner(&b).unwrap().re - 1.0).abs() < 1e-15);
        assert!(b.expectation_diagonal(&table[..3]).is_err());
    }

    #[test]
    fn probability_mass_edges() {
        let s = StateVector::uniform(3).unwrap();
        let all: Vec<usize> = (0..8).collect();
        assert!((s.probability_mass(&all) - 1.0).abs() < 1e-12);
        assert_eq!(s.probability_mass(&[]), 0.0);
        let b = StateVector::basis_index(3, 5).unwrap();
        assert_eq!(b.probability_mass(&[5]), 1.0);
    }

    #[test]
    fn caps_register_size() {
        assert!(matches!(
            StateVector::zero(MAX_QUBITS + 1),
            Err(Error::TooManyQubits { .. })
        ));
    }
}
