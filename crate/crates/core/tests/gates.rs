mod common;

use common::{apply, c, expm, identity, kron, pauli_x, pauli_y, pauli_z, scale, Matrix};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uflp_vqa_core::{SingleQubitGate, StateVector};

fn random_state(n: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let amps: Vec<Complex64> = (0..1 << n)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(n, amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

fn assert_amps_close(a: &[Complex64], b: &[Complex64], tol: f64) {
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        assert!((x - y).norm() < tol, "amplitude {i}: {x} vs {y}");
    }
}

fn xy_generator(n: usize, a: usize, b: usize) -> Matrix {
    let op = |p: Matrix| {
        (0..n).fold(vec![vec![c(1.0, 0.0)]], |acc, q| {
            kron(
                &acc,
                &if q == a || q == b {
                    p.clone()
                } else {
                    identity(2)
                },
            )
        })
    };
    common::add(&op(pauli_x()), &op(pauli_y()))
}

#[test]
fn xy_matches_exponentiated_generator() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = xy_generator(2, 0, 1);
    for _ in 0..20 {
        let beta = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let u = expm(&scale(&g, c(0.0, -beta)));
        for col in 0..4 {
            let mut s = StateVector::basis_index(2, col).unwrap();
            s.apply_xy(0, 1, beta).unwrap();
            let want: Vec<Complex64> = (0..4).map(|row| u[row][col]).collect();
            for (x, y) in s.amplitudes().iter().zip(&want) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn xy_on_distant_qubits_matches_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = xy_generator(4, 3, 1);
    let beta = 0.77;
    let u = expm(&scale(&g, c(0.0, -beta)));
    let s0 = random_state(4, &mut rng);
    let mut s = s0.clone();
    s.apply_xy(3, 1, beta).unwrap();
    assert_amps_close(s.amplitudes(), &apply(&u, s0.amplitudes()), 1e-12);
}

#[test]
fn rotations_match_exponentials() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let theta = 1.234;
    let cases: [(fn(f64) -> SingleQubitGate, Matrix); 3] = [
        (SingleQubitGate::Rx, pauli_x()),
        (SingleQubitGate::Ry, pauli_y()),
        (SingleQubitGate::Rz, pauli_z()),
    ];
    for (gate, pauli) in cases {
        for q in 0..3 {
            let local = expm(&scale(&pauli, c(0.0, -theta / 2.0)));
            let full = (0..3).fold(vec![vec![c(1.0, 0.0)]], |acc, k| {
                kron(&acc, &if k == q { local.clone() } else { identity(2) })
            });
            let s0 = random_state(3, &mut rng);
            let mut s = s0.clone();
            s.apply_single(q, gate(theta)).unwrap();
            assert_amps_close(s.amplitudes(), &apply(&full, s0.amplitudes()), 1e-12);
        }
    }
}

#[test]
fn cnot_permutes_basis_states() {
    // control q0, target q2 on 3 qubits: |1x0> <-> |1x1>
    for b in 0..8usize {
        let mut s = StateVector::basis_index(3, b).unwrap();
        s.apply_cnot(0, 2).unwrap();
        let want = if b & 0b100 != 0 { b ^ 1 } else { b };
        assert_eq!(s, StateVector::basis_index(3, want).unwrap());
    }
}

#[derive(Debug, Clone)]
enum Op {
    Single(usize, u8, f64),
    Cnot(usize, usize),
    Xy(usize, usize, f64),
    Phase(f64),
}

fn op_strategy(n: usize) -> impl Strategy<Value = Op> {
    let angle = -4.0..4.0f64;
    prop_oneof![
        (0..n, 0u8..5, angle.clone()).prop_map(|(q, k, t)| Op::Single(q, k, t)),
        (0..n, 0..n)
            .prop_filter("distinct", |(a, b)| a != b)
            .prop_map(|(a, b)| Op::Cnot(a, b)),
        (0..n, 0..n, angle.clone())
            .prop_filter("distinct", |(a, b, _)| a != b)
            .prop_map(|(a, b, t)| Op::Xy(a, b, t)),
        angle.prop_map(Op::Phase),
    ]
}

fn run(s: &mut StateVector, op: &Op, table: &[f64]) {
    match *op {
        Op::Single(q, k, t) => {
            let g = match k {
                0 => SingleQubitGate::H,
                1 => SingleQubitGate::X,
                2 => SingleQubitGate::Rx(t),
                3 => SingleQubitGate::Ry(t),
                _ => SingleQubitGate::Rz(t),
            };
            s.apply_single(q, g).unwrap()
        }
        Op::Cnot(a, b) => s.apply_cnot(a, b).unwrap(),
        Op::Xy(a, b, t) => s.apply_xy(a, b, t).unwrap(),
        Op::Phase(t) => s.apply_diagonal_phase(table, t).unwrap(),
    }
}

proptest! {
    #[test]
    fn gate_sequences_preserve_norm(ops in prop::collection::vec(op_strategy(5), 1..40), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table: Vec<f64> = (0..32).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let mut s = random_state(5, &mut rng);
        for op in &ops {
            run(&mut s, op, &table);
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn xy_preserves_hamming_weight(pairs in prop::collection::vec((0..6usize, 0..6usize, -3.0..3.0f64), 1..20), start in 0..64usize) {
        let mut s = StateVector::basis_index(6, start).unwrap();
        for &(a, b, t) in &pairs {
            if a != b {
                s.apply_xy(a, b, t).unwrap();
            }
        }
        let w = start.count_ones();
        let off: f64 = (0..64usize).filter(|b| b.count_ones() != w).map(|b| s.probabilities()[b]).sum();
        prop_assert!(off < 1e-24);
    }

    #[test]
    fn diagonal_phase_leaves_expectation_unchanged(gamma in -5.0..5.0f64, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table: Vec<f64> = (0..16).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let mut s = random_state(4, &mut rng);
        let before = s.expectation_diagonal(&table).unwrap();
        s.apply_diagonal_phase(&table, gamma).unwrap();
        prop_assert!((s.expectation_diagonal(&table).unwrap() - before).abs() < 1e-10);
    }
}
