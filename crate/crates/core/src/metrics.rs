//! Post-training measurements: success probability, infeasible mass,
//! plateau detection and simple summary statistics.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::statevector::BasisDistribution;
use crate::uflp::QubitLayout;

/// Probability of measuring any of the `optimal` basis indices.
pub fn success_probability(dist: &dyn BasisDistribution, optimal: &[usize]) -> Result<f64> {
    if optimal.is_empty() {
        return Err(Error::EmptyOptimalSet);
    }
    let dim = 1usize << dist.n_qubits();
    if let Some(&bad) = optimal.iter().find(|&&b| b >= dim) {
        return Err(Error::QubitOutOfRange {
            qubit: bad,
            n_qubits: dist.n_qubits(),
        });
    }
    let mut unique = optimal.to_vec();
    unique.sort_unstable();
    unique.dedup();
    Ok(dist.probability_mass(&unique))
}

/// Probability outside the one-facility-per-customer subspace.
pub fn infeasible_mass(dist: &dyn BasisDistribution, layout: &QubitLayout) -> f64 {
    let feasible = dist.mass_where(&|b| layout.is_hard_feasible_index(b));
    (1.0 - feasible).max(0.0)
}

/// Basis indices that satisfy the hard constraint, ascending.
pub fn feasible_indices(layout: &QubitLayout) -> Vec<usize> {
    (0..1usize << layout.total_qubits())
        .filter(|&b| layout.is_hard_feasible_index(b))
        .collect()
}

/// [`infeasible_mass`] with the feasible set precomputed by [`feasible_indices`].
pub fn infeasible_mass_over(dist: &dyn BasisDistribution, feasible: &[usize]) -> f64 {
    (1.0 - dist.probability_mass(feasible)).max(0.0)
}

/// Number of iterations after which every recorded loss stays within
/// `rel_tol * |final|` of the final loss. Zero when the first loss already does.
pub fn iterations_to_plateau(losses: &[f64], rel_tol: f64) -> usize {
    let Some(&last) = losses.last() else {
        return 0;
    };
    let band = rel_tol * libm::fabs(last);
    losses
        .iter()
        .rposition(|&l| libm::fabs(l - last) > band)
        .map_or(0, |k| k + 1)
}

pub fn mean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    Some(xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Median; the mean of the two middle values for even lengths. NaNs sort last.
pub fn median(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut v: Vec<f64> = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevector::StateVector;
    use crate::BitString;

    #[test]
    fn success_counts_each_optimum_once() {
        let s = StateVector::uniform(2).unwrap();
        assert!((success_probability(&s, &[1, 2, 2]).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(success_probability(&s, &[]), Err(Error::EmptyOptimalSet));
        assert!(success_probability(&s, &[4]).is_err());
    }

    #[test]
    fn feasible_basis_state_has_no_infeasible_mass() {
        let l = QubitLayout::new(2, 2);
        let feasible = StateVector::basis_state(10, &l.trivial_feasible_bits()).unwrap();
        assert!(infeasible_mass(&feasible, &l) < 1e-15);
        let zero = StateVector::basis_state(10, &BitString::zeros(10).unwrap()).unwrap();
        assert!((infeasible_mass(&zero, &l) - 1.0).abs() < 1e-15);
        let feasible = feasible_indices(&l);
        assert_eq!(feasible.len(), 4 << 6);
        let u = StateVector::uniform(10).unwrap();
        assert!((infeasible_mass_over(&u, &feasible) - infeasible_mass(&u, &l)).abs() < 1e-12);
    }

    #[test]
    fn plateau_index() {
        assert_eq!(iterations_to_plateau(&[], 0.01), 0);
        assert_eq!(iterations_to_plateau(&[5.0], 0.01), 0);
        assert_eq!(iterations_to_plateau(&[10.0, 5.0, 1.005, 1.0], 0.01), 2);
        // a late excursion resets the count
        assert_eq!(iterations_to_plateau(&[10.0, 1.0, 3.0, 1.0, 1.0], 0.01), 3);
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[]), None);
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(mean(&[1.0, 2.0]), Some(1.5));
    }
}
