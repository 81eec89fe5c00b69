//! UFLP instances, the qubit layout of the slack-variable encoding, and the
//! exhaustive classical oracle.
//!
//! Variables: `y[i][j]` (customer `i` served by facility `j`), `x[j]`
//! (facility `j` open) and slack bits `z[i][j]` turning `y <= x` into
//! `y + z - x = 0`. The one-facility-per-customer rule is the hard
//! constraint; the slack equality is enforced by a quadratic penalty.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bits::{qubit_bit, BitString};
use crate::error::{Error, Result};

/// Default enumeration budget for [`brute_force`].
pub const BRUTE_FORCE_LIMIT: u128 = 1 << 26;

#[derive(Debug, Clone, PartialEq)]
pub struct UflpInstance {
    pub name: String,
    m: usize,
    n: usize,
    /// Row-major `m x n` service costs.
    service: Vec<f64>,
    opening: Vec<f64>,
    pub known_optimal: Option<f64>,
    /// Penalty weight to use when none is configured explicitly.
    pub penalty: Option<f64>,
}

impl UflpInstance {
    /// Build and validate an instance from a service matrix (one row per customer)
    /// and a vector of opening costs.
    pub fn new(name: impl Into<String>, service: &[Vec<f64>], opening: &[f64]) -> Result<Self> {
        let m = service.len();
        let n = opening.len();
        if m == 0 || n == 0 {
            return Err(Error::InvalidInstance(format!(
                "need m >= 1 and n >= 1, got m = {m}, n = {n}"
            )));
        }
        for (i, row) in service.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInstance(format!(
                    "D row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &d) in row.iter().enumerate() {
                if !(d.is_finite() && d >= 0.0) {
                    return Err(Error::InvalidInstance(format!(
                        "D[{i}][{j}] = {d} is not a finite nonnegative cost"
                    )));
                }
            }
        }
        for (j, &g) in opening.iter().enumerate() {
            if !(g.is_finite() && g >= 0.0) {
                return Err(Error::InvalidInstance(format!(
                    "G[{j}] = {g} is not a finite nonnegative cost"
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            m,
            n,
            service: service.iter().flatten().copied().collect(),
            opening: opening.to_vec(),
            known_optimal: None,
            penalty: None,
        })
    }

    pub fn with_known_optimal(mut self, value: f64) -> Self {
        self.known_optimal = Some(value);
        self
    }

    /// Customer count.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Facility count.
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn service_cost(&self, i: usize, j: usize) -> f64 {
        self.service[i * self.n + j]
    }

    #[inline]
    pub fn opening_cost(&self, j: usize) -> f64 {
        self.opening[j]
    }

    pub fn service_rows(&self) -> Vec<Vec<f64>> {
        self.service.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn opening_costs(&self) -> &[f64] {
        &self.opening
    }

    pub fn layout(&self) -> QubitLayout {
        QubitLayout::new(self.m, self.n)
    }

    /// `2 (max d_ij + max g_j)`: any unit violation of a penalised constraint
    /// costs more than the whole objective can swing.
    pub fn default_penalty(&self) -> f64 {
        let dmax = self.service.iter().copied().fold(0.0, f64::max);
        let gmax = self.opening.iter().copied().fold(0.0, f64::max);
        2.0 * (dmax + gmax)
    }

    /// Instance penalty if set, else [`Self::default_penalty`].
    pub fn resolved_penalty(&self) -> f64 {
        self.penalty.unwrap_or_else(|| self.default_penalty())
    }
}

/// Index maps from UFLP variables to qubits.
///
/// `y(i, j) = i n + j`, `x(j) = m n + j`, `z(i, j) = m n + n + i n + j`.
/// The `y` qubits are the constrained set; `x` and `z` are unconstrained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QubitLayout {
    pub m: usize,
    pub n: usize,
}

impl QubitLayout {
    pub fn new(m: usize, n: usize) -> Self {
        Self { m, n }
    }

    #[inline]
    pub fn y_index(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    #[inline]
    pub fn x_index(&self, j: usize) -> usize {
        self.m * self.n + j
    }

    #[inline]
    pub fn z_index(&self, i: usize, j: usize) -> usize {
        self.m * self.n + self.n + i * self.n + j
    }

    pub fn total_qubits(&self) -> usize {
        2 * self.m * self.n + self.n
    }

    pub fn constrained(&self) -> core::ops::Range<usize> {
        0..self.m * self.n
    }

    /// `x` then `z` qubits, in layout order.
    pub fn unconstrained(&self) -> core::ops::Range<usize> {
        self.m * self.n..self.total_qubits()
    }

    /// Number of unconstrained qubits, `m n + n`.
    pub fn n_unconstrained(&self) -> usize {
        self.m * self.n + self.n
    }

    fn check_len(&self, bits: &BitString) -> Result<()> {
        if bits.len() != self.total_qubits() {
            return Err(Error::LengthMismatch {
                what: "bitstring",
                expected: self.total_qubits(),
                found: bits.len(),
            });
        }
        Ok(())
    }

    /// Every customer block `y[i][*]` has Hamming weight exactly one.
    pub fn is_hard_feasible_index(&self, index: usize) -> bool {
        let nq = self.total_qubits();
        (0..self.m).all(|i| {
            (0..self.n)
                .filter(|&j| qubit_bit(index, nq, self.y_index(i, j)))
                .count()
                == 1
        })
    }

    /// Each customer block `10...0`, all `x` and `z` bits clear.
    pub fn trivial_feasible_bits(&self) -> BitString {
        let mut bits = BitString::zeros(self.total_qubits()).expect("layout wider than 64 bits");
        for i in 0..self.m {
            bits.set(self.y_index(i, 0), true);
        }
        bits
    }
}

/// Hard constraint check: every customer block of `bits` has weight one.
pub fn hard_feasible(bits: &BitString, layout: &QubitLayout) -> bool {
    bits.len() == layout.total_qubits() && layout.is_hard_feasible_index(bits.index() as usize)
}

/// Decoded variable values of one bitstring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    /// Row-major `m x n`.
    pub y: Vec<bool>,
    pub x: Vec<bool>,
    /// Row-major `m x n`.
    pub z: Vec<bool>,
}

impl Assignment {
    pub fn from_bits(layout: &QubitLayout, bits: &BitString) -> Result<Self> {
        layout.check_len(bits)?;
        let (m, n) = (layout.m, layout.n);
        Ok(Self {
            y: (0..m * n)
                .map(|k| bits.get(layout.y_index(k / n, k % n)))
                .collect(),
            x: (0..n).map(|j| bits.get(layout.x_index(j))).collect(),
            z: (0..m * n)
                .map(|k| bits.get(layout.z_index(k / n, k % n)))
                .collect(),
        })
    }

    pub fn to_bits(&self, layout: &QubitLayout) -> Result<BitString> {
        let (m, n) = (layout.m, layout.n);
        if self.y.len() != m * n || self.z.len() != m * n || self.x.len() != n {
            return Err(Error::LengthMismatch {
                what: "assignment",
                expected: 2 * m * n + n,
                found: self.y.len() + self.x.len() + self.z.len(),
            });
        }
        let mut bits = BitString::zeros(layout.total_qubits())?;
        for k in 0..m * n {
            bits.set(layout.y_index(k / n, k % n), self.y[k]);
            bits.set(layout.z_index(k / n, k % n), self.z[k]);
        }
        for j in 0..n {
            bits.set(layout.x_index(j), self.x[j]);
        }
        Ok(bits)
    }
}

/// `sum d_ij y_ij + sum g_j x_j` for row-major `y` and `x`.
pub fn uflp_cost(instance: &UflpInstance, y: &[bool], x: &[bool]) -> Result<f64> {
    let (m, n) = (instance.m, instance.n);
    if y.len() != m * n {
        return Err(Error::LengthMismatch {
            what: "y",
            expected: m * n,
            found: y.len(),
        });
    }
    if x.len() != n {
        return Err(Error::LengthMismatch {
            what: "x",
            expected: n,
            found: x.len(),
        });
    }
    let service: f64 = y
        .iter()
        .zip(&instance.service)
        .filter(|(&b, _)| b)
        .map(|(_, &d)| d)
        .sum();
    let opening: f64 = x
        .iter()
        .zip(&instance.opening)
        .filter(|(&b, _)| b)
        .map(|(_, &g)| g)
        .sum();
    Ok(service + opening)
}

/// Objective plus `lambda * sum_ij (y_ij + z_ij - x_j)^2`, evaluated directly on a basis index.
pub fn penalized_cost_index(instance: &UflpInstance, index: usize, lambda: f64) -> f64 {
    let layout = instance.layout();
    let nq = layout.total_qubits();
    let bit = |q: usize| qubit_bit(index, nq, q) as i64;
    let mut objective = 0.0;
    let mut residual = 0i64;
    for j in 0..instance.n {
        let xj = bit(layout.x_index(j));
        if xj == 1 {
            objective += instance.opening_cost(j);
        }
        for i in 0..instance.m {
            let yij = bit(layout.y_index(i, j));
            if yij == 1 {
                objective += instance.service_cost(i, j);
            }
            let r = yij + bit(layout.z_index(i, j)) - xj;
            residual += r * r;
        }
    }
    objective + lambda * residual as f64
}

pub fn penalized_cost(instance: &UflpInstance, bits: &BitString, lambda: f64) -> Result<f64> {
    instance.layout().check_len(bits)?;
    Ok(penalized_cost_index(
        instance,
        bits.index() as usize,
        lambda,
    ))
}

/// Objective plus `lambda` times both the row penalty `sum_i (sum_j y_ij - 1)^2`
/// and the slack penalty. This is the unconstrained form used by QAOA and HEA.
pub fn full_penalized_cost_index(instance: &UflpInstance, index: usize, lambda: f64) -> f64 {
    let layout = instance.layout();
    let nq = layout.total_qubits();
    let rows: i64 = (0..instance.m)
        .map(|i| {
            let w = (0..instance.n)
                .filter(|&j| qubit_bit(index, nq, layout.y_index(i, j)))
                .count() as i64
                - 1;
            w * w
        })
        .sum();
    penalized_cost_index(instance, index, lambda) + lambda * rows as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub optimal_value: f64,
    /// Every hard-feasible bitstring attaining the optimum, sorted by index.
    pub optimal_bits: Vec<BitString>,
    /// Distinct `(y, x)` projections of `optimal_bits`, row-major `y`.
    pub optimal_yx: Vec<(Vec<bool>, Vec<bool>)>,
    pub evaluations: u128,
}

impl BruteForceResult {
    pub fn optimal_indices(&self) -> Vec<usize> {
        self.optimal_bits
            .iter()
            .map(|b| b.index() as usize)
            .collect()
    }
}

/// Minimise the slack-penalised cost over all hard-feasible bitstrings with the
/// default enumeration budget.
pub fn brute_force(instance: &UflpInstance, lambda: f64) -> Result<BruteForceResult> {
    brute_force_with_limit(instance, lambda, BRUTE_FORCE_LIMIT)
}

/// Enumerates the `n^m` one-hot customer assignments crossed with all
/// `2^(mn+n)` settings of the unconstrained bits. Keeps every tie.
pub fn brute_force_with_limit(
    instance: &UflpInstance,
    lambda: f64,
    limit: u128,
) -> Result<BruteForceResult> {
    let layout = instance.layout();
    let (m, n) = (instance.m, instance.n);
    let nq = layout.total_qubits();
    let free = layout.n_unconstrained();
    let evaluations = (n as u128)
        .checked_pow(m as u32)
        .and_then(|c| c.checked_mul(1u128.checked_shl(free as u32)?));
    let evaluations = match evaluations {
        Some(e) if e <= limit && nq <= BitString::MAX_LEN => e,
        Some(e) => {
            return Err(Error::TooLarge {
                evaluations: e,
                limit,
            })
        }
        None => {
            return Err(Error::TooLarge {
                evaluations: u128::MAX,
                limit,
            })
        }
    };

    let mut best = f64::INFINITY;
    let mut optimal = Vec::new();
    let mut choice = vec![0usize; m];
    loop {
        let mut y_part = 0usize;
        for (i, &j) in choice.iter().enumerate() {
            y_part |= 1 << (nq - 1 - layout.y_index(i, j));
        }
        // unconstrained qubits occupy the low `free` bit positions
        for rest in 0..1usize << free {
            let index = y_part | rest;
            let c = penalized_cost_index(instance, index, lambda);
            if c < best {
                best = c;
                optimal.clear();
                optimal.push(index);
            } else if c == best {
                optimal.push(index);
            }
        }
        // odometer over customer choices
        let mut i = 0;
        loop {
            if i == m {
                return Ok(finish(layout, best, optimal, evaluations));
            }
            choice[i] += 1;
            if choice[i] < n {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn finish(
    layout: QubitLayout,
    best: f64,
    mut optimal: Vec<usize>,
    evaluations: u128,
) -> BruteForceResult {
    optimal.sort_unstable();
    let nq = layout.total_qubits();
    let optimal_bits: Vec<BitString> = optimal
        .iter()
        .map(|&b| BitString::from_index(nq, b as u64).unwrap())
        .collect();
    let mut optimal_yx: Vec<(Vec<bool>, Vec<bool>)> = optimal_bits
        .iter()
        .map(|b| {
            let a = Assignment::from_bits(&layout, b).unwrap();
            (a.y, a.x)
        })
        .collect();
    optimal_yx.sort();
    optimal_yx.dedup();
    BruteForceResult {
        optimal_value: best,
        optimal_bits,
        optimal_yx,
        evaluations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn instance1() -> UflpInstance {
        UflpInstance::new("i1", &[vec![6.0, 10.0], vec![3.0, 5.0]], &[7.0, 7.0]).unwrap()
    }

    #[test]
    fn layout_partitions_qubits() {
        for (m, n) in [(1, 1), (2, 2), (3, 2), (5, 2), (2, 3)] {
            let l = QubitLayout::new(m, n);
            let mut seen = vec![0u8; l.total_qubits()];
            for i in 0..m {
                for j in 0..n {
                    seen[l.y_index(i, j)] += 1;
                    seen[l.z_index(i, j)] += 1;
                }
            }
            for j in 0..n {
                seen[l.x_index(j)] += 1;
            }
            assert!(seen.iter().all(|&c| c == 1));
            assert_eq!(
                l.constrained().len() + l.unconstrained().len(),
                l.total_qubits()
            );
            assert_eq!(l.unconstrained().len(), l.n_unconstrained());
            assert!(l.constrained().all(|q| q < m * n));
        }
    }

    #[test]
    fn uflp_cost_examples() {
        let i1 = instance1();
        assert_eq!(
            uflp_cost(&i1, &[true, false, true, false], &[true, false]).unwrap(),
            16.0
        );
        assert_eq!(uflp_cost(&i1, &[false; 4], &[false; 2]).unwrap(), 0.0);
        let i2 =
            UflpInstance::new("i2", &[vec![16.0, 10.0], vec![13.0, 15.0]], &[17.0, 17.0]).unwrap();
        assert_eq!(
            uflp_cost(&i2, &[false, true, false, true], &[false, true]).unwrap(),
            42.0
        );
        assert!(uflp_cost(&i1, &[true], &[true, false]).is_err());
    }

    #[test]
    fn penalized_cost_examples() {
        let i1 = instance1();
        let trivial: BitString = "1010000000".parse().unwrap();
        // service 6 + 3, residuals y11 - 0 and y21 - 0
        assert_eq!(penalized_cost(&i1, &trivial, 10.0).unwrap(), 29.0);
        assert_eq!(penalized_cost(&i1, &trivial, 0.0).unwrap(), 9.0);
        // x1 = 1 with z = x - y: zero residual
        let completed: BitString = "1010100000".parse().unwrap();
        assert_eq!(penalized_cost(&i1, &completed, 10.0).unwrap(), 16.0);
        assert!(penalized_cost(&i1, &"101".parse().unwrap(), 1.0).is_err());
    }

    #[test]
    fn hard_feasibility() {
        let l = QubitLayout::new(2, 2);
        assert!(hard_feasible(&"1010000000".parse().unwrap(), &l));
        assert!(!hard_feasible(&"1110000000".parse().unwrap(), &l));
        assert!(!hard_feasible(&"0000000000".parse().unwrap(), &l));
    }

    #[test]
    fn trivial_feasible_strings() {
        assert_eq!(
            QubitLayout::new(2, 2).trivial_feasible_bits().to_string(),
            "1010000000"
        );
        assert_eq!(
            QubitLayout::new(3, 2).trivial_feasible_bits().to_string(),
            "10101000000000"
        );
        assert_eq!(
            QubitLayout::new(1, 1).trivial_feasible_bits().to_string(),
            "100"
        );
    }

    #[test]
    fn brute_force_instance_one() {
        let r = brute_force(&instance1(), 60.0).unwrap();
        assert_eq!(r.optimal_value, 16.0);
        assert_eq!(r.optimal_bits.len(), 1);
        assert_eq!(r.optimal_bits[0].to_string(), "1010100000");
        assert_eq!(
            r.optimal_yx,
            vec![(vec![true, false, true, false], vec![true, false])]
        );
        assert_eq!(r.evaluations, 4 * 64);
        assert!(!r.optimal_bits.contains(&"1010000000".parse().unwrap()));
    }

    #[test]
    fn brute_force_keeps_ties() {
        let sym = UflpInstance::new("sym", &[vec![1.0, 1.0]], &[2.0, 2.0]).unwrap();
        let r = brute_force(&sym, 10.0).unwrap();
        assert_eq!(r.optimal_value, 3.0);
        assert_eq!(r.optimal_bits.len(), 2);
        assert_eq!(r.optimal_yx.len(), 2);
    }

    #[test]
    fn brute_force_size_guard() {
        let wide = UflpInstance::new("w", &vec![vec![1.0; 4]; 6], &[1.0; 4]).unwrap();
        assert!(matches!(
            brute_force(&wide, 1.0),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn instance_validation() {
        assert!(UflpInstance::new("bad", &[vec![1.0, -1.0]], &[1.0, 1.0]).is_err());
        assert!(UflpInstance::new("bad", &[vec![1.0]], &[1.0, 1.0]).is_err());
        assert!(UflpInstance::new("bad", &[], &[1.0]).is_err());
        assert_eq!(instance1().default_penalty(), 34.0);
    }

    #[test]
    fn assignment_round_trip() {
        let l = QubitLayout::new(3, 2);
        for idx in [0u64, 1, 0b10101000000000, 12345] {
            let b = BitString::from_index(14, idx).unwrap();
            let a = Assignment::from_bits(&l, &b).unwrap();
            assert_eq!(a.to_bits(&l).unwrap(), b);
        }
    }
}
