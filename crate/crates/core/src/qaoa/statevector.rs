use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{weighted::WeightedIndex, Distribution};

use super::circuit::{CircuitDescription, Gate};
use crate::error::{Error, Result};
use crate::transform::{format_bits, IsingInstance};

/// Amplitudes of an `m`-qubit register. Qubit `k` is bit `k` of the basis
/// index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(qubits: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { qubits, amps }
    }

    pub fn basis(qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { qubits, amps }
    }

    pub fn uniform(qubits: usize) -> Self {
        let a = (1.0 / (1u64 << qubits) as f64).sqrt();
        StateVector {
            qubits,
            amps: vec![Complex64::new(a, 0.0); 1 << qubits],
        }
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply(&mut self, gate: &Gate) {
        match *gate {
            Gate::H(q) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.for_pairs(q, |a, b| (s * (a + b), s * (a - b)));
            }
            Gate::Rx(q, theta) => {
                let c = Complex64::new((theta / 2.0).cos(), 0.0);
                let is = Complex64::new(0.0, -(theta / 2.0).sin());
                self.for_pairs(q, |a, b| (c * a + is * b, is * a + c * b));
            }
            Gate::Rz(q, theta) => {
                let lo = Complex64::from_polar(1.0, -theta / 2.0);
                let hi = Complex64::from_polar(1.0, theta / 2.0);
                self.for_pairs(q, |a, b| (lo * a, hi * b));
            }
            Gate::Cnot { control, target } => {
                let (c, t) = (1usize << control, 1usize << target);
                for i in 0..self.amps.len() {
                    if i & c != 0 && i & t == 0 {
                        self.amps.swap(i, i | t);
                    }
                }
            }
        }
    }

    /// Runs `f` on every amplitude pair differing only in bit `q`.
    fn for_pairs(&mut self, q: usize, f: impl Fn(Complex64, Complex64) -> (Complex64, Complex64)) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = f(self.amps[i], self.amps[i | bit]);
                self.amps[i] = a;
                self.amps[i | bit] = b;
            }
        }
    }
}

/// Applies `circuit` to `|0...0>`.
pub fn simulate(circuit: &CircuitDescription) -> StateVector {
    let mut state = StateVector::zero(circuit.qubits);
    for gate in &circuit.gates {
        state.apply(gate);
    }
    state
}

/// `sum_x |amp(x)|^2 E(x)`, offset excluded.
pub fn expectation(state: &StateVector, ising: &IsingInstance) -> Result<f64> {
    if ising.len() != state.qubits {
        return Err(Error::Dimension {
            expected: state.qubits,
            actual: ising.len(),
        });
    }
    expectation_from_table(state, &ising.energy_table())
}

/// [`expectation`] against a precomputed [`IsingInstance::energy_table`].
pub fn expectation_from_table(state: &StateVector, energies: &[f64]) -> Result<f64> {
    if energies.len() != state.amps.len() {
        return Err(Error::Dimension {
            expected: state.amps.len(),
            actual: energies.len(),
        });
    }
    Ok(state
        .amps
        .iter()
        .zip(energies)
        .map(|(a, e)| a.norm_sqr() * e)
        .sum())
}

/// Measures every qubit `shots` times. Keys are bitstrings with character
/// `k` holding qubit `k`.
pub fn sample(state: &StateVector, shots: usize, seed: u64) -> Result<BTreeMap<String, u64>> {
    if shots == 0 {
        return Err(Error::Config("at least one shot is required".into()));
    }
    let dist = WeightedIndex::new(state.probabilities())
        .map_err(|e| Error::Config(format!("state cannot be sampled: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = vec![0u64; state.amps.len()];
    for _ in 0..shots {
        hits[dist.sample(&mut rng)] += 1;
    }
    Ok(hits
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(basis, c)| (basis_label(basis, state.qubits), c))
        .collect())
}

pub(crate) fn basis_label(basis: usize, qubits: usize) -> String {
    format_bits(&crate::transform::bits_from_mask(basis as u64, qubits))
}

pub(crate) fn basis_from_label(label: &str) -> usize {
    label
        .bytes()
        .enumerate()
        .filter(|&(_, b)| b == b'1')
        .fold(0, |acc, (k, _)| acc | 1 << k)
}
