use std::collections::BTreeMap;

use super::QuboInstance;
use crate::error::{Error, Result};

/// `E(z) = sum_i h_i z_i + sum_{(i,j)} J_ij z_i z_j` over spins `z_i = 2 x_i - 1`.
///
/// `offset` closes the gap to the QUBO: `E(z) + offset` equals the QUBO
/// energy of `x(z)`, constant excluded.
#[derive(Clone, Debug, PartialEq)]
pub struct IsingInstance {
    h: Vec<f64>,
    couplings: BTreeMap<(usize, usize), f64>,
    offset: f64,
}

impl IsingInstance {
    pub fn new(h: Vec<f64>, couplings: BTreeMap<(usize, usize), f64>, offset: f64) -> Result<Self> {
        let m = h.len();
        if let Some(&(i, j)) = couplings.keys().find(|&&(i, j)| !(i < j && j < m)) {
            return Err(Error::Schema(format!(
                "coupling ({i}, {j}) is not an upper-triangular pair of {m} spins"
            )));
        }
        Ok(IsingInstance {
            h,
            couplings,
            offset,
        })
    }

    /// Spin count.
    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    pub fn fields(&self) -> &[f64] {
        &self.h
    }

    pub fn couplings(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.couplings
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Energy of a spin assignment; entries must be `+1` or `-1`.
    pub fn energy(&self, z: &[i8]) -> Result<f64> {
        if z.len() != self.len() {
            return Err(Error::Dimension {
                expected: self.len(),
                actual: z.len(),
            });
        }
        let field: f64 = self.h.iter().zip(z).map(|(h, &s)| h * f64::from(s)).sum();
        let coupling: f64 = self
            .couplings
            .iter()
            .map(|(&(i, j), &jij)| jij * f64::from(z[i] * z[j]))
            .sum();
        Ok(field + coupling)
    }

    /// Energy of the basis state whose bit `k` is `x_k` (spin `+1` for a set
    /// bit).
    pub fn energy_of_basis(&self, basis: usize) -> f64 {
        let spin = |k: usize| if basis >> k & 1 == 1 { 1.0 } else { -1.0 };
        let field: f64 = self.h.iter().enumerate().map(|(k, h)| h * spin(k)).sum();
        let coupling: f64 = self
            .couplings
            .iter()
            .map(|(&(i, j), &jij)| jij * spin(i) * spin(j))
            .sum();
        field + coupling
    }

    /// `E(z)` for every basis state of `m` qubits. The table has `2^m` entries.
    pub fn energy_table(&self) -> Vec<f64> {
        let m = self.len();
        let mut table = vec![0.0; 1 << m];
        let mut pairs: Vec<(usize, usize, f64)> = self
            .couplings
            .iter()
            .map(|(&(i, j), &v)| (i, j, v))
            .collect();
        pairs.sort_by_key(|&(i, j, _)| (i, j));
        for (basis, e) in table.iter_mut().enumerate() {
            let spin = |k: usize| if basis >> k & 1 == 1 { 1.0 } else { -1.0 };
            let mut acc = 0.0;
            for (k, h) in self.h.iter().enumerate() {
                acc += h * spin(k);
            }
            for &(i, j, v) in &pairs {
                acc += v * spin(i) * spin(j);
            }
            *e = acc;
        }
        table
    }
}

/// Substitutes `x = (1 + z) / 2`:
/// `h_i = d_i / 2 + sum_j q_ij / 4`, `J_ij = q_ij / 4`,
/// `offset = sum_i d_i / 2 + sum q_ij / 4`.
pub fn qubo_to_ising(qubo: &QuboInstance) -> IsingInstance {
    let mut h: Vec<f64> = qubo.diag().iter().map(|d| d / 2.0).collect();
    let mut offset: f64 = qubo.diag().iter().sum::<f64>() / 2.0;
    let mut couplings = BTreeMap::new();
    for (&(i, j), &q) in qubo.offdiag() {
        h[i] += q / 4.0;
        h[j] += q / 4.0;
        offset += q / 4.0;
        couplings.insert((i, j), q / 4.0);
    }
    IsingInstance {
        h,
        couplings,
        offset,
    }
}
