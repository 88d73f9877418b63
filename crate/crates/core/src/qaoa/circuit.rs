use std::fmt;
use std::io::Write;

use crate::error::{Error, Result};
use crate::numfmt::format_sig17;
use crate::transform::IsingInstance;

use super::QaoaParams;

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    Rx(usize, f64),
    Rz(usize, f64),
    Cnot { control: usize, target: usize },
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::Rx(q, angle) => write!(f, "RX {q} {}", format_sig17(angle)),
            Gate::Rz(q, angle) => write!(f, "RZ {q} {}", format_sig17(angle)),
            Gate::Cnot { control, target } => write!(f, "CX {control} {target}"),
        }
    }
}

/// Gate totals by kind.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct GateTally {
    pub h: usize,
    pub rx: usize,
    pub rz: usize,
    pub cnot: usize,
}

impl GateTally {
    pub fn total(&self) -> usize {
        self.h + self.rx + self.rz + self.cnot
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitDescription {
    pub qubits: usize,
    pub gates: Vec<Gate>,
}

impl CircuitDescription {
    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn tally(&self) -> GateTally {
        let mut t = GateTally::default();
        for g in &self.gates {
            match g {
                Gate::H(_) => t.h += 1,
                Gate::Rx(..) => t.rx += 1,
                Gate::Rz(..) => t.rz += 1,
                Gate::Cnot { .. } => t.cnot += 1,
            }
        }
        t
    }

    /// One gate per line: `H q`, `RX q angle`, `RZ q angle`, `CX c t`.
    pub fn write_text<W: Write>(&self, mut writer: W) -> Result<()> {
        writeln!(writer, "# qubits {}", self.qubits)?;
        for g in &self.gates {
            writeln!(writer, "{g}")?;
        }
        Ok(())
    }
}

/// Lays out the QAOA circuit for `ising`.
///
/// Hadamards on every qubit, then per layer `j`:
/// `RZ(i, -2 gamma_j h_i)` on every qubit; `CX(i,k) RZ(k, 2 gamma_j J_ik)
/// CX(i,k)` for every interaction in ascending `(i, k)`; `RX(i, 2 beta_j)` on
/// every qubit.
///
/// Spin `+1` is a set bit, i.e. `|1>`, where `Z` has eigenvalue `-1`; the
/// field rotations are negated to compensate, so each cost block equals
/// `exp(-i gamma_j E)` up to a global phase. `Z_i Z_k` is blind to the
/// flip, so coupling rotations keep their sign.
pub fn build_circuit(ising: &IsingInstance, params: &QaoaParams) -> Result<CircuitDescription> {
    let m = ising.len();
    if m > MAX_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "{m} qubits exceeds the simulator limit of {MAX_QUBITS}"
        )));
    }
    params.validate()?;
    let s = ising.couplings().len();
    let mut gates = Vec::with_capacity(m + params.p() * (2 * m + 3 * s));
    gates.extend((0..m).map(Gate::H));
    for (&beta, &gamma) in params.betas.iter().zip(&params.gammas) {
        for (i, &h) in ising.fields().iter().enumerate() {
            gates.push(Gate::Rz(i, -2.0 * gamma * h));
        }
        for (&(i, k), &j) in ising.couplings() {
            gates.push(Gate::Cnot {
                control: i,
                target: k,
            });
            gates.push(Gate::Rz(k, 2.0 * gamma * j));
            gates.push(Gate::Cnot {
                control: i,
                target: k,
            });
        }
        gates.extend((0..m).map(|i| Gate::Rx(i, 2.0 * beta)));
    }
    Ok(CircuitDescription { qubits: m, gates })
}
