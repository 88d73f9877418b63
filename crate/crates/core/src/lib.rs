//! Coalition structure generation as quadratic binary optimization.
//!
//! A coalition game over `n` agents is turned into a binary integer linear
//! program over the `2^n - 1` nonempty coalitions, folded into a QUBO with a
//! quadratic penalty for the exact-cover constraints, and mapped to an Ising
//! Hamiltonian. The crate solves the resulting problems with exact classical
//! oracles, simulated annealing, and a gate-level QAOA state-vector simulator,
//! and tabulates the QAOA gate counts against classical complexity curves.
//!
//! Conventions shared by every module:
//!
//! * A coalition is a bitmask: agent `a_i` (1-based) is a member iff bit
//!   `i - 1` is set. Coalition index `j` (1-based) is variable `j - 1`.
//! * Variable `k` of a QUBO is qubit `k` of a circuit and bit `k` of a basis
//!   state index. Bitstrings are printed with character `k` holding bit `k`.

pub mod analysis;
pub mod error;
pub mod game;
mod numfmt;
pub mod qaoa;
pub mod solvers;
pub mod transform;

pub use error::{Error, Result};
pub use game::{Coalition, CoalitionGame, CoalitionStructure, DistributionKind, DistributionSpec};
pub use numfmt::format_sig17;
pub use transform::{BilpInstance, DecodedSolution, IsingInstance, QuboInstance};
