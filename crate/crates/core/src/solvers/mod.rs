//! Classical solution backends.
//!
//! Two exact oracles work on the game directly ([`solve_enum`] over set
//! partitions, [`solve_dp`] over subsets). Two solvers work on the QUBO
//! ([`solve_qubo_exhaustive`] over all bitstrings, [`solve_qubo_sa`] by
//! simulated annealing) and decode their answer back through the BILP.

mod anneal;
mod dp;
mod enumerate;
mod exhaustive;
mod report;

pub use anneal::{anneal, solve_qubo_sa, AnnealOutcome, AnnealSchedule};
pub use dp::{solve_dp, MAX_DP_AGENTS};
pub use enumerate::{bell_number, solve_enum, SetPartitions, MAX_ENUM_AGENTS};
pub use exhaustive::{solve_qubo_exhaustive, MAX_EXHAUSTIVE_VARIABLES};
pub use report::{SolveReport, Timing};

use std::cmp::Ordering;

use crate::game::CoalitionStructure;

/// Values closer than this (relative) count as tied.
pub(crate) const TIE_TOLERANCE: f64 = 1e-9;

pub(crate) fn tied(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

/// Orders candidates best-first: higher value, then the lexicographically
/// smaller block list.
pub(crate) fn compare_candidates(
    value: f64,
    cs: &CoalitionStructure,
    best_value: f64,
    best_cs: &CoalitionStructure,
) -> Ordering {
    if tied(value, best_value) {
        cs.cmp(best_cs)
    } else if value > best_value {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}
