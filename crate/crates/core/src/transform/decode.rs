use serde::Serialize;

use super::BilpInstance;
use crate::game::{Coalition, CoalitionStructure};

/// A binary solution read back as a coalition structure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecodedSolution {
    pub x: Vec<bool>,
    pub feasible: bool,
    /// Present exactly when `feasible`.
    pub cs: Option<CoalitionStructure>,
    /// `Sx - b` per agent: 0 when covered once, -1 when uncovered, `k - 1`
    /// when covered `k` times.
    pub violation: Vec<i64>,
}

/// Decodes `x` against `bilp`. Infeasible selections are reported, not
/// rejected. Panics if `x.len()` differs from the variable count.
pub fn decode_solution(x: &[bool], bilp: &BilpInstance) -> DecodedSolution {
    assert_eq!(
        x.len(),
        bilp.len(),
        "solution length must match variable count"
    );
    let n = bilp.agents();
    let selected: Vec<Coalition> = bilp
        .columns()
        .iter()
        .zip(x)
        .filter(|(_, &b)| b)
        .map(|(&c, _)| c)
        .collect();
    let violation: Vec<i64> = (0..n)
        .map(|i| selected.iter().filter(|c| c.0 >> i & 1 == 1).count() as i64 - 1)
        .collect();
    let feasible = violation.iter().all(|&v| v == 0);
    let cs = feasible.then(|| CoalitionStructure::from_sorted_unchecked(selected));
    DecodedSolution {
        x: x.to_vec(),
        feasible,
        cs,
        violation,
    }
}
