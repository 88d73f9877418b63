use std::time::Instant;

use super::{tied, SolveReport};
use crate::error::{Error, Result};
use crate::game::CoalitionStructure;
use crate::transform::{
    bits_from_mask, decode_solution, format_bits, interaction_count, BilpInstance, QuboInstance,
};

pub const MAX_EXHAUSTIVE_VARIABLES: usize = 24;

/// Exact QUBO minimisation over all `2^m` bitstrings, decoded through
/// `bilp`.
///
/// Strings are visited in Gray-code order so each step costs one variable's
/// degree. Any string whose running energy comes within the drift margin of
/// the incumbent is re-scored exactly before it can replace it. Exact ties
/// prefer a feasible string, then the smaller block list, then the smaller
/// mask.
pub fn solve_qubo_exhaustive(qubo: &QuboInstance, bilp: &BilpInstance) -> Result<SolveReport> {
    let m = qubo.len();
    if m != bilp.len() {
        return Err(Error::Dimension {
            expected: bilp.len(),
            actual: m,
        });
    }
    if m > MAX_EXHAUSTIVE_VARIABLES {
        return Err(Error::ResourceLimit(format!(
            "exhaustive search is limited to {MAX_EXHAUSTIVE_VARIABLES} variables, got {m}"
        )));
    }
    let start = Instant::now();
    let adj = qubo.adjacency();
    let diag = qubo.diag();
    let scale: f64 = diag.iter().map(|d| d.abs()).sum::<f64>()
        + qubo.offdiag().values().map(|q| q.abs()).sum::<f64>();
    let margin = 1e-9 * scale.max(1.0);

    let mut state = 0u64;
    let mut running = 0.0f64;
    let mut best = Candidate::score(0, qubo, bilp);
    let total: u64 = 1 << m;
    for step in 1..total {
        let k = step.trailing_zeros() as usize;
        let local: f64 = adj[k]
            .iter()
            .filter(|&&(j, _)| state >> j & 1 == 1)
            .map(|&(_, q)| q)
            .sum();
        if state >> k & 1 == 1 {
            running -= diag[k] + local;
        } else {
            running += diag[k] + local;
        }
        state ^= 1 << k;
        if step & 0xffff == 0 {
            running = qubo.energy_of_mask(state);
        }
        if running <= best.energy + margin {
            let candidate = Candidate::score(state, qubo, bilp);
            if candidate.beats(&best) {
                best = candidate;
            }
        }
    }

    let decoded = decode_solution(&bits_from_mask(best.mask, m), bilp);
    let value = selected_value(bilp, best.mask);
    let mut report = SolveReport::new("qubo-brute", decoded.cs, value)
        .with_meta("strings", total)
        .with_meta("s", interaction_count(qubo))
        .with_meta("m", m);
    if let Some(lambda) = qubo.lambda() {
        report = report.with_meta("lambda", lambda);
    }
    report.bitstring = Some(format_bits(&decoded.x));
    report.energy = Some(best.energy + qubo.constant());
    Ok(report.timed(start))
}

pub(crate) fn selected_value(bilp: &BilpInstance, mask: u64) -> f64 {
    bilp.values()
        .iter()
        .enumerate()
        .filter(|&(k, _)| mask >> k & 1 == 1)
        .map(|(_, v)| v)
        .sum()
}

struct Candidate {
    mask: u64,
    energy: f64,
    cs: Option<CoalitionStructure>,
}

impl Candidate {
    fn score(mask: u64, qubo: &QuboInstance, bilp: &BilpInstance) -> Self {
        let energy = qubo.energy_of_mask(mask);
        let cs = decode_solution(&bits_from_mask(mask, qubo.len()), bilp).cs;
        Candidate { mask, energy, cs }
    }

    fn beats(&self, other: &Candidate) -> bool {
        if !tied(self.energy, other.energy) {
            return self.energy < other.energy;
        }
        match (&self.cs, &other.cs) {
            (Some(a), Some(b)) => a < b || (a == b && self.mask < other.mask),
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => self.mask < other.mask,
        }
    }
}
