use std::time::Instant;

use super::SolveReport;
use crate::error::{Error, Result};
use crate::game::{full_mask, Coalition, CoalitionGame, CoalitionStructure};

pub const MAX_DP_AGENTS: usize = 20;

/// Subset dynamic programme:
/// `f(T) = max(v(T), max f(T') + f(T \ T'))` over proper nonempty `T'`
/// holding the lowest agent of `T`, so each unordered split is tried once.
///
/// Ties keep the earliest candidate, with the unsplit coalition first and
/// splits in ascending order of `T'`.
pub fn solve_dp(game: &CoalitionGame) -> Result<SolveReport> {
    let n = game.agents();
    if n > MAX_DP_AGENTS {
        return Err(Error::ResourceLimit(format!(
            "dynamic programming is limited to {MAX_DP_AGENTS} agents, got {n}"
        )));
    }
    let start = Instant::now();
    let full = full_mask(n) as usize;
    let mut best = vec![0.0f64; full + 1];
    // choice[T] == T means "keep T whole", otherwise the part holding T's
    // lowest agent.
    let mut choice = vec![0u32; full + 1];
    let mut splits: u64 = 0;

    for mask in 1..=full {
        let mut value = game.values()[mask - 1];
        let mut part_of_best = mask;
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        // Proper nonempty submasks of `rest`, ascending via the complement
        // trick, each combined with `low`.
        let mut sub = 0usize;
        loop {
            let part = sub | low;
            if part != mask {
                splits += 1;
                let candidate = best[part] + best[mask ^ part];
                if candidate > value {
                    value = candidate;
                    part_of_best = part;
                }
            }
            if sub == rest {
                break;
            }
            sub = (sub.wrapping_sub(rest)) & rest;
        }
        best[mask] = value;
        choice[mask] = part_of_best as u32;
    }

    let mut blocks = Vec::new();
    let mut stack = vec![full as u32];
    while let Some(t) = stack.pop() {
        let part = choice[t as usize];
        if part == t {
            blocks.push(Coalition(t));
        } else {
            stack.push(part);
            stack.push(t ^ part);
        }
    }
    let cs = CoalitionStructure::new(n, blocks).expect("reconstruction yields a partition");
    Ok(SolveReport::new("dp", Some(cs), best[full])
        .with_meta("splits", splits)
        .timed(start))
}
