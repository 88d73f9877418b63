use std::time::Instant;

use super::{compare_candidates, SolveReport};
use crate::error::{Error, Result};
use crate::game::{Coalition, CoalitionGame, CoalitionStructure};

/// Bell(12) is about 4.2 million partitions.
pub const MAX_ENUM_AGENTS: usize = 12;

/// Iterates the set partitions of `n` elements as restricted growth strings:
/// `a[0] = 0` and `a[i] <= 1 + max(a[..i])`. Element `i` sits in block `a[i]`.
pub struct SetPartitions {
    rgs: Vec<usize>,
    // max of rgs[..=i]
    prefix_max: Vec<usize>,
    started: bool,
    done: bool,
}

impl SetPartitions {
    pub fn new(n: usize) -> Self {
        SetPartitions {
            rgs: vec![0; n],
            prefix_max: vec![0; n],
            started: false,
            done: n == 0,
        }
    }

    fn advance(&mut self) -> bool {
        let n = self.rgs.len();
        // Rightmost position that can still grow.
        let Some(i) = (1..n)
            .rev()
            .find(|&i| self.rgs[i] <= self.prefix_max[i - 1])
        else {
            return false;
        };
        self.rgs[i] += 1;
        self.prefix_max[i] = self.prefix_max[i - 1].max(self.rgs[i]);
        for k in i + 1..n {
            self.rgs[k] = 0;
            self.prefix_max[k] = self.prefix_max[i];
        }
        true
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if self.started && !self.advance() {
            self.done = true;
            return None;
        }
        self.started = true;
        Some(self.rgs.clone())
    }
}

/// Number of set partitions of `n` elements, via the Bell triangle.
pub fn bell_number(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            next.push(next.last().unwrap() + x);
        }
        row = next;
    }
    row[0]
}

fn blocks_of(rgs: &[usize]) -> Vec<Coalition> {
    let count = rgs.iter().max().map_or(0, |m| m + 1);
    let mut masks = vec![0u32; count];
    for (agent, &block) in rgs.iter().enumerate() {
        masks[block] |= 1 << agent;
    }
    let mut blocks: Vec<Coalition> = masks.into_iter().map(Coalition).collect();
    blocks.sort_unstable();
    blocks
}

/// Scores every coalition structure and keeps the best.
pub fn solve_enum(game: &CoalitionGame) -> Result<SolveReport> {
    let n = game.agents();
    if n > MAX_ENUM_AGENTS {
        return Err(Error::ResourceLimit(format!(
            "enumeration is limited to {MAX_ENUM_AGENTS} agents, got {n}"
        )));
    }
    let start = Instant::now();
    let mut best: Option<(f64, CoalitionStructure)> = None;
    let mut examined: u64 = 0;
    for rgs in SetPartitions::new(n) {
        examined += 1;
        let blocks = blocks_of(&rgs);
        let value: f64 = blocks.iter().map(|&b| game.value(b)).sum();
        let cs = CoalitionStructure::from_sorted_unchecked(blocks);
        let better = match &best {
            None => true,
            Some((bv, bcs)) => compare_candidates(value, &cs, *bv, bcs).is_lt(),
        };
        if better {
            best = Some((value, cs));
        }
    }
    let (value, cs) = best.expect("every game has at least one partition");
    Ok(SolveReport::new("enum", Some(cs), value)
        .with_meta("partitions", examined)
        .timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::tests::g2;

    #[test]
    fn partition_counts_match_bell_numbers() {
        let bell = [1u128, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(bell_number(n), b);
            if n > 0 {
                assert_eq!(SetPartitions::new(n).count() as u128, b, "n={n}");
            }
        }
    }

    #[test]
    fn partitions_are_distinct_restricted_growth_strings() {
        let all: Vec<_> = SetPartitions::new(5).collect();
        let unique: std::collections::BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(unique.len(), all.len());
        for rgs in all {
            assert_eq!(rgs[0], 0);
            for i in 1..rgs.len() {
                assert!(rgs[i] <= rgs[..i].iter().max().unwrap() + 1);
            }
        }
    }

    #[test]
    fn g2_grand_coalition_wins() {
        let r = solve_enum(&g2()).unwrap();
        assert_eq!(r.best_value, 4.0);
        assert_eq!(r.best_cs.unwrap().blocks(), &[Coalition(3)]);
        assert_eq!(r.metadata["partitions"], 2);
    }

    #[test]
    fn four_agents_examine_fifteen() {
        let g = CoalitionGame::new(4, vec![1.0; 15]).unwrap();
        let r = solve_enum(&g).unwrap();
        assert_eq!(r.metadata["partitions"], 15);
        // All singletons, value 4, and [1,2,4,8] is the smallest block list.
        assert_eq!(r.best_value, 4.0);
        let blocks: Vec<u32> = r.best_cs.unwrap().blocks().iter().map(|c| c.0).collect();
        assert_eq!(blocks, vec![1, 2, 4, 8]);
    }

    #[test]
    fn ties_break_to_smallest_block_list() {
        // {a1},{a2} and {a1,a2} both worth 2.
        let g = CoalitionGame::new(2, vec![1.0, 1.0, 2.0]).unwrap();
        let r = solve_enum(&g).unwrap();
        let blocks: Vec<u32> = r.best_cs.unwrap().blocks().iter().map(|c| c.0).collect();
        assert_eq!(blocks, vec![1, 2]);
    }

    #[test]
    fn too_many_agents() {
        let g = CoalitionGame::new(13, vec![0.0; (1 << 13) - 1]).unwrap();
        assert!(matches!(solve_enum(&g), Err(Error::ResourceLimit(_))));
    }
}
