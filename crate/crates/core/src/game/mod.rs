//! Characteristic-function games over bitmask-indexed coalitions.

mod distribution;
mod io;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use distribution::{generate_game, DistributionKind, DistributionSpec};
pub use io::{load_game, read_game, save_game, write_game};

/// Largest agent count for which a full characteristic function is stored.
pub const MAX_AGENTS: usize = 20;

/// A nonempty set of agents, encoded as a bitmask (bit `i` is agent `a_{i+1}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coalition(pub u32);

impl Coalition {
    /// The coalition with every one of `n` agents.
    pub fn grand(n: usize) -> Self {
        Coalition(full_mask(n))
    }

    pub fn singleton(agent: usize) -> Self {
        Coalition(1 << (agent - 1))
    }

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn size(self) -> u32 {
        self.0.count_ones()
    }

    /// 1-based membership test.
    pub fn contains(self, agent: usize) -> bool {
        (1..=32).contains(&agent) && self.0 & (1 << (agent - 1)) != 0
    }

    pub fn intersects(self, other: Coalition) -> bool {
        self.0 & other.0 != 0
    }

    pub fn overlap(self, other: Coalition) -> u32 {
        (self.0 & other.0).count_ones()
    }

    /// Member agents, 1-based and ascending.
    pub fn members(self) -> Vec<usize> {
        (0..32)
            .filter(|b| self.0 & (1 << b) != 0)
            .map(|b| b + 1)
            .collect()
    }
}

impl fmt::Display for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.members().iter().map(|a| format!("a{a}")).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

pub(crate) fn full_mask(n: usize) -> u32 {
    debug_assert!(n <= 31);
    (1u32 << n) - 1
}

/// Coalition count `2^n - 1` for `n` agents.
pub fn coalition_count(n: usize) -> usize {
    (1usize << n) - 1
}

/// The agents (1-based) belonging to coalition `index` in an `n`-agent game.
pub fn coalition_members(index: u32, n: usize) -> Result<Vec<usize>> {
    if n == 0 || n > 31 {
        return Err(Error::Range(format!("agent count {n} outside 1..=31")));
    }
    if index == 0 || index > full_mask(n) {
        return Err(Error::Range(format!(
            "coalition index {index} outside 1..={}",
            full_mask(n)
        )));
    }
    Ok(Coalition(index).members())
}

/// A partition of the agent set, held as blocks sorted by index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoalitionStructure {
    blocks: Vec<Coalition>,
}

impl CoalitionStructure {
    /// Builds a structure for `n` agents, checking that the blocks are
    /// nonempty, pairwise disjoint and cover every agent.
    pub fn new(n: usize, mut blocks: Vec<Coalition>) -> Result<Self> {
        if n == 0 || n > 31 {
            return Err(Error::InvalidStructure(format!(
                "agent count {n} outside 1..=31"
            )));
        }
        let full = full_mask(n);
        let mut seen = 0u32;
        for block in &blocks {
            if block.0 == 0 {
                return Err(Error::InvalidStructure("empty block".into()));
            }
            if block.0 & !full != 0 {
                return Err(Error::InvalidStructure(format!(
                    "block {} names agents beyond a{n}",
                    block.0
                )));
            }
            if block.0 & seen != 0 {
                return Err(Error::InvalidStructure(format!(
                    "block {} overlaps an earlier block",
                    block.0
                )));
            }
            seen |= block.0;
        }
        if seen != full {
            return Err(Error::InvalidStructure(format!(
                "blocks cover mask {seen:#b}, expected {full:#b}"
            )));
        }
        blocks.sort_unstable();
        Ok(CoalitionStructure { blocks })
    }

    pub(crate) fn from_sorted_unchecked(blocks: Vec<Coalition>) -> Self {
        debug_assert!(blocks.windows(2).all(|w| w[0] < w[1]));
        CoalitionStructure { blocks }
    }

    pub fn blocks(&self) -> &[Coalition] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Union of all blocks as a bitmask.
    pub fn cover(&self) -> u32 {
        self.blocks.iter().fold(0, |acc, b| acc | b.0)
    }
}

impl fmt::Display for CoalitionStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `n` agents and a value for each of the `2^n - 1` nonempty coalitions.
#[derive(Clone, Debug, PartialEq)]
pub struct CoalitionGame {
    n: usize,
    values: Vec<f64>,
    dist_label: Option<String>,
    seed: Option<u64>,
}

impl CoalitionGame {
    /// `values[j]` is the value of the coalition with index `j + 1`.
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Schema("a game needs at least one agent".into()));
        }
        if n > MAX_AGENTS {
            return Err(Error::ResourceLimit(format!(
                "{n} agents exceeds the supported maximum of {MAX_AGENTS}"
            )));
        }
        if values.len() != coalition_count(n) {
            return Err(Error::Schema(format!(
                "expected {} coalition values for {n} agents, got {}",
                coalition_count(n),
                values.len()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Schema(format!(
                "value of coalition {} is not finite",
                j + 1
            )));
        }
        Ok(CoalitionGame {
            n,
            values,
            dist_label: None,
            seed: None,
        })
    }

    pub fn with_provenance(mut self, dist_label: Option<String>, seed: Option<u64>) -> Self {
        self.dist_label = dist_label;
        self.seed = seed;
        self
    }

    pub fn agents(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, coalition: Coalition) -> f64 {
        self.values[coalition.0 as usize - 1]
    }

    pub fn dist_label(&self) -> Option<&str> {
        self.dist_label.as_deref()
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn grand_coalition(&self) -> Coalition {
        Coalition::grand(self.n)
    }

    /// Coalitions in index order, paired with their values.
    pub fn coalitions(&self) -> impl Iterator<Item = (Coalition, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(j, &v)| (Coalition(j as u32 + 1), v))
    }
}

/// Social welfare of `cs`: the sum of its block values.
pub fn cs_value(game: &CoalitionGame, cs: &CoalitionStructure) -> Result<f64> {
    // Re-validate: the structure may have been built for a different n.
    let checked = CoalitionStructure::new(game.agents(), cs.blocks().to_vec())?;
    Ok(checked.blocks().iter().map(|&b| game.value(b)).sum())
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// v({a1}) = 1, v({a2}) = 2, v({a1,a2}) = 4.
    pub(crate) fn g2() -> CoalitionGame {
        CoalitionGame::new(2, vec![1.0, 2.0, 4.0]).unwrap()
    }

    #[test]
    fn members_follow_bit_order() {
        assert_eq!(coalition_members(1, 3).unwrap(), vec![1]);
        assert_eq!(coalition_members(5, 3).unwrap(), vec![1, 3]);
        assert_eq!(coalition_members(7, 3).unwrap(), vec![1, 2, 3]);
    }

    #[test]
    fn members_out_of_range() {
        assert!(matches!(coalition_members(0, 3), Err(Error::Range(_))));
        assert!(matches!(coalition_members(8, 3), Err(Error::Range(_))));
    }

    #[test]
    fn cs_value_sums_blocks() {
        let g = g2();
        let split = CoalitionStructure::new(2, vec![Coalition(1), Coalition(2)]).unwrap();
        let grand = CoalitionStructure::new(2, vec![Coalition(3)]).unwrap();
        assert_eq!(cs_value(&g, &split).unwrap(), 3.0);
        assert_eq!(cs_value(&g, &grand).unwrap(), 4.0);
    }

    #[test]
    fn block_order_is_irrelevant() {
        let g = CoalitionGame::new(3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]).unwrap();
        let a = CoalitionStructure::new(3, vec![Coalition(4), Coalition(3)]).unwrap();
        let b = CoalitionStructure::new(3, vec![Coalition(3), Coalition(4)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(cs_value(&g, &a).unwrap(), 7.0);
    }

    #[test]
    fn structure_invariants() {
        assert!(CoalitionStructure::new(2, vec![Coalition(1)]).is_err());
        assert!(CoalitionStructure::new(2, vec![Coalition(1), Coalition(3)]).is_err());
        assert!(CoalitionStructure::new(2, vec![Coalition(0), Coalition(3)]).is_err());
        assert!(CoalitionStructure::new(2, vec![Coalition(7)]).is_err());
    }

    #[test]
    fn cs_value_rejects_structure_for_other_n() {
        let cs = CoalitionStructure::new(3, vec![Coalition(7)]).unwrap();
        assert!(matches!(
            cs_value(&g2(), &cs),
            Err(Error::InvalidStructure(_))
        ));
    }

    #[test]
    fn game_validation() {
        assert!(matches!(
            CoalitionGame::new(0, vec![]),
            Err(Error::Schema(_))
        ));
        assert!(matches!(
            CoalitionGame::new(2, vec![1.0, 2.0]),
            Err(Error::Schema(_))
        ));
        assert!(CoalitionGame::new(2, vec![1.0, f64::NAN, 0.0]).is_err());
    }
}
