use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::game::{full_mask, Coalition, CoalitionGame};

/// Exact-cover program: choose coalition columns so that every agent is
/// covered exactly once, maximising the summed value.
///
/// The membership matrix `S` is stored by column: column `k` is the bitmask
/// of the coalition it represents, so `S[i][k] = 1` iff bit `i` of
/// `columns[k]` is set. Columns are in ascending coalition-index order.
#[derive(Clone, Debug, PartialEq)]
pub struct BilpInstance {
    n: usize,
    columns: Vec<Coalition>,
    values: Vec<f64>,
    excluded: BTreeSet<Coalition>,
}

impl BilpInstance {
    pub fn agents(&self) -> usize {
        self.n
    }

    /// Variable count `m`.
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[Coalition] {
        &self.columns
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn excluded(&self) -> &BTreeSet<Coalition> {
        &self.excluded
    }

    /// The all-ones right-hand side `b`.
    pub fn rhs(&self) -> Vec<i64> {
        vec![1; self.n]
    }

    /// Column position of `coalition`, if it was not excluded.
    pub fn column_of(&self, coalition: Coalition) -> Option<usize> {
        self.columns.binary_search(&coalition).ok()
    }

    /// Columns in which agent `a_{row+1}` appears.
    pub fn row(&self, row: usize) -> Vec<usize> {
        self.columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c.0 >> row & 1 == 1)
            .map(|(k, _)| k)
            .collect()
    }

    /// Dense `n x m` 0/1 matrix, for inspection and tests.
    pub fn membership_matrix(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|i| self.columns.iter().map(|c| (c.0 >> i & 1) as u8).collect())
            .collect()
    }
}

/// Builds the exact-cover program for `game`, dropping the variables of every
/// coalition in `excluded`.
pub fn build_bilp(game: &CoalitionGame, excluded: &[Coalition]) -> Result<BilpInstance> {
    let n = game.agents();
    let full = full_mask(n);
    let excluded: BTreeSet<Coalition> = excluded.iter().copied().collect();
    if let Some(bad) = excluded.iter().find(|c| c.0 == 0 || c.0 > full) {
        return Err(Error::Range(format!(
            "excluded coalition index {} outside 1..={full}",
            bad.0
        )));
    }

    let (columns, values): (Vec<_>, Vec<_>) = game
        .coalitions()
        .filter(|(c, _)| !excluded.contains(c))
        .unzip();

    if !excluded.is_empty() {
        check_coverable(n, &columns)?;
    }

    Ok(BilpInstance {
        n,
        columns,
        values,
        excluded,
    })
}

/// Fails unless some subset of `columns` partitions the agent set.
fn check_coverable(n: usize, columns: &[Coalition]) -> Result<()> {
    let covered = columns.iter().fold(0u32, |acc, c| acc | c.0);
    if let Some(agent) = (1..=n).find(|&a| covered >> (a - 1) & 1 == 0) {
        return Err(Error::Infeasible(format!(
            "agent a{agent} appears in no remaining coalition"
        )));
    }
    if (1..=n).all(|a| columns.binary_search(&Coalition::singleton(a)).is_ok()) {
        return Ok(());
    }

    // reachable[T]: T can be partitioned into allowed coalitions. Only
    // splits whose first part holds T's lowest agent are tried.
    let full = full_mask(n) as usize;
    let mut allowed = vec![false; full + 1];
    for c in columns {
        allowed[c.0 as usize] = true;
    }
    let mut reachable = vec![false; full + 1];
    reachable[0] = true;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut sub = rest;
        loop {
            let part = sub | low;
            if allowed[part] && reachable[mask ^ part] {
                reachable[mask] = true;
                break;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    if reachable[full] {
        Ok(())
    } else {
        Err(Error::Infeasible(
            "the remaining coalitions admit no coalition structure".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::tests::g2;

    fn game(n: usize) -> CoalitionGame {
        let values = (1..=(1 << n) - 1).map(|j| j as f64).collect();
        CoalitionGame::new(n, values).unwrap()
    }

    #[test]
    fn two_agent_membership() {
        let bilp = build_bilp(&g2(), &[]).unwrap();
        assert_eq!(bilp.membership_matrix(), vec![vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(bilp.values(), &[1.0, 2.0, 4.0]);
        assert_eq!(bilp.rhs(), vec![1, 1]);
    }

    #[test]
    fn each_row_covers_half_the_coalitions() {
        for n in 1..=6 {
            let bilp = build_bilp(&game(n), &[]).unwrap();
            for (i, row) in bilp.membership_matrix().iter().enumerate() {
                let ones: usize = row.iter().map(|&b| b as usize).sum();
                assert_eq!(ones, 1 << (n - 1), "n={n} row {i}");
                assert_eq!(bilp.row(i).len(), ones);
            }
            for k in 0..bilp.len() {
                let ones: usize = bilp.membership_matrix().iter().map(|r| r[k] as usize).sum();
                assert!((1..=n).contains(&ones));
            }
        }
    }

    #[test]
    fn excluding_grand_coalition() {
        let bilp = build_bilp(&game(3), &[Coalition(7)]).unwrap();
        assert_eq!(bilp.len(), 6);
        let s = bilp.membership_matrix();
        assert!((0..6).all(|k| s.iter().map(|r| r[k]).sum::<u8>() < 3));
        assert_eq!(bilp.column_of(Coalition(7)), None);
        assert_eq!(bilp.column_of(Coalition(6)), Some(5));
    }

    #[test]
    fn exclusion_can_make_problem_infeasible() {
        // a1 then appears nowhere.
        let err = build_bilp(&g2(), &[Coalition(1), Coalition(3)]).unwrap_err();
        assert!(matches!(err, Error::Infeasible(_)));
        // Every agent is still covered, but {a1,a2} and {a2,a3} overlap
        // and no singleton of a1 or a3 remains.
        let keep = [3u32, 6];
        let drop: Vec<Coalition> = (1..=7)
            .filter(|j| !keep.contains(j))
            .map(Coalition)
            .collect();
        let err = build_bilp(&game(3), &drop).unwrap_err();
        assert!(matches!(err, Error::Infeasible(_)), "{err}");
        // {a1,a2} + {a3} is still a structure.
        let keep = [3u32, 4];
        let drop: Vec<Coalition> = (1..=7)
            .filter(|j| !keep.contains(j))
            .map(Coalition)
            .collect();
        assert_eq!(build_bilp(&game(3), &drop).unwrap().len(), 2);
    }

    #[test]
    fn exclusion_index_out_of_range() {
        assert!(matches!(
            build_bilp(&g2(), &[Coalition(4)]),
            Err(Error::Range(_))
        ));
        assert!(matches!(
            build_bilp(&g2(), &[Coalition(0)]),
            Err(Error::Range(_))
        ));
    }
}
