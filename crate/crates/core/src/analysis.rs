//! Gate-count growth against the `n^n` and `3^n` baselines.

use std::fmt;
use std::io::Write;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numfmt::format_sig17;
use crate::qaoa::gate_count;

/// Largest agent count [`complexity_table`] accepts.
pub const MAX_ANALYSIS_AGENTS: u32 = 64;

/// Default layer counts for [`complexity_table`].
pub const DEFAULT_P_LIST: [u64; 4] = [1, 10, 25, 50];

pub const CSV_HEADER: &str =
    "n,p,s_mode,s,ip_cost,idp_boss_cost,bilpq_gates,log10_ip,log10_idp,log10_bilpq";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsityBounds {
    /// `2^n - 1`.
    pub min: BigUint,
    /// `2^(n-1) (2^n - 3) + 1`.
    pub max: BigUint,
    /// Intersecting coalition pairs: `C(2^n - 1, 2) - (3^n - 2^(n+1) + 1) / 2`.
    pub actual: BigUint,
}

/// Interaction-count bounds for `n` agents. The stated minimum exceeds the
/// real count at `n = 2`; both are reported as is.
pub fn sparsity_bounds(n: u32) -> Result<SparsityBounds> {
    if !(2..=MAX_ANALYSIS_AGENTS).contains(&n) {
        return Err(Error::Range(format!(
            "sparsity bounds need 2 <= n <= {MAX_ANALYSIS_AGENTS}, got {n}"
        )));
    }
    let one = BigUint::from(1u8);
    let pow2 = |k: u32| &one << k;
    let m = pow2(n) - 1u8;
    let min = m.clone();
    let max = pow2(n - 1) * (pow2(n) - 3u8) + 1u8;
    let pairs = &m * (&m - 1u8) / 2u8;
    let disjoint = (BigUint::from(3u8).pow(n) + 1u8 - pow2(n + 1)) / 2u8;
    Ok(SparsityBounds {
        min,
        max,
        actual: pairs - disjoint,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SMode {
    Min,
    Max,
    Actual,
}

impl SMode {
    pub const ALL: [SMode; 3] = [SMode::Min, SMode::Max, SMode::Actual];

    pub fn name(self) -> &'static str {
        match self {
            SMode::Min => "min",
            SMode::Max => "max",
            SMode::Actual => "actual",
        }
    }

    fn pick(self, b: &SparsityBounds) -> &BigUint {
        match self {
            SMode::Min => &b.min,
            SMode::Max => &b.max,
            SMode::Actual => &b.actual,
        }
    }
}

impl fmt::Display for SMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SMode::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::Config(format!("unknown s mode {s:?}; expected min, max or actual"))
            })
    }
}

/// One CSV row: costs at a single `(n, p, s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityRow {
    pub n: u32,
    pub p: u64,
    pub s_mode: SMode,
    pub s: BigUint,
    /// `n^n`.
    pub ip_cost: BigUint,
    /// `3^n`.
    pub idp_boss_cost: BigUint,
    /// `(2^n - 1)(2p + 1) + 3ps`.
    pub bilpq_gates: BigUint,
}

impl ComplexityRow {
    pub fn log10_ip(&self) -> f64 {
        log10(&self.ip_cost)
    }

    pub fn log10_idp(&self) -> f64 {
        log10(&self.idp_boss_cost)
    }

    pub fn log10_bilpq(&self) -> f64 {
        log10(&self.bilpq_gates)
    }

    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.p,
            self.s_mode,
            self.s,
            self.ip_cost,
            self.idp_boss_cost,
            self.bilpq_gates,
            format_sig17(self.log10_ip()),
            format_sig17(self.log10_idp()),
            format_sig17(self.log10_bilpq()),
        )
    }
}

// Every value here stays far below f64::MAX (64^64 is about 4e115).
fn log10(x: &BigUint) -> f64 {
    x.to_f64().expect("BigUint converts to f64").log10()
}

/// Rows for every `n` in `n_range` and every `p` in `p_list`, `n` outermost.
pub fn complexity_table(
    n_range: RangeInclusive<u32>,
    p_list: &[u64],
    s_mode: SMode,
) -> Result<Vec<ComplexityRow>> {
    let (lo, hi) = (*n_range.start(), *n_range.end());
    if lo < 2 || hi > MAX_ANALYSIS_AGENTS || lo > hi {
        return Err(Error::Range(format!(
            "agent range {lo}..={hi} is not within 2..={MAX_ANALYSIS_AGENTS}"
        )));
    }
    if p_list.is_empty() || p_list.contains(&0) {
        return Err(Error::Config(
            "layer counts must be a nonempty list of positive integers".into(),
        ));
    }
    let mut rows = Vec::with_capacity((hi - lo + 1) as usize * p_list.len());
    for n in n_range {
        let bounds = sparsity_bounds(n)?;
        let s = s_mode.pick(&bounds);
        let ip_cost = BigUint::from(n).pow(n);
        let idp_boss_cost = BigUint::from(3u8).pow(n);
        for &p in p_list {
            rows.push(ComplexityRow {
                n,
                p,
                s_mode,
                s: s.clone(),
                ip_cost: ip_cost.clone(),
                idp_boss_cost: idp_boss_cost.clone(),
                bilpq_gates: gate_count(n, p, s),
            });
        }
    }
    Ok(rows)
}

pub fn write_complexity_csv<W: Write>(rows: &[ComplexityRow], mut writer: W) -> Result<()> {
    writeln!(writer, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(writer, "{}", row.to_csv_line())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn small_bounds() {
        let b = sparsity_bounds(2).unwrap();
        assert_eq!((b.min, b.max, b.actual), (big(3), big(3), big(2)));
        let b = sparsity_bounds(3).unwrap();
        assert_eq!((b.min, b.max, b.actual), (big(7), big(21), big(15)));
        assert!(matches!(sparsity_bounds(1), Err(Error::Range(_))));
        assert!(matches!(sparsity_bounds(65), Err(Error::Range(_))));
    }

    #[test]
    fn actual_matches_pair_count() {
        for n in 2..=8u32 {
            let m = (1u32 << n) - 1;
            let mut count = 0u64;
            for a in 1..=m {
                for b in a + 1..=m {
                    if a & b != 0 {
                        count += 1;
                    }
                }
            }
            let bounds = sparsity_bounds(n).unwrap();
            assert_eq!(bounds.actual, big(count), "n={n}");
            assert!(bounds.actual <= bounds.max);
        }
    }

    #[test]
    fn crossover_neighbourhood_values() {
        let rows = complexity_table(6..=14, &[50], SMode::Min).unwrap();
        let at = |n: u32| rows.iter().find(|r| r.n == n).unwrap();
        assert_eq!(at(14).bilpq_gates, big(4_112_133));
        assert_eq!(at(14).idp_boss_cost, big(4_782_969));
        assert_eq!(at(13).bilpq_gates, big(2_055_941));
        assert_eq!(at(13).idp_boss_cost, big(1_594_323));
        assert_eq!(at(6).bilpq_gates, big(15_813));
        assert_eq!(at(6).ip_cost, big(46_656));
    }

    #[test]
    fn crossovers_over_full_range() {
        let rows = complexity_table(2..=64, &[50], SMode::Min).unwrap();
        for r in &rows {
            assert_eq!(r.bilpq_gates < r.idp_boss_cost, r.n >= 14, "n={}", r.n);
            if r.n >= 6 {
                assert!(r.bilpq_gates < r.ip_cost, "n={}", r.n);
            }
        }
    }

    #[test]
    fn min_below_max() {
        let lo = complexity_table(2..=64, &DEFAULT_P_LIST, SMode::Min).unwrap();
        let hi = complexity_table(2..=64, &DEFAULT_P_LIST, SMode::Max).unwrap();
        for (a, b) in lo.iter().zip(&hi) {
            assert!(a.bilpq_gates <= b.bilpq_gates);
        }
    }

    #[test]
    fn csv_layout() {
        let rows = complexity_table(2..=3, &[1, 10], SMode::Actual).unwrap();
        let mut buf = Vec::new();
        write_complexity_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("2,1,actual,2,4,9,15,"));
        assert!(lines[3].starts_with("3,1,actual,15,27,27,66,"));
        let log10_ip: f64 = lines[1].split(',').nth(7).unwrap().parse().unwrap();
        assert!((log10_ip - 4f64.log10()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(complexity_table(1..=5, &[1], SMode::Min).is_err());
        assert!(complexity_table(2..=65, &[1], SMode::Min).is_err());
        assert!(complexity_table(2..=5, &[], SMode::Min).is_err());
        assert!(complexity_table(2..=5, &[0], SMode::Min).is_err());
        assert_eq!("MAX".parse::<SMode>().unwrap(), SMode::Max);
        assert!("median".parse::<SMode>().is_err());
    }
}
