use std::ops::RangeInclusive;

use csg_core::{Coalition, DistributionKind, DistributionSpec, Error, Result};

/// `N` or `A..B` (inclusive).
pub fn parse_range(s: &str) -> Result<RangeInclusive<usize>> {
    let bad = || Error::Config(format!("expected N or A..B, got {s:?}"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

/// `all` or a comma-separated list of distribution names.
pub fn parse_dists(s: &str) -> Result<Vec<DistributionKind>> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(DistributionKind::ALL.to_vec());
    }
    s.split(',').map(str::parse).collect()
}

/// `key=value` parameter overrides applied to `kind`'s defaults.
pub fn dist_spec(kind: DistributionKind, params: &[String]) -> Result<DistributionSpec> {
    let mut spec = DistributionSpec::new(kind);
    for p in params {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got {p:?}")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("parameter {k:?} is not a number: {v:?}")))?;
        spec = spec.with_param(k.trim(), v);
    }
    spec.resolved()?;
    Ok(spec)
}

/// Coalition indices, comma-separated.
pub fn parse_exclusions(items: &[String]) -> Result<Vec<Coalition>> {
    items
        .iter()
        .flat_map(|s| s.split(','))
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<u32>()
                .map(Coalition)
                .map_err(|_| Error::Config(format!("coalition index expected, got {s:?}")))
        })
        .collect()
}
