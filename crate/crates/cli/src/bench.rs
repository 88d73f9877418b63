use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use csg_core::game::generate_game;
use csg_core::solvers::{solve_dp, SolveReport};
use csg_core::{format_sig17, DistributionKind, Result};
use rayon::prelude::*;

use crate::args::dist_spec;
use crate::run::{solve, Method, SolveOptions};

pub const SUMMARY_HEADER: &str =
    "method,dist,n,seed,best_value,feasible,dp_value,optimal,wall_ms,error";

pub struct Grid {
    pub methods: Vec<Method>,
    pub dists: Vec<DistributionKind>,
    pub agents: std::ops::RangeInclusive<usize>,
    pub seeds: std::ops::Range<u64>,
    pub params: Vec<String>,
}

struct Cell {
    method: Method,
    dist: DistributionKind,
    n: usize,
    seed: u64,
}

impl Cell {
    fn file_name(&self) -> String {
        format!(
            "{}-{}-n{}-seed{}.json",
            self.method.name(),
            self.dist,
            self.n,
            self.seed
        )
    }
}

/// Runs every cell in parallel, writing one report file per cell as it
/// finishes, then `summary.csv` in grid order. Failed cells still get a
/// summary row; the first failure in grid order is returned afterwards.
pub fn run(grid: &Grid, opts: &SolveOptions, out: &Path) -> Result<usize> {
    fs::create_dir_all(out)?;
    let mut cells = Vec::new();
    for &method in &grid.methods {
        for &dist in &grid.dists {
            for n in grid.agents.clone() {
                for seed in grid.seeds.clone() {
                    cells.push(Cell {
                        method,
                        dist,
                        n,
                        seed,
                    });
                }
            }
        }
    }
    let outcomes: Vec<Result<(SolveReport, f64)>> = cells
        .par_iter()
        .map(|cell| {
            let game = generate_game(cell.n, &dist_spec(cell.dist, &grid.params)?, cell.seed)?;
            let opts = SolveOptions {
                seed: cell.seed,
                ..opts.clone()
            };
            let report = solve(cell.method, &game, &opts)?;
            let dp = solve_dp(&game)?.best_value;
            let text = serde_json::to_string_pretty(&report).expect("reports serialise");
            fs::write(out.join(cell.file_name()), text + "\n")?;
            Ok((report, dp))
        })
        .collect();

    let mut summary = format!("{SUMMARY_HEADER}\n");
    let mut first_error = None;
    for (cell, outcome) in cells.iter().zip(outcomes) {
        let prefix = format!(
            "{},{},{},{}",
            cell.method.name(),
            cell.dist,
            cell.n,
            cell.seed
        );
        match outcome {
            Ok((r, dp)) => {
                let optimal = r.feasible && (r.best_value - dp).abs() <= 1e-9 * dp.abs().max(1.0);
                let _ = writeln!(
                    summary,
                    "{prefix},{},{},{},{optimal},{},",
                    format_sig17(r.best_value),
                    r.feasible,
                    format_sig17(dp),
                    format_sig17(r.timing.wall_ms)
                );
            }
            Err(e) => {
                let _ = writeln!(summary, "{prefix},,,,,,{}", e.kind());
                first_error.get_or_insert(e);
            }
        }
    }
    fs::write(out.join("summary.csv"), summary)?;
    match first_error {
        Some(e) => Err(e),
        None => Ok(cells.len()),
    }
}
