use std::ops::RangeInclusive;

use clap::ValueEnum;
use csg_core::qaoa::{solve_qaoa, QaoaConfig};
use csg_core::solvers::{
    solve_dp, solve_enum, solve_qubo_exhaustive, solve_qubo_sa, AnnealSchedule, SolveReport,
};
use csg_core::transform::{build_bilp, build_qubo};
use csg_core::{Coalition, CoalitionGame, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Enum,
    Dp,
    QuboBrute,
    Sa,
    Qaoa,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Enum => "enum",
            Method::Dp => "dp",
            Method::QuboBrute => "qubo-brute",
            Method::Sa => "sa",
            Method::Qaoa => "qaoa",
        }
    }
}

/// Solver settings shared by `solve` and `bench`.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub lambda: Option<f64>,
    pub exclude: Vec<Coalition>,
    pub seed: u64,
    pub depths: RangeInclusive<usize>,
    pub shots: usize,
    pub sweeps: Option<usize>,
    pub restarts: Option<usize>,
}

pub fn solve(method: Method, game: &CoalitionGame, opts: &SolveOptions) -> Result<SolveReport> {
    match method {
        Method::Enum | Method::Dp => {
            if !opts.exclude.is_empty() {
                return Err(Error::Config(format!(
                    "method {} does not support coalition exclusions",
                    method.name()
                )));
            }
            if method == Method::Enum {
                solve_enum(game)
            } else {
                solve_dp(game)
            }
        }
        Method::QuboBrute | Method::Sa | Method::Qaoa => {
            let bilp = build_bilp(game, &opts.exclude)?;
            let qubo = build_qubo(&bilp, opts.lambda)?;
            match method {
                Method::QuboBrute => solve_qubo_exhaustive(&qubo, &bilp),
                Method::Sa => {
                    let mut sched = AnnealSchedule::defaults(&bilp, opts.seed);
                    if let Some(s) = opts.sweeps {
                        sched.sweeps = s;
                    }
                    if let Some(r) = opts.restarts {
                        sched.restarts = r;
                    }
                    solve_qubo_sa(&qubo, &bilp, &sched)
                }
                _ => {
                    let config = QaoaConfig {
                        shots: opts.shots,
                        ..QaoaConfig::default()
                    };
                    solve_qaoa(&qubo, &bilp, opts.depths.clone(), &config, opts.seed)
                }
            }
        }
    }
}
