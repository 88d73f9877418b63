use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{tied, SolveReport};
use crate::error::{Error, Result};
use crate::transform::{decode_solution, format_bits, qubo_energy, BilpInstance, QuboInstance};

/// Geometric cooling from `temp_hi` to `temp_lo` over `sweeps` sweeps,
/// repeated `restarts` times. Restart `r` draws from
/// `ChaCha8Rng::seed_from_u64(seed + r)`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct AnnealSchedule {
    pub sweeps: usize,
    pub temp_hi: f64,
    pub temp_lo: f64,
    pub restarts: usize,
    pub seed: u64,
}

impl AnnealSchedule {
    /// `temp_hi = 2 sum |v_j|` (at least 1), `temp_lo = temp_hi / 100`,
    /// `100 m` sweeps, 10 restarts.
    ///
    /// Leaving a feasible state costs at least `lambda - sum |v_j|`, about
    /// `temp_hi / 2` under the default penalty, so below `temp_hi / 100` the
    /// chain is frozen in one coalition structure and further cooling only
    /// burns sweeps.
    pub fn defaults(bilp: &BilpInstance, seed: u64) -> Self {
        let spread: f64 = bilp.values().iter().map(|v| v.abs()).sum();
        let temp_hi = (2.0 * spread).max(1.0);
        AnnealSchedule {
            sweeps: 100 * bilp.len().max(1),
            temp_hi,
            temp_lo: temp_hi / 100.0,
            restarts: 10,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweeps == 0 || self.restarts == 0 {
            return Err(Error::Config(
                "sweeps and restarts must be at least 1".into(),
            ));
        }
        if !(self.temp_lo > 0.0 && self.temp_hi > self.temp_lo && self.temp_hi.is_finite()) {
            return Err(Error::Config(format!(
                "need temp_hi > temp_lo > 0, got {} and {}",
                self.temp_hi, self.temp_lo
            )));
        }
        Ok(())
    }

    fn temperature(&self, sweep: usize) -> f64 {
        if self.sweeps == 1 {
            return self.temp_lo;
        }
        let frac = sweep as f64 / (self.sweeps - 1) as f64;
        self.temp_hi * (self.temp_lo / self.temp_hi).powf(frac)
    }
}

/// Raw annealing result, before decoding.
#[derive(Clone, Debug)]
pub struct AnnealOutcome {
    pub best: Vec<bool>,
    /// QUBO energy of `best`, constant excluded.
    pub best_energy: f64,
    pub best_restart: usize,
    /// Best-seen energy at the end of every sweep, one series per restart.
    pub traces: Vec<Vec<f64>>,
    pub flips_accepted: u64,
}

struct RestartResult {
    best: Vec<bool>,
    best_energy: f64,
    trace: Vec<f64>,
    accepted: u64,
}

/// Single-flip Metropolis annealing with incremental energy updates.
pub fn anneal(qubo: &QuboInstance, sched: &AnnealSchedule) -> Result<AnnealOutcome> {
    sched.validate()?;
    let adj = qubo.adjacency();
    let runs: Vec<RestartResult> = (0..sched.restarts)
        .into_par_iter()
        .map(|r| anneal_once(qubo, &adj, sched, sched.seed.wrapping_add(r as u64)))
        .collect();

    // Restarts are merged in index order so the winner does not depend on
    // thread scheduling.
    let mut best_restart = 0;
    for (r, run) in runs.iter().enumerate().skip(1) {
        let incumbent = &runs[best_restart];
        if run.best_energy < incumbent.best_energy && !tied(run.best_energy, incumbent.best_energy)
        {
            best_restart = r;
        }
    }
    let flips_accepted = runs.iter().map(|r| r.accepted).sum();
    let best = runs[best_restart].best.clone();
    let best_energy = qubo_energy(qubo, &best)?;
    Ok(AnnealOutcome {
        best,
        best_energy,
        best_restart,
        traces: runs.into_iter().map(|r| r.trace).collect(),
        flips_accepted,
    })
}

fn anneal_once(
    qubo: &QuboInstance,
    adj: &[Vec<(usize, f64)>],
    sched: &AnnealSchedule,
    seed: u64,
) -> RestartResult {
    let m = qubo.len();
    let diag = qubo.diag();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<bool> = (0..m).map(|_| rng.random::<bool>()).collect();
    // local[k] = sum_j q_kj x_j
    let mut local = vec![0.0f64; m];
    for (k, neighbours) in adj.iter().enumerate() {
        local[k] = neighbours
            .iter()
            .filter(|&&(j, _)| x[j])
            .map(|&(_, q)| q)
            .sum();
    }
    let mut energy = qubo_energy(qubo, &x).expect("state has m entries");
    let mut best = x.clone();
    let mut best_energy = energy;
    let mut trace = Vec::with_capacity(sched.sweeps);
    let mut accepted = 0u64;

    for sweep in 0..sched.sweeps {
        let temp = sched.temperature(sweep);
        for k in 0..m {
            let gain = diag[k] + local[k];
            let delta = if x[k] { -gain } else { gain };
            if delta <= 0.0 || rng.random::<f64>() < (-delta / temp).exp() {
                let sign = if x[k] { -1.0 } else { 1.0 };
                x[k] = !x[k];
                for &(j, q) in &adj[k] {
                    local[j] += sign * q;
                }
                energy += delta;
                accepted += 1;
                if energy < best_energy {
                    best_energy = energy;
                    best.copy_from_slice(&x);
                }
            }
        }
        trace.push(best_energy);
    }
    RestartResult {
        best,
        best_energy,
        trace,
        accepted,
    }
}

/// Anneals `qubo` and decodes the best state seen through `bilp`.
pub fn solve_qubo_sa(
    qubo: &QuboInstance,
    bilp: &BilpInstance,
    sched: &AnnealSchedule,
) -> Result<SolveReport> {
    if qubo.len() != bilp.len() {
        return Err(Error::Dimension {
            expected: bilp.len(),
            actual: qubo.len(),
        });
    }
    let start = Instant::now();
    let outcome = anneal(qubo, sched)?;
    let decoded = decode_solution(&outcome.best, bilp);
    let value: f64 = bilp
        .values()
        .iter()
        .zip(&outcome.best)
        .filter(|(_, &b)| b)
        .map(|(v, _)| v)
        .sum();
    let mut report = SolveReport::new("sa", decoded.cs, value)
        .with_meta("seed", sched.seed)
        .with_meta("sweeps", sched.sweeps)
        .with_meta("restarts", sched.restarts)
        .with_meta("temp_hi", sched.temp_hi)
        .with_meta("temp_lo", sched.temp_lo)
        .with_meta("best_restart", outcome.best_restart)
        .with_meta("flips_accepted", outcome.flips_accepted)
        .with_meta(
            "iterations",
            (sched.sweeps * sched.restarts * qubo.len()) as u64,
        );
    if let Some(lambda) = qubo.lambda() {
        report = report.with_meta("lambda", lambda);
    }
    report.bitstring = Some(format_bits(&outcome.best));
    report.energy = Some(outcome.best_energy + qubo.constant());
    Ok(report.timed(start))
}
