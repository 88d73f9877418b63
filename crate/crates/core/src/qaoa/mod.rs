//! Gate-level QAOA on the Ising form of a QUBO.
//!
//! [`build_circuit`] lays out the gates, [`simulate`] runs them on a dense
//! state vector, and [`optimize`] searches the `2p` angles with multi-start
//! Nelder-Mead. [`scan_layers`] raises `p` until a sampled bitstring hits the
//! ground energy.

mod circuit;
mod nelder_mead;
mod statevector;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ops::RangeInclusive;
use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

pub use circuit::{build_circuit, CircuitDescription, Gate, GateTally, MAX_QUBITS};
pub use nelder_mead::{minimize, NelderMeadOptions, NelderMeadResult};
pub use statevector::{expectation, expectation_from_table, sample, simulate, StateVector};

use crate::error::{Error, Result};
use crate::solvers::{SolveReport, Timing, TIE_TOLERANCE};
use crate::transform::{
    bits_from_mask, decode_solution, qubo_to_ising, BilpInstance, IsingInstance, QuboInstance,
};

/// Mixer angles `betas` and cost angles `gammas`, one of each per layer.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QaoaParams {
    pub betas: Vec<f64>,
    pub gammas: Vec<f64>,
}

impl QaoaParams {
    pub fn new(betas: Vec<f64>, gammas: Vec<f64>) -> Result<Self> {
        let params = QaoaParams { betas, gammas };
        params.validate()?;
        Ok(params)
    }

    pub fn p(&self) -> usize {
        self.betas.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.betas.is_empty() || self.betas.len() != self.gammas.len() {
            return Err(Error::Config(format!(
                "need equally many betas and gammas, at least one each (got {} and {})",
                self.betas.len(),
                self.gammas.len()
            )));
        }
        if self
            .betas
            .iter()
            .chain(&self.gammas)
            .any(|a| !a.is_finite())
        {
            return Err(Error::Config("QAOA angles must be finite".into()));
        }
        Ok(())
    }

    fn from_flat(x: &[f64]) -> Self {
        let p = x.len() / 2;
        QaoaParams {
            betas: x[..p].to_vec(),
            gammas: x[p..].to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QaoaConfig {
    /// Random starting points, betas in `[0, pi)` and gammas in `[0, 2 pi)`.
    pub starts: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub shots: usize,
    /// Edge length of the initial Nelder-Mead simplex.
    pub initial_step: f64,
    /// When nonzero, a `p = 1` grid with step `pi / grid_resolution` is
    /// scanned first and its argmin, padded with zero-angle layers, becomes
    /// one extra start.
    pub grid_resolution: usize,
}

impl Default for QaoaConfig {
    fn default() -> Self {
        QaoaConfig {
            starts: 10,
            max_iter: 500,
            tol: 1e-8,
            shots: 1024,
            initial_step: 0.2,
            grid_resolution: 60,
        }
    }
}

impl QaoaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 || self.max_iter == 0 || self.shots == 0 {
            return Err(Error::Config(
                "QAOA starts, max_iter and shots must all be positive".into(),
            ));
        }
        if !(self.tol > 0.0 && self.tol.is_finite())
            || !(self.initial_step > 0.0 && self.initial_step.is_finite())
        {
            return Err(Error::Config(
                "QAOA tol and initial_step must be positive and finite".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TracePoint {
    pub iteration: usize,
    pub value: f64,
    pub params: QaoaParams,
}

/// Outcome of [`optimize`] at a fixed depth.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QaoaResult {
    pub p: usize,
    pub params: QaoaParams,
    /// `<E>` at `params`, Ising offset excluded.
    pub expectation: f64,
    pub counts: BTreeMap<String, u64>,
    /// Lowest-energy bitstring among the shots; ties go to the smaller basis
    /// index.
    pub best_bitstring: String,
    pub best_energy: f64,
    /// Best value after each Nelder-Mead iteration of the winning start.
    pub optimizer_trace: Vec<TracePoint>,
    pub metadata: BTreeMap<String, Value>,
    pub timing: Timing,
}

impl QaoaResult {
    /// The serialised result without `timing`.
    pub fn deterministic_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("QaoaResult serialises");
        if let Value::Object(map) = &mut v {
            map.remove("timing");
        }
        v
    }

    fn best_basis(&self) -> usize {
        statevector::basis_from_label(&self.best_bitstring)
    }
}

/// Optimizes a depth-`p` circuit for `ising`, then samples the final state.
///
/// Starting points come from `ChaCha8Rng::seed_from_u64(seed)`, plus the
/// grid start when `grid_resolution` is nonzero (it runs last); the starts
/// run in parallel and the best final value wins, ties going to the lower
/// start index. A start that hits `max_iter` is counted in
/// `metadata.unconverged_starts`.
pub fn optimize(
    ising: &IsingInstance,
    p: usize,
    config: &QaoaConfig,
    seed: u64,
) -> Result<QaoaResult> {
    let clock = Instant::now();
    config.validate()?;
    if p == 0 {
        return Err(Error::Config("QAOA needs at least one layer".into()));
    }
    let m = ising.len();
    // Surfaces the qubit ceiling before any work.
    let probe = build_circuit(ising, &QaoaParams::new(vec![0.0; p], vec![0.0; p])?)?;
    let energies = ising.energy_table();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<Vec<f64>> = (0..config.starts)
        .map(|_| {
            let mut x: Vec<f64> = (0..p).map(|_| rng.random::<f64>() * PI).collect();
            x.extend((0..p).map(|_| rng.random::<f64>() * 2.0 * PI));
            x
        })
        .collect();
    let shot_seed: u64 = rng.random();

    let objective = |x: &[f64]| -> f64 {
        let params = QaoaParams::from_flat(x);
        let circuit = build_circuit(ising, &params).expect("validated above");
        expectation_from_table(&simulate(&circuit), &energies).expect("table matches register")
    };
    let grid =
        (config.grid_resolution > 0).then(|| grid_search(&objective, config.grid_resolution));
    let mut starts = starts;
    if let Some((beta, gamma, _)) = grid {
        let mut x = vec![0.0; 2 * p];
        x[0] = beta;
        x[p] = gamma;
        starts.push(x);
    }
    let opts = NelderMeadOptions {
        max_iter: config.max_iter,
        tol: config.tol,
        initial_step: config.initial_step,
    };
    let runs: Vec<NelderMeadResult> = starts
        .par_iter()
        .map(|x0| minimize(objective, x0, opts))
        .collect();

    let (winner, best) = runs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.f.total_cmp(&b.1.f).then(a.0.cmp(&b.0)))
        .expect("at least one start");
    let params = QaoaParams::from_flat(&best.x);
    let state = simulate(&build_circuit(ising, &params)?);
    let value = expectation_from_table(&state, &energies)?;
    let counts = sample(&state, config.shots, shot_seed)?;
    let (best_bitstring, best_energy) = counts
        .keys()
        .map(|label| (label, energies[statevector::basis_from_label(label)]))
        .min_by(|a, b| {
            a.1.total_cmp(&b.1)
                .then(statevector::basis_from_label(a.0).cmp(&statevector::basis_from_label(b.0)))
        })
        .map(|(l, e)| (l.clone(), e))
        .expect("at least one shot");

    let optimizer_trace = best
        .trace
        .iter()
        .enumerate()
        .map(|(iteration, (x, value))| TracePoint {
            iteration,
            value: *value,
            params: QaoaParams::from_flat(x),
        })
        .collect();
    let unconverged = runs.iter().filter(|r| !r.converged).count();
    let tally = probe.tally();
    let mut metadata = BTreeMap::from([
        ("seed".to_string(), json!(seed)),
        ("qubits".to_string(), json!(m)),
        ("interactions".to_string(), json!(ising.couplings().len())),
        ("gate_count".to_string(), json!(tally.total())),
        ("gates".to_string(), json!(tally)),
        ("starts".to_string(), json!(config.starts)),
        ("shots".to_string(), json!(config.shots)),
        ("winning_start".to_string(), json!(winner)),
        ("iterations".to_string(), json!(best.iterations)),
        (
            "evaluations".to_string(),
            json!(runs.iter().map(|r| r.evaluations).sum::<usize>()),
        ),
        ("converged".to_string(), json!(best.converged)),
        ("unconverged_starts".to_string(), json!(unconverged)),
        ("ising_offset".to_string(), json!(ising.offset())),
    ]);
    if let Some((beta, gamma, value)) = grid {
        metadata.insert(
            "grid_start".to_string(),
            json!({ "beta": beta, "gamma": gamma, "value": value, "resolution": config.grid_resolution }),
        );
    }

    Ok(QaoaResult {
        p,
        params,
        expectation: value,
        counts,
        best_bitstring,
        best_energy,
        optimizer_trace,
        metadata,
        timing: Timing {
            wall_ms: clock.elapsed().as_secs_f64() * 1e3,
        },
    })
}

/// Minimum of a `p = 1` objective over `beta = a pi / r`, `a < r`, and
/// `gamma = b pi / r`, `b < 2r`. Ties keep the earliest point in row order.
fn grid_search(objective: &(impl Fn(&[f64]) -> f64 + Sync), r: usize) -> (f64, f64, f64) {
    let step = PI / r as f64;
    (0..r)
        .into_par_iter()
        .map(|a| {
            (0..2 * r)
                .map(|b| {
                    let (beta, gamma) = (a as f64 * step, b as f64 * step);
                    (beta, gamma, objective(&[beta, gamma]))
                })
                .fold((0.0, 0.0, f64::INFINITY), |best, c| {
                    if c.2 < best.2 {
                        c
                    } else {
                        best
                    }
                })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0.0, 0.0, f64::INFINITY), |best, c| {
            if c.2 < best.2 {
                c
            } else {
                best
            }
        })
}

/// Outcome of [`scan_layers`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LayerScan {
    /// Lowest energy over all `2^m` basis states.
    pub ground_energy: f64,
    /// Smallest depth whose best sample reaches `ground_energy`.
    pub chosen_p: Option<usize>,
    pub results: Vec<QaoaResult>,
}

impl LayerScan {
    /// The result at `chosen_p`, or the deepest one tried.
    pub fn selected(&self) -> &QaoaResult {
        self.results.last().expect("scan runs at least one depth")
    }

    /// Basis index of the selected result's best sample.
    pub fn selected_basis(&self) -> usize {
        self.selected().best_basis()
    }
}

/// Runs [`optimize`] at each depth in `depths` with the same `seed`,
/// stopping at the first depth whose best sample is a ground state.
pub fn scan_layers(
    ising: &IsingInstance,
    depths: RangeInclusive<usize>,
    config: &QaoaConfig,
    seed: u64,
) -> Result<LayerScan> {
    if *depths.start() == 0 || depths.is_empty() {
        return Err(Error::Config(format!(
            "depth range {}..={} must be nonempty and start at 1 or more",
            depths.start(),
            depths.end()
        )));
    }
    if ising.len() > MAX_QUBITS {
        return Err(Error::ResourceLimit(format!(
            "{} qubits exceeds the simulator limit of {MAX_QUBITS}",
            ising.len()
        )));
    }
    let ground_energy = ising
        .energy_table()
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let scale = ground_energy.abs().max(1.0);
    let mut results = Vec::new();
    for p in depths {
        let r = optimize(ising, p, config, seed)?;
        let hit = r.best_energy <= ground_energy + TIE_TOLERANCE * scale;
        results.push(r);
        if hit {
            return Ok(LayerScan {
                ground_energy,
                chosen_p: Some(p),
                results,
            });
        }
    }
    Ok(LayerScan {
        ground_energy,
        chosen_p: None,
        results,
    })
}

/// Game-level QAOA: converts `qubo` to Ising form, runs [`scan_layers`] and
/// decodes the selected depth's best sample.
///
/// `metadata.chosen_p` is `null` when no depth in `depths` sampled a ground
/// state; the deepest run is reported then.
pub fn solve_qaoa(
    qubo: &QuboInstance,
    bilp: &BilpInstance,
    depths: RangeInclusive<usize>,
    config: &QaoaConfig,
    seed: u64,
) -> Result<SolveReport> {
    if qubo.len() != bilp.len() {
        return Err(Error::Dimension {
            expected: bilp.len(),
            actual: qubo.len(),
        });
    }
    let clock = Instant::now();
    let ising = qubo_to_ising(qubo);
    let scan = scan_layers(&ising, depths.clone(), config, seed)?;
    let selected = scan.selected();
    let x = bits_from_mask(scan.selected_basis() as u64, qubo.len());
    let decoded = decode_solution(&x, bilp);
    let value: f64 = bilp
        .values()
        .iter()
        .zip(&x)
        .filter(|(_, &b)| b)
        .map(|(v, _)| v)
        .sum();
    let layers: Vec<Value> = scan
        .results
        .iter()
        .map(|r| {
            json!({
                "p": r.p,
                "expectation": r.expectation,
                "best_energy": r.best_energy,
                "converged": r.metadata["converged"],
            })
        })
        .collect();
    let mut report = SolveReport::new("qaoa", decoded.cs, value)
        .with_meta("seed", seed)
        .with_meta("p_min", *depths.start())
        .with_meta("p_max", *depths.end())
        .with_meta("chosen_p", json!(scan.chosen_p))
        .with_meta("ground_energy", scan.ground_energy)
        .with_meta("layers", layers)
        .with_meta("result", selected.deterministic_json());
    if let Some(lambda) = qubo.lambda() {
        report = report.with_meta("lambda", lambda);
    }
    report.bitstring = Some(selected.best_bitstring.clone());
    report.energy = Some(selected.best_energy + ising.offset() + qubo.constant());
    Ok(report.timed(clock))
}

/// Gates in a depth-`p` circuit on `2^n - 1` qubits with `s` interactions:
/// `(2^n - 1)(2p + 1) + 3ps`.
pub fn gate_count(n: u32, p: u64, s: &BigUint) -> BigUint {
    let m = (BigUint::from(1u8) << n) - 1u8;
    let p = BigUint::from(p);
    m * (&p * 2u8 + 1u8) + p * 3u8 * s
}
