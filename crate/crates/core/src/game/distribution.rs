//! Benchmark value distributions for coalition games.
//!
//! Every generator draws from a `ChaCha8Rng` seeded with `seed_from_u64`, a
//! portable stream cipher generator, so games are reproducible across
//! platforms. Per-agent draws (ABU and ABN only) come first, in agent order;
//! per-coalition draws then consume the stream in coalition-index order.
//!
//! The shapes and default parameters below are this crate's conventions.
//! `N(mu, sd)` takes a standard deviation.
//!
//! | kind     | v(C)                                                              |
//! |----------|-------------------------------------------------------------------|
//! | ABU      | sum over i in C of (p_i + a_iC), p_i ~ U(0,10), a_iC ~ U(0,10)     |
//! | ABN      | same with p_i ~ N(10, 0.01), a_iC ~ N(0, 0.01)                    |
//! | MU       | U(0, 10 |C|), plus U(0, 50) with probability 0.2                  |
//! | Normal   | N(10 |C|, 0.01)                                                   |
//! | SVA_Beta | 10 Beta(2, 5) (|C| + 9 [a1 in C])                                 |
//! | Weibull  | Weibull(shape = |C|, scale = 10)                                  |
//! | Rayleigh | Rayleigh(scale = 10 sqrt|C|)                                      |
//! | WRC      | U(0,1) |C| + ChiSquare(4)                                        |
//! | F        | F(5, 2) |C|, redrawing any F draw above 1000                       |
//! | Laplace  | Laplace(10 |C|, sqrt 0.1)                                         |

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, ChiSquared, Distribution, FisherF, Normal, Weibull};
use serde::{Deserialize, Serialize};

use super::{coalition_count, Coalition, CoalitionGame, MAX_AGENTS};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DistributionKind {
    #[serde(rename = "ABU")]
    Abu,
    #[serde(rename = "ABN")]
    Abn,
    #[serde(rename = "MU")]
    Mu,
    Normal,
    #[serde(rename = "SVA_Beta")]
    SvaBeta,
    Weibull,
    Rayleigh,
    #[serde(rename = "WRC")]
    Wrc,
    F,
    Laplace,
}

impl DistributionKind {
    pub const ALL: [DistributionKind; 10] = [
        DistributionKind::Abu,
        DistributionKind::Abn,
        DistributionKind::Mu,
        DistributionKind::Normal,
        DistributionKind::SvaBeta,
        DistributionKind::Weibull,
        DistributionKind::Rayleigh,
        DistributionKind::Wrc,
        DistributionKind::F,
        DistributionKind::Laplace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DistributionKind::Abu => "ABU",
            DistributionKind::Abn => "ABN",
            DistributionKind::Mu => "MU",
            DistributionKind::Normal => "Normal",
            DistributionKind::SvaBeta => "SVA_Beta",
            DistributionKind::Weibull => "Weibull",
            DistributionKind::Rayleigh => "Rayleigh",
            DistributionKind::Wrc => "WRC",
            DistributionKind::F => "F",
            DistributionKind::Laplace => "Laplace",
        }
    }

    /// Parameter names and their defaults.
    pub fn default_params(self) -> &'static [(&'static str, f64)] {
        match self {
            DistributionKind::Abu => &[("agent_hi", 10.0), ("noise_hi", 10.0)],
            DistributionKind::Abn => {
                &[("agent_mean", 10.0), ("agent_sd", 0.01), ("noise_sd", 0.01)]
            }
            DistributionKind::Mu => &[("scale", 10.0), ("bonus_prob", 0.2), ("bonus_hi", 50.0)],
            DistributionKind::Normal => &[("mean_per_agent", 10.0), ("sd", 0.01)],
            DistributionKind::SvaBeta => &[
                ("scale", 10.0),
                ("alpha", 2.0),
                ("beta", 5.0),
                ("bonus", 9.0),
            ],
            DistributionKind::Weibull => &[("scale", 10.0)],
            DistributionKind::Rayleigh => &[("scale_per_root", 10.0)],
            DistributionKind::Wrc => &[("chi_df", 4.0)],
            DistributionKind::F => &[("d1", 5.0), ("d2", 2.0), ("cap", 1000.0)],
            DistributionKind::Laplace => &[("loc_per_agent", 10.0), ("scale", LAPLACE_SCALE)],
        }
    }
}

impl fmt::Display for DistributionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistributionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        let kind = match key.as_str() {
            "abu" => DistributionKind::Abu,
            "abn" => DistributionKind::Abn,
            "mu" => DistributionKind::Mu,
            "normal" | "n" => DistributionKind::Normal,
            "svabeta" | "sva" => DistributionKind::SvaBeta,
            "weibull" | "w" => DistributionKind::Weibull,
            "rayleigh" | "r" => DistributionKind::Rayleigh,
            "wrc" => DistributionKind::Wrc,
            "f" => DistributionKind::F,
            "laplace" | "lap" => DistributionKind::Laplace,
            _ => return Err(Error::Config(format!("unknown distribution `{s}`"))),
        };
        Ok(kind)
    }
}

/// A distribution kind plus parameter overrides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistributionSpec {
    pub kind: DistributionKind,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl DistributionSpec {
    pub fn new(kind: DistributionKind) -> Self {
        DistributionSpec {
            kind,
            params: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    /// Overrides merged over the defaults, after validation.
    pub fn resolved(&self) -> Result<BTreeMap<&'static str, f64>> {
        let defaults = self.kind.default_params();
        for (name, value) in &self.params {
            if !defaults.iter().any(|(d, _)| d == name) {
                return Err(Error::Config(format!(
                    "{} has no parameter `{name}`",
                    self.kind
                )));
            }
            if !value.is_finite() {
                return Err(Error::Config(format!("parameter `{name}` is not finite")));
            }
        }
        Ok(defaults
            .iter()
            .map(|&(name, default)| (name, self.params.get(name).copied().unwrap_or(default)))
            .collect())
    }
}

impl From<DistributionKind> for DistributionSpec {
    fn from(kind: DistributionKind) -> Self {
        DistributionSpec::new(kind)
    }
}

/// sqrt(0.1)
const LAPLACE_SCALE: f64 = 0.316_227_766_016_837_94;

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

fn nonnegative(params: &BTreeMap<&'static str, f64>, name: &str) -> Result<f64> {
    let v = params[name];
    if v < 0.0 {
        return Err(Error::Config(format!(
            "parameter `{name}` must be nonnegative, got {v}"
        )));
    }
    Ok(v)
}

fn config<E: fmt::Display>(what: &str) -> impl FnOnce(E) -> Error + '_ {
    move |e| Error::Config(format!("{what}: {e}"))
}

/// Draws a game of `n` agents. Pure in `(n, spec, seed)`.
pub fn generate_game(n: usize, spec: &DistributionSpec, seed: u64) -> Result<CoalitionGame> {
    if n == 0 {
        return Err(Error::Range("a game needs at least one agent".into()));
    }
    if n > MAX_AGENTS {
        return Err(Error::ResourceLimit(format!(
            "{n} agents exceeds the supported maximum of {MAX_AGENTS}"
        )));
    }
    let p = spec.resolved()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coalitions = (1..=coalition_count(n) as u32).map(Coalition);
    let mut values = Vec::with_capacity(coalition_count(n));

    match spec.kind {
        DistributionKind::Abu => {
            let agent: Vec<f64> = (0..n)
                .map(|_| uniform(&mut rng, 0.0, p["agent_hi"]))
                .collect();
            for c in coalitions {
                let v = c
                    .members()
                    .iter()
                    .map(|&a| agent[a - 1] + uniform(&mut rng, 0.0, p["noise_hi"]))
                    .sum();
                values.push(v);
            }
        }
        DistributionKind::Abn => {
            let agent_dist = Normal::new(p["agent_mean"], nonnegative(&p, "agent_sd")?)
                .map_err(config("ABN agent"))?;
            let noise =
                Normal::new(0.0, nonnegative(&p, "noise_sd")?).map_err(config("ABN noise"))?;
            let agent: Vec<f64> = (0..n).map(|_| agent_dist.sample(&mut rng)).collect();
            for c in coalitions {
                let v = c
                    .members()
                    .iter()
                    .map(|&a| agent[a - 1] + noise.sample(&mut rng))
                    .sum();
                values.push(v);
            }
        }
        DistributionKind::Mu => {
            for c in coalitions {
                let mut v = uniform(&mut rng, 0.0, p["scale"] * c.size() as f64);
                if rng.random::<f64>() < p["bonus_prob"] {
                    v += uniform(&mut rng, 0.0, p["bonus_hi"]);
                }
                values.push(v);
            }
        }
        DistributionKind::Normal => {
            nonnegative(&p, "sd")?;
            for c in coalitions {
                let d = Normal::new(p["mean_per_agent"] * c.size() as f64, p["sd"])
                    .map_err(config("Normal"))?;
                values.push(d.sample(&mut rng));
            }
        }
        DistributionKind::SvaBeta => {
            let beta = Beta::new(p["alpha"], p["beta"]).map_err(config("SVA_Beta"))?;
            for c in coalitions {
                let weight = c.size() as f64 + if c.contains(1) { p["bonus"] } else { 0.0 };
                values.push(p["scale"] * beta.sample(&mut rng) * weight);
            }
        }
        DistributionKind::Weibull => {
            for c in coalitions {
                let d = Weibull::new(p["scale"], c.size() as f64).map_err(config("Weibull"))?;
                values.push(d.sample(&mut rng));
            }
        }
        DistributionKind::Rayleigh => {
            for c in coalitions {
                let sigma = p["scale_per_root"] * (c.size() as f64).sqrt();
                if sigma <= 0.0 {
                    return Err(Error::Config("Rayleigh scale must be positive".into()));
                }
                let u: f64 = rng.random();
                values.push(sigma * (-2.0 * (1.0 - u).ln()).sqrt());
            }
        }
        DistributionKind::Wrc => {
            let chi = ChiSquared::new(p["chi_df"]).map_err(config("WRC"))?;
            for c in coalitions {
                let weight: f64 = rng.random();
                values.push(weight * c.size() as f64 + chi.sample(&mut rng));
            }
        }
        DistributionKind::F => {
            let fisher = FisherF::new(p["d1"], p["d2"]).map_err(config("F"))?;
            let cap = p["cap"];
            if cap <= 0.0 {
                return Err(Error::Config("F cap must be positive".into()));
            }
            for c in coalitions {
                let draw = loop {
                    let x = fisher.sample(&mut rng);
                    if x <= cap {
                        break x;
                    }
                };
                values.push(draw * c.size() as f64);
            }
        }
        DistributionKind::Laplace => {
            let scale = p["scale"];
            if scale <= 0.0 {
                return Err(Error::Config("Laplace scale must be positive".into()));
            }
            for c in coalitions {
                let loc = p["loc_per_agent"] * c.size() as f64;
                // Inverse CDF on u in (-1/2, 1/2).
                let u = rng.random::<f64>() - 0.5;
                let tail = (1.0 - 2.0 * u.abs()).max(f64::MIN_POSITIVE);
                values.push(loc - scale * u.signum() * tail.ln());
            }
        }
    }

    CoalitionGame::new(n, values)
        .map(|g| g.with_provenance(Some(spec.kind.name().to_string()), Some(seed)))
}
