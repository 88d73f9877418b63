use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::game::CoalitionStructure;

/// Outcome of one solver run.
///
/// Everything outside `timing` is a pure function of the inputs and seeds,
/// so two runs with the same configuration serialise identically once
/// `timing` is dropped.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub method: String,
    /// `None` only when a QUBO solver ends on an infeasible selection.
    pub best_cs: Option<CoalitionStructure>,
    /// Summed value of the selected coalitions; equals `cs_value` when
    /// feasible.
    pub best_value: f64,
    pub feasible: bool,
    /// Selected QUBO variables, character `k` is `x_k`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bitstring: Option<String>,
    /// QUBO energy of `bitstring`, constant included.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    pub metadata: BTreeMap<String, Value>,
    pub timing: Timing,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Timing {
    pub wall_ms: f64,
}

impl SolveReport {
    pub(crate) fn new(method: &str, best_cs: Option<CoalitionStructure>, best_value: f64) -> Self {
        SolveReport {
            method: method.to_string(),
            feasible: best_cs.is_some(),
            best_cs,
            best_value,
            bitstring: None,
            energy: None,
            metadata: BTreeMap::new(),
            timing: Timing::default(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    pub(crate) fn timed(mut self, start: std::time::Instant) -> Self {
        self.timing.wall_ms = start.elapsed().as_secs_f64() * 1e3;
        self
    }

    /// JSON form without the `timing` block.
    pub fn deterministic_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serialises");
        if let Value::Object(map) = &mut v {
            map.remove("timing");
        }
        v
    }
}
