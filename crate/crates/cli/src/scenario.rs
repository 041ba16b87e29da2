//! Scenario documents.
//!
//! A scenario is a JSON object:
//!
//! ```json
//! {
//!   "markets": [{"a": 200}, {"a": 150}, {"a": 100}],
//!   "firms": [{"c": 20}, {"c": 40}],
//!   "d": 0.2,
//!   "simulation": {"T": 100, "mode": "raw", "initial": [[30, 20, 10], [25, 15, 5]],
//!                  "transient": 1000, "samples": 200}
//! }
//! ```
//!
//! `simulation` and each of its keys are optional. Unknown keys are errors.

use std::path::Path;

use cournot_core::model::{validate, GameConfig, IterateMode, Rule, StateVector};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MarketDoc {
    a: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FirmDoc {
    c: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulationDoc {
    #[serde(rename = "T")]
    steps: Option<usize>,
    mode: Option<String>,
    initial: Option<Vec<Vec<f64>>>,
    transient: Option<usize>,
    samples: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    markets: Vec<MarketDoc>,
    firms: Vec<FirmDoc>,
    d: f64,
    #[serde(default)]
    simulation: Option<SimulationDoc>,
}

/// Optional simulation settings carried by a scenario.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SimulationOptions {
    pub steps: Option<usize>,
    pub mode: Option<IterateMode>,
    pub initial: Option<StateVector>,
    pub transient: Option<usize>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: GameConfig,
    pub options: SimulationOptions,
    /// Soft validation flags; reported, never fatal.
    pub warnings: Vec<Rule>,
    /// SHA-256 of the document bytes, hex encoded.
    pub digest: String,
}

impl Scenario {
    /// Initial state from the document, or the game's default.
    pub fn initial_state(&self) -> StateVector {
        self.options.initial.clone().unwrap_or_else(|| self.config.default_initial_state())
    }
}

pub fn parse_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_scenario_str(&text, path)
}

/// Parses and validates a scenario document. `origin` only labels errors.
pub fn parse_scenario_str(text: &str, origin: &Path) -> Result<Scenario> {
    let doc: ScenarioDoc = serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: origin.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let intercepts: Vec<f64> = doc.markets.iter().map(|m| m.a).collect();
    let costs: Vec<f64> = doc.firms.iter().map(|f| f.c).collect();
    let report = validate(&intercepts, &costs, doc.d);
    if !report.is_valid() {
        return Err(CliError::Validation(report));
    }
    let config = GameConfig::new(intercepts, costs, doc.d)?;

    let sim = doc.simulation.unwrap_or_default();
    let mode = sim.mode.as_deref().map(str::parse::<IterateMode>).transpose()?;
    let initial = match sim.initial {
        None => None,
        Some(rows) => {
            let state = StateVector::from_rows(&rows)?;
            if state.firms() != config.firms() || state.markets() != config.markets() {
                return Err(CliError::Usage(format!(
                    "initial state is {}x{}, scenario has {} firms and {} markets",
                    state.firms(),
                    state.markets(),
                    config.firms(),
                    config.markets()
                )));
            }
            Some(state)
        }
    };
    if sim.steps == Some(0) {
        return Err(CliError::Usage("T must be >= 1".into()));
    }
    if sim.samples == Some(0) {
        return Err(CliError::Usage("samples must be >= 1".into()));
    }

    Ok(Scenario {
        warnings: report.soft_flags,
        config,
        options: SimulationOptions { steps: sim.steps, mode, initial, transient: sim.transient, samples: sim.samples },
        digest: hex::encode(Sha256::digest(text.as_bytes())),
    })
}
