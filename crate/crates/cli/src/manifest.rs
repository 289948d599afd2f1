use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{io_at, CliResult};

/// Wall-clock seconds per sweep phase.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Timings {
    pub eta: f64,
    pub edges: f64,
    pub gibbs: f64,
    pub hyper: f64,
    pub total: f64,
}

impl Timings {
    pub fn from_phases(p: &mnsbm::ensemble::PhaseTimings, total: std::time::Duration) -> Self {
        Timings {
            eta: p.eta.as_secs_f64(),
            edges: p.edges.as_secs_f64(),
            gibbs: p.gibbs.as_secs_f64(),
            hyper: p.hyper.as_secs_f64(),
            total: total.as_secs_f64(),
        }
    }
}

/// Everything needed to rerun a command: resolved parameters, inputs and
/// the software version. Only `timings` varies between identical runs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub parameters: BTreeMap<String, Value>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timings: Option<Timings>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            parameters: BTreeMap::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            timings: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.parameters
            .insert(key.to_string(), serde_json::to_value(value).expect("serialisable parameter"));
        self
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self)? + "\n";
        io_at(path, std::fs::write(path, text))
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = io_at(path, std::fs::read_to_string(path))?;
        Ok(serde_json::from_str(&text)?)
    }
}
