// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Experiment configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Basic,
    Warmup,
    General,
    Dynamic,
    Greedy,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Basic => "basic",
            Algorithm::Warmup => "warmup",
            Algorithm::General => "general",
            Algorithm::Dynamic => "dynamic",
            Algorithm::Greedy => "greedy",
        }
    }
}

/// Where each seed's input comes from. Generated instances draw from the run
/// seed, so every algorithm sees the same input for the same seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceSource {
    /// Edge list, or update stream for `dynamic`. With `shuffle` the edges
    /// arrive in a seeded random order instead of file order.
    File {
        path: PathBuf,
        #[serde(default)]
        shuffle: bool,
    },
    NearRegular {
        n: usize,
        delta: usize,
        #[serde(default)]
        slack: f64,
    },
    BoundedDegree {
        n: usize,
        lo: usize,
        hi: usize,
        #[serde(default)]
        slack: f64,
    },
    Updates {
        n: usize,
        delta: usize,
        length: usize,
        churn: f64,
        #[serde(default)]
        warmup: Option<usize>,
    },
    LowerBound {
        delta: usize,
        #[serde(default)]
        copies: Option<usize>,
        node_budget: u128,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Verification {
    /// Concentration events (basic only).
    pub events: bool,
    /// Decision-log replay (online algorithms).
    pub replay: bool,
    /// Properness and bands after every update (dynamic only).
    pub per_update: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Thresholds {
    /// Relative widening of the event windows.
    pub slack: f64,
    /// Minimum pass fraction for the events to count as holding.
    pub event_pass: f64,
    /// Per-round cap on measured samples.
    pub event_budget: usize,
    pub tv: f64,
    pub chi2_alpha: f64,
    /// Suffix-shuffle probes per replay.
    pub replay_probes: usize,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            slack: 0.1,
            event_pass: 0.99,
            event_budget: 10_000,
            tv: 0.05,
            chi2_alpha: 0.01,
            replay_probes: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

fn default_k() -> u32 {
    crate::params::DEFAULT_K
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub instance: InstanceSource,
    pub epsilon: f64,
    #[serde(default = "default_k")]
    pub k: u32,
    /// Overrides the derived round count.
    #[serde(default)]
    pub t_eps: Option<usize>,
    /// Overrides the degree bound taken from the instance.
    #[serde(default)]
    pub delta: Option<usize>,
    pub seeds: Vec<u64>,
    #[serde(default = "default_true")]
    pub gadget: bool,
    #[serde(default)]
    pub strict_regularity: bool,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub verify: Verification,
    #[serde(default)]
    pub thresholds: Thresholds,
}

fn bad(field: &str, msg: impl Into<String>) -> HarnessError {
    HarnessError::Config {
        field: field.into(),
        msg: msg.into(),
    }
}

impl ExperimentConfig {
    pub fn new(
        algorithm: Algorithm,
        instance: InstanceSource,
        epsilon: f64,
        seeds: Vec<u64>,
    ) -> Self {
        ExperimentConfig {
            algorithm,
            instance,
            epsilon,
            k: default_k(),
            t_eps: None,
            delta: None,
            seeds,
            gadget: true,
            strict_regularity: false,
            output: None,
            format: OutputFormat::Csv,
            verify: Verification::default(),
            thresholds: Thresholds::default(),
        }
    }

    pub fn from_json_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let cfg: ExperimentConfig = serde_json::from_str(&text).map_err(|e| {
            bad(
                "<file>",
                format!(
                    "{}: line {} column {}: {e}",
                    path.display(),
                    e.line(),
                    e.column()
                ),
            )
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks what can be checked without building the instance.
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.seeds.is_empty() {
            return Err(bad("seeds", "at least one seed is required"));
        }
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(bad("epsilon", format!("{} not in [0, 1)", self.epsilon)));
        }
        if self.k == 0 {
            return Err(bad("k", "must be positive"));
        }
        if self.t_eps == Some(0) {
            return Err(bad("t_eps", "must be positive"));
        }
        if self.algorithm == Algorithm::General && self.epsilon == 0.0 {
            return Err(bad("epsilon", "general needs epsilon > 0"));
        }
        if self.algorithm == Algorithm::General && self.epsilon >= 0.5 {
            return Err(bad("epsilon", "general needs epsilon < 0.5"));
        }
        let updates = matches!(self.instance, InstanceSource::Updates { .. });
        if updates && self.algorithm != Algorithm::Dynamic {
            return Err(bad(
                "instance",
                "update sequences only feed the dynamic algorithm",
            ));
        }
        if let InstanceSource::BoundedDegree { lo, hi, .. } = self.instance {
            if lo > hi {
                return Err(bad("instance.lo", "exceeds hi"));
            }
        }
        if let InstanceSource::Updates { churn, .. } = self.instance {
            if !(0.0..=1.0).contains(&churn) {
                return Err(bad("instance.churn", "not in [0, 1]"));
            }
        }
        let t = &self.thresholds;
        if !(t.slack >= 0.0) {
            return Err(bad("thresholds.slack", "must be non-negative"));
        }
        if !(0.0..=1.0).contains(&t.event_pass) {
            return Err(bad("thresholds.event_pass", "not in [0, 1]"));
        }
        if t.event_budget == 0 {
            return Err(bad("thresholds.event_budget", "must be positive"));
        }
        if !(t.tv > 0.0 && t.tv <= 1.0) {
            return Err(bad("thresholds.tv", "not in (0, 1]"));
        }
        if !(t.chi2_alpha > 0.0 && t.chi2_alpha < 1.0) {
            return Err(bad("thresholds.chi2_alpha", "not in (0, 1)"));
        }
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        let digest = Sha256::digest(&bytes);
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
