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

//! Parameter sweeps. Each returns plain records, one per (point, seed).

use crate::error::HarnessError;

use super::config::{Algorithm, ExperimentConfig, InstanceSource};
use super::experiment::{run_experiment, Record};

/// Dynamic runs on generated update sequences, one point per `n`.
pub fn recourse_vs_n(
    base: &ExperimentConfig,
    ns: &[usize],
    delta: usize,
    length: usize,
    churn: f64,
) -> Result<Vec<Record>, HarnessError> {
    let mut out = Vec::new();
    for &n in ns {
        let mut cfg = base.clone();
        cfg.algorithm = Algorithm::Dynamic;
        cfg.instance = InstanceSource::Updates {
            n,
            delta,
            length,
            churn,
            warmup: None,
        };
        out.extend(run_experiment(&cfg)?);
    }
    Ok(out)
}

/// `base` rerun for every epsilon; greedy is run once since it ignores it.
pub fn colors_vs_epsilon(
    base: &ExperimentConfig,
    epsilons: &[f64],
) -> Result<Vec<Record>, HarnessError> {
    let mut out = Vec::new();
    let mut greedy = base.clone();
    greedy.algorithm = Algorithm::Greedy;
    greedy.epsilon = 0.0;
    greedy.t_eps = None;
    out.extend(run_experiment(&greedy)?);
    for &eps in epsilons {
        let mut cfg = base.clone();
        cfg.epsilon = eps;
        out.extend(run_experiment(&cfg)?);
    }
    Ok(out)
}
