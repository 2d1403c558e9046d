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

//! Experiment orchestration and statistical verification.

pub mod bench;
mod config;
mod distribution;
mod equivalence;
mod events;
mod experiment;
mod replay;

pub use config::{
    Algorithm, ExperimentConfig, InstanceSource, OutputFormat, Thresholds, Verification,
};
pub use distribution::{chi_square_gof, tv_distance, tv_to_pmf, ChiSquare, TvResult};
pub use equivalence::{dynamic_outcome, equivalence_tv, static_outcome, Outcome};
pub use events::{verify_events, EventReport, RoundEvents};
pub use experiment::{
    format_records, records_to_csv, records_to_json, run_experiment, write_records, Record,
};
pub use replay::{replay_validate, Decision, DecisionLog, ReplayVerdict};
