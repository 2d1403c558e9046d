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

//! Config-driven experiment: several seeds, CSV out, rerun is identical.

use nibble_color::harness::{
    records_to_csv, run_experiment, Algorithm, ExperimentConfig, InstanceSource,
};

fn main() {
    let inst = InstanceSource::NearRegular {
        n: 400,
        delta: 40,
        slack: 0.0,
    };
    let mut cfg = ExperimentConfig::new(Algorithm::Warmup, inst, 0.2, vec![0, 1, 2, 3]);
    cfg.k = 1;
    cfg.verify.replay = true;
    cfg.validate().expect("valid config");
    let recs = run_experiment(&cfg).expect("experiment");
    let csv = records_to_csv(&recs).expect("csv");
    print!("{csv}");
    let again = records_to_csv(&run_experiment(&cfg).expect("rerun")).expect("csv");
    println!("config {} rerun identical: {}", cfg.hash(), csv == again);
    println!("{}", serde_json::to_string_pretty(&cfg).expect("json"));
}
