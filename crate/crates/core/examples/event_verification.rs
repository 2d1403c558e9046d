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

//! Checks phase-one palette sizes, c-degrees and sampled fractions against
//! their concentration windows.

use nibble_color::generators::gen_near_regular;
use nibble_color::harness::verify_events;
use nibble_color::nibble::{run_basic, PhaseOneOptions};
use nibble_color::params::Params;
use nibble_color::rng::rng_from_seed;

fn main() {
    let (n, delta, eps) = (1000, 400, 0.05);
    let g = gen_near_regular(n, delta, 0.0, 31).expect("generator");
    // K=48 leaves no rounds at this eps; fix three phase-one rounds instead.
    let p = Params::custom(n, delta, eps, 48, 4).expect("params");
    let opts = PhaseOneOptions {
        keep_samples: true,
        ..Default::default()
    };
    let (_, m) = run_basic(&g, &p, &mut rng_from_seed(32), &opts, 33).expect("run");
    let report = verify_events(&m.trace, &p, 0.1);
    for r in &report.rounds {
        println!(
            "round {}: palettes {:.3}  c-degrees {:.3}  sampled {:.3}  failed deg {} <= {:.1}",
            r.round,
            r.palette_pass,
            r.c_degree_pass,
            r.sampled_pass,
            r.failed_max_degree,
            r.failed_bound
        );
    }
    let (a, b, c) = report.pooled();
    println!(
        "pooled: {a:.3} {b:.3} {c:.3}; passes at 0.99: {}",
        report.passes(0.99)
    );
}
