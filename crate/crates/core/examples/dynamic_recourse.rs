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

//! Fully dynamic coloring under an insert/delete stream: recourse and
//! dirty-set sizes per round.

use nibble_color::dynamic::{dirty_recursion, recourse_stats, run_dynamic, DynamicConfig};
use nibble_color::generators::{gen_update_sequence, UpdateSequenceParams};

fn main() {
    let (n, delta, eps) = (500, 64, 0.2);
    let ups = gen_update_sequence(&UpdateSequenceParams {
        n,
        delta,
        length: 4000,
        churn: 0.5,
        warmup: None,
        seed: 21,
    })
    .expect("update sequence");
    let (s, reports) = run_dynamic(DynamicConfig::new(n, delta, eps, 1, 22), &ups).expect("run");
    let st = recourse_stats(&reports);
    println!(
        "{} updates, C={} t_eps={}, colors in use {}, proper={}",
        st.updates,
        s.phase1_colors(),
        s.t_eps(),
        s.colors_in_use(),
        s.verify().valid
    );
    println!(
        "recourse mean {:.3} max {} (gadget edges {:.3}); histogram {:?}",
        st.mean, st.max, st.mean_dummy, st.histogram
    );
    for r in dirty_recursion(reports.iter().flat_map(|r| &r.steps), eps) {
        println!(
            "round {}: mean |D| {:.4} vs 6eps(1 + {:.4}) = {:.4} {}",
            r.round,
            r.mean,
            r.mean_before,
            r.bound,
            if r.holds { "ok" } else { "ABOVE" }
        );
    }
}
