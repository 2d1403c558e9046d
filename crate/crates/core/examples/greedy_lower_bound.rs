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

//! Greedy on the lower-bound construction: how often it is forced to 2D - 1.

use nibble_color::baselines::greedy_online;
use nibble_color::generators::{gen_lower_bound_instance, LowerBoundParams};

fn main() {
    let delta = 2;
    let seeds = 50;
    let mut forced = 0;
    for seed in 0..seeds {
        let inst = gen_lower_bound_instance(&LowerBoundParams {
            delta,
            copies: None,
            node_budget: 10_000,
            seed,
        })
        .expect("instance");
        if seed == 0 {
            println!(
                "{} copies of {} stars + hub, {} edges",
                inst.copies,
                inst.beta,
                inst.stream.len()
            );
        }
        let top = greedy_online(inst.graph.node_count(), &inst.stream)
            .into_iter()
            .max()
            .unwrap_or(0);
        forced += (top as usize == 2 * delta - 1) as u32;
    }
    println!(
        "greedy used {} colors in {forced}/{seeds} orders",
        2 * delta - 1
    );
}
