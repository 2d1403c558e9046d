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

//! Offline two-phase coloring of a random near-regular graph.

use nibble_color::baselines::{coloring_from_stream, greedy_online};
use nibble_color::generators::{gen_near_regular, gen_random_order_stream};
use nibble_color::graph::verify_proper_coloring;
use nibble_color::nibble::{run_basic, PhaseOneOptions};
use nibble_color::params::Params;
use nibble_color::rng::rng_from_seed;

fn main() {
    let (n, delta, eps) = (1000, 200, 0.1);
    let g = gen_near_regular(n, delta, 0.0, 1).expect("generator");
    let p = Params::derive(n, delta, eps, 1).expect("params");
    let (col, m) = run_basic(
        &g,
        &p,
        &mut rng_from_seed(2),
        &PhaseOneOptions::default(),
        3,
    )
    .expect("basic run");
    let ok = verify_proper_coloring(&g, &col, true).valid;
    println!(
        "n={n} delta={delta} eps={eps}: C={} t_eps={} colors={} max={} proper={ok}",
        p.phase1_colors, p.t_eps, m.colors_used, m.max_color
    );
    println!(
        "phase one colored {:.1}% of edges; leftover max degree {}",
        100.0 * m.phase_one_colored_fraction,
        m.uncolored_max_degree
    );

    // Same graph, first-fit greedy in a random order, for scale.
    let stream = gen_random_order_stream(&g, 4);
    let colors = greedy_online(n, &stream);
    let (gg, gc) = coloring_from_stream(n, delta, &stream, &colors).expect("materialize");
    println!("greedy: {} colors", gc.distinct_colors(&gg));
}
