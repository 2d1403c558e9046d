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

//! Warm-up random-order algorithm against greedy on the same stream.

use nibble_color::baselines::greedy_online;
use nibble_color::generators::{gen_near_regular, gen_random_order_stream};
use nibble_color::random_order::run_warmup;
use nibble_color::rng::rng_from_seed;

fn main() {
    let (n, delta, eps) = (1000, 200, 0.1);
    let g = gen_near_regular(n, delta, 0.0, 7).expect("generator");
    let stream = gen_random_order_stream(&g, 8);
    let (colors, m) = run_warmup(
        &stream,
        n,
        delta,
        stream.len(),
        eps,
        1,
        &mut rng_from_seed(9),
    )
    .expect("warm-up run");
    let greedy = greedy_online(n, &stream);
    println!(
        "warm-up: C={} rounds={} boundaries={:?}",
        m.phase1_colors, m.rounds, m.boundaries
    );
    println!(
        "  kept tentative {} | null {} | clash {} | tail {}",
        m.tentative_edges, m.null_edges, m.conflict_edges, m.tail_edges
    );
    println!(
        "  max color {} ({} palette + {} greedy-band colors)",
        colors.iter().max().unwrap_or(&0),
        m.tentative_band_colors,
        m.greedy_band_colors
    );
    println!("greedy: max color {}", greedy.iter().max().unwrap_or(&0));
}
