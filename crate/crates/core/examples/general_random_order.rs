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

//! Three-step random-order algorithm on a graph with uneven degrees.

use nibble_color::generators::{gen_bounded_degree, gen_random_order_stream};
use nibble_color::random_order::run_general;
use nibble_color::rng::rng_from_seed;

fn main() {
    let (n, delta, eps) = (300, 60, 0.1);
    let g = gen_bounded_degree(n, 42, delta, 0.05, 11).expect("generator");
    let stream = gen_random_order_stream(&g, 12);
    let (colors, m) =
        run_general(&stream, n, delta, eps, 1, &mut rng_from_seed(13)).expect("general run");
    println!(
        "edges={} trigger at t={} m'={}",
        stream.len(),
        m.t,
        m.m_prime
    );
    println!(
        "bands: step I [1, {}], step II ({}, {}], step III ({}, {}]",
        m.delta1, m.delta1, m.delta2, m.delta2, m.delta3
    );
    println!(
        "edges per step {:?}; dummies fed {} of {}",
        m.step_edges, m.dummies_fed, m.dummy_edges
    );
    println!("max color {}", colors.iter().max().unwrap_or(&0));
}
