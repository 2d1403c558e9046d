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

//! Random-order online edge coloring.
//!
//! [`WarmupOnline`] runs the nibble rounds on a near-regular graph with a
//! known edge count, cutting the stream into rounds by binomial prefixes.
//! [`GeneralOnline`] drops both assumptions: it estimates degrees from a
//! greedy prefix, pads the middle part of the stream with a dummy gadget so
//! the warm-up sees a near-regular graph, and finishes greedily.

mod general;
mod sampler;
mod warmup;

pub use general::{
    build_dummy_gadget, degree_trigger, dummy_edge_count, estimate_stage, m_prime, run_general,
    run_general_with, DummyGadget, Estimate, Feed, GeneralMetrics, GeneralOnline, Interleaver,
    Step,
};
pub use sampler::binomial_prefix_partition;
pub use warmup::{run_warmup, run_warmup_with, WarmupDecision, WarmupMetrics, WarmupOnline};
