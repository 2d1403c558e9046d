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

//! Instance generators. Every generator is a deterministic function of its
//! parameters and seed.

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::Rng;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::baselines::Stream;
use crate::error::{ColoringError, Result};
use crate::graph::{pair_key, Graph, NodeId};
use crate::rng::{derive_seed, rng_from_seed, RunRng};

/// Whole-pairing retries before falling back to swap repair.
const PAIRING_RETRIES: usize = 100;
/// Swap attempts per colliding pair during repair.
const SWAP_ATTEMPTS: usize = 1000;
/// Fresh restarts when repair leaves degrees below the requested floor.
const RESTARTS: usize = 20;

/// Random graph with all degrees in `[delta (1 - slack), delta]`.
///
/// Configuration model on `n * delta` stubs: pairings containing a loop or a
/// repeated pair are rejected whole up to 100 times, after which colliding
/// pairs are repaired by degree-preserving swaps. Pairs that cannot be
/// repaired are dropped, which is what `slack` pays for.
pub fn gen_near_regular(n: usize, delta: usize, slack: f64, seed: u64) -> Result<Graph> {
    if delta == 0 {
        return Ok(Graph::new(n, 0));
    }
    if n <= delta {
        return Err(ColoringError::InfeasibleParams(format!(
            "n = {n} must exceed delta = {delta}"
        )));
    }
    if slack == 0.0 && (n * delta) % 2 == 1 {
        return Err(ColoringError::InfeasibleParams(format!(
            "n * delta = {} is odd, no {delta}-regular graph on {n} nodes",
            n * delta
        )));
    }
    gen_degree_sequence(&vec![delta; n], delta, slack, seed)
}

/// Random graph whose degrees are drawn uniformly from `[lo, hi]` and then
/// realized by the same configuration model as [`gen_near_regular`] (up to
/// the `slack` shortfall).
pub fn gen_bounded_degree(n: usize, lo: usize, hi: usize, slack: f64, seed: u64) -> Result<Graph> {
    if lo > hi || hi >= n {
        return Err(ColoringError::InfeasibleParams(format!(
            "need lo <= hi < n, got lo={lo} hi={hi} n={n}"
        )));
    }
    let mut rng = rng_from_seed(derive_seed(seed, &[0xde6]));
    let degrees: Vec<usize> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
    gen_degree_sequence(&degrees, hi, slack, seed)
}

/// Configuration model for an explicit degree sequence.
pub fn gen_degree_sequence(
    degrees: &[usize],
    bound: usize,
    slack: f64,
    seed: u64,
) -> Result<Graph> {
    let n = degrees.len();
    // An odd stub total loses the last stub, which belongs to the last node
    // of positive degree.
    let mut target = degrees.to_vec();
    if degrees.iter().sum::<usize>() % 2 == 1 {
        if let Some(last) = target.iter_mut().rev().find(|d| **d > 0) {
            *last -= 1;
        }
    }
    for restart in 0..RESTARTS {
        let mut rng = rng_from_seed(derive_seed(seed, &[restart as u64]));
        let pairs = pair_stubs(degrees, &mut rng);
        let mut g = Graph::new(n, bound);
        for (u, v) in pairs {
            g.insert_edge(u, v)?;
        }
        let ok = (0..n as NodeId).all(|v| {
            let want = target[v as usize] as f64;
            g.degree(v) as f64 >= (want * (1.0 - slack) - 1e-9).ceil()
        });
        if ok {
            return Ok(g);
        }
    }
    Err(ColoringError::InfeasibleParams(format!(
        "could not realize the degree sequence within slack {slack} after {RESTARTS} restarts"
    )))
}

fn pair_stubs(degrees: &[usize], rng: &mut RunRng) -> Vec<(NodeId, NodeId)> {
    let mut stubs: Vec<NodeId> = degrees
        .iter()
        .enumerate()
        .flat_map(|(v, &d)| std::iter::repeat_n(v as NodeId, d))
        .collect();
    if stubs.len() % 2 == 1 {
        stubs.pop();
    }
    for _ in 0..PAIRING_RETRIES {
        stubs.shuffle(rng);
        let mut seen = FxHashSet::default();
        let clean = stubs
            .chunks_exact(2)
            .all(|p| p[0] != p[1] && seen.insert(pair_key(p[0], p[1])));
        if clean {
            return stubs.chunks_exact(2).map(|p| (p[0], p[1])).collect();
        }
    }
    // Relaxed fallback: keep the last shuffle and repair collisions by swaps.
    let mut present: FxHashSet<u64> = FxHashSet::default();
    let mut good: Vec<(NodeId, NodeId)> = Vec::with_capacity(stubs.len() / 2);
    let mut bad = Vec::new();
    for p in stubs.chunks_exact(2) {
        if p[0] != p[1] && present.insert(pair_key(p[0], p[1])) {
            good.push((p[0], p[1]));
        } else {
            bad.push((p[0], p[1]));
        }
    }
    for (a, b) in bad {
        for _ in 0..SWAP_ATTEMPTS {
            if good.is_empty() {
                break;
            }
            let j = rng.random_range(0..good.len());
            let (mut c, mut d) = good[j];
            if rng.random_bool(0.5) {
                std::mem::swap(&mut c, &mut d);
            }
            let (k1, k2) = (pair_key(a, c), pair_key(b, d));
            if a == c || b == d || k1 == k2 || present.contains(&k1) || present.contains(&k2) {
                continue;
            }
            present.remove(&pair_key(c, d));
            present.insert(k1);
            present.insert(k2);
            good[j] = (a, c);
            good.push((b, d));
            break;
        }
    }
    good
}

/// Uniformly random arrival order of `g`'s edges.
pub fn gen_random_order_stream(g: &Graph, seed: u64) -> Stream {
    let mut stream: Stream = g.edges().map(|(_, u, v)| (u, v)).collect();
    stream.shuffle(&mut rng_from_seed(seed));
    stream
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Update {
    Insert(NodeId, NodeId),
    Delete(NodeId, NodeId),
}

impl Update {
    pub fn endpoints(self) -> (NodeId, NodeId) {
        match self {
            Update::Insert(u, v) | Update::Delete(u, v) => (u, v),
        }
    }

    pub fn is_insert(self) -> bool {
        matches!(self, Update::Insert(..))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpdateSequenceParams {
    pub n: usize,
    pub delta: usize,
    pub length: usize,
    /// Deletion probability per step after the warm-up.
    pub churn: f64,
    /// Leading insertion-only steps; `None` means `length / 2`.
    pub warmup: Option<usize>,
    pub seed: u64,
}

impl UpdateSequenceParams {
    pub fn warmup_len(&self) -> usize {
        self.warmup.unwrap_or(self.length / 2).min(self.length)
    }
}

/// Insertion attempts before concluding the degree caps bind.
const INSERT_ATTEMPTS: usize = 2000;

/// Oblivious update sequence keeping every degree at most `delta`.
///
/// The first `warmup` steps insert. Afterwards each step deletes a uniformly
/// random current edge with probability `churn` and inserts otherwise. If an
/// insertion finds no admissible pair the sequence ends there.
pub fn gen_update_sequence(p: &UpdateSequenceParams) -> Result<Vec<Update>> {
    if !(0.0..=1.0).contains(&p.churn) {
        return Err(ColoringError::InvalidParams(format!(
            "churn {} not in [0, 1]",
            p.churn
        )));
    }
    if p.n < 2 || p.delta == 0 {
        return Ok(Vec::new());
    }
    let mut rng = rng_from_seed(p.seed);
    let mut deg = vec![0usize; p.n];
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    let mut slot: FxHashMap<u64, usize> = FxHashMap::default();
    let mut out = Vec::with_capacity(p.length);
    let warmup = p.warmup_len();
    for step in 0..p.length {
        let delete = step >= warmup && !edges.is_empty() && rng.random_bool(p.churn);
        if delete {
            let i = rng.random_range(0..edges.len());
            let (u, v) = edges.swap_remove(i);
            slot.remove(&pair_key(u, v));
            if i < edges.len() {
                let moved = edges[i];
                slot.insert(pair_key(moved.0, moved.1), i);
            }
            deg[u as usize] -= 1;
            deg[v as usize] -= 1;
            out.push(Update::Delete(u, v));
            continue;
        }
        let mut found = None;
        for _ in 0..INSERT_ATTEMPTS {
            let u = rng.random_range(0..p.n as NodeId);
            let v = rng.random_range(0..p.n as NodeId);
            if u != v
                && deg[u as usize] < p.delta
                && deg[v as usize] < p.delta
                && !slot.contains_key(&pair_key(u, v))
            {
                found = Some((u, v));
                break;
            }
        }
        let Some((u, v)) = found else { break };
        slot.insert(pair_key(u, v), edges.len());
        edges.push((u, v));
        deg[u as usize] += 1;
        deg[v as usize] += 1;
        out.push(Update::Insert(u, v));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundParams {
    pub delta: usize,
    /// Number of disjoint copies; `None` picks the most that fit the budget.
    pub copies: Option<usize>,
    pub node_budget: u128,
    pub seed: u64,
}

/// `2 D * C(2D - 2, D - 1) * C(2D - 1, D)`: stars per copy.
pub fn lower_bound_beta(delta: usize) -> BigUint {
    let d = delta as u64;
    BigUint::from(2 * d) * binomial(2 * d - 2, d - 1) * binomial(2 * d - 1, d)
}

fn binomial(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

#[derive(Debug, Clone)]
pub struct LowerBoundInstance {
    pub graph: Graph,
    /// All edges in one uniformly random order.
    pub stream: Stream,
    pub beta: usize,
    pub copies: usize,
    /// Hub node of each copy.
    pub hubs: Vec<NodeId>,
}

/// Disjoint copies of: `beta` stars with `delta - 1` leaves each, plus a hub
/// adjacent to `delta` distinct uniformly chosen star centers.
pub fn gen_lower_bound_instance(p: &LowerBoundParams) -> Result<LowerBoundInstance> {
    if p.delta < 2 {
        return Err(ColoringError::InvalidParams(
            "lower-bound instance needs delta >= 2".into(),
        ));
    }
    let beta_big = lower_bound_beta(p.delta);
    let copy_nodes_big = &beta_big * BigUint::from(p.delta) + BigUint::from(1u32);
    let budget = BigUint::from(p.node_budget);
    let fit: u128 = (&budget / &copy_nodes_big).try_into().unwrap_or(u128::MAX);
    let copies = p.copies.map(|c| c as u128).unwrap_or(fit);
    let needed = &copy_nodes_big * BigUint::from(copies);
    if copies == 0 || needed > budget {
        return Err(ColoringError::ResourceLimit {
            needed: needed.try_into().unwrap_or(u128::MAX),
            budget: p.node_budget,
        });
    }
    let beta: usize = (&beta_big)
        .try_into()
        .expect("beta fits in the node budget");
    let copies = copies as usize;
    let copy_nodes = beta * p.delta + 1;
    let mut rng = rng_from_seed(p.seed);
    let mut g = Graph::new(copies * copy_nodes, p.delta);
    let mut hubs = Vec::with_capacity(copies);
    for copy in 0..copies {
        let base = (copy * copy_nodes) as NodeId;
        let center = |s: usize| base + (s * p.delta) as NodeId;
        for s in 0..beta {
            for leaf in 1..p.delta {
                g.insert_edge(center(s), center(s) + leaf as NodeId)?;
            }
        }
        let hub = base + (beta * p.delta) as NodeId;
        for s in rand::seq::index::sample(&mut rng, beta, p.delta) {
            g.insert_edge(hub, center(s))?;
        }
        hubs.push(hub);
    }
    let stream = gen_random_order_stream(&g, derive_seed(p.seed, &[1]));
    Ok(LowerBoundInstance {
        graph: g,
        stream,
        beta,
        copies,
        hubs,
    })
}
