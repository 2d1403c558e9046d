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

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use super::warmup::{WarmupMetrics, WarmupOnline};
use crate::baselines::OnlineColorer;
use crate::colorset::FirstFit;
use crate::error::{ColoringError, Result};
use crate::graph::{Color, NodeId, NULL_COLOR};
use crate::params::Params;
use crate::rng::{derive_seed, rng_from_seed, RunRng};

/// `ceil(eps * delta)`, at least 1.
pub fn degree_trigger(epsilon: f64, delta: usize) -> usize {
    ((epsilon * delta as f64 - 1e-9).ceil() as usize).max(1)
}

/// `floor(T / (eps (1 + eps^2)))`.
pub fn m_prime(t: usize, epsilon: f64) -> usize {
    (t as f64 / (epsilon * (1.0 + epsilon * epsilon)) + 1e-9).floor() as usize
}

/// Result of the greedy estimation prefix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    /// Number of edges consumed.
    pub t: usize,
    /// Whether some node reached the trigger degree (false: the stream ran out).
    pub triggered: bool,
    /// Degrees of the first `t` edges.
    pub d_t: Vec<usize>,
    pub m_prime: usize,
    pub delta1: Color,
    pub colors: Vec<Color>,
}

/// Greedy first-fit on the stream until some node reaches degree
/// `ceil(eps * delta)`.
#[derive(Debug, Clone)]
struct StepOne {
    trigger: usize,
    degree: Vec<usize>,
    greedy: FirstFit,
    t: usize,
    delta1: Color,
}

impl StepOne {
    fn new(n: usize, epsilon: f64, delta: usize) -> Self {
        StepOne {
            trigger: degree_trigger(epsilon, delta),
            degree: vec![0; n],
            greedy: FirstFit::new(n),
            t: 0,
            delta1: 0,
        }
    }

    /// Colors one edge; returns the color and whether the trigger fired.
    fn push(&mut self, u: NodeId, v: NodeId) -> (Color, bool) {
        let c = self.greedy.assign(u, v, 0);
        self.delta1 = self.delta1.max(c);
        self.t += 1;
        self.degree[u as usize] += 1;
        self.degree[v as usize] += 1;
        let fired =
            self.degree[u as usize] >= self.trigger || self.degree[v as usize] >= self.trigger;
        (c, fired)
    }
}

pub fn estimate_stage(
    stream: &[(NodeId, NodeId)],
    n: usize,
    epsilon: f64,
    delta: usize,
) -> Estimate {
    let mut s = StepOne::new(n, epsilon, delta);
    let mut colors = Vec::new();
    let mut triggered = false;
    for &(u, v) in stream {
        let (c, fired) = s.push(u, v);
        colors.push(c);
        if fired {
            triggered = true;
            break;
        }
    }
    Estimate {
        t: s.t,
        triggered,
        m_prime: m_prime(s.t, epsilon),
        d_t: s.degree,
        delta1: s.delta1,
        colors,
    }
}

/// Dummy part of the padded graph `H`.
///
/// Real node `v` owns dummy nodes `n + v*delta + j`, `j < delta`, which form
/// a clique, and is joined to the first `attach[v]` of them. Dummy edges are
/// addressed by a global index so the interleaving can sample them without
/// materializing the edge list.
#[derive(Debug, Clone)]
pub struct DummyGadget {
    n: usize,
    delta: usize,
    clique: u64,
    attach: Vec<u32>,
    offsets: Vec<u64>,
}

/// `round(delta - (1/eps - 1) * d)`, clamped to `[0, delta]`.
pub fn dummy_edge_count(d_t: usize, epsilon: f64, delta: usize) -> usize {
    let x = delta as f64 - (1.0 / epsilon - 1.0) * d_t as f64;
    x.round().clamp(0.0, delta as f64) as usize
}

pub fn build_dummy_gadget(d_t: &[usize], epsilon: f64, delta: usize) -> DummyGadget {
    let clique = (delta as u64) * (delta as u64).saturating_sub(1) / 2;
    let attach: Vec<u32> = d_t
        .iter()
        .map(|&d| dummy_edge_count(d, epsilon, delta) as u32)
        .collect();
    let mut offsets = Vec::with_capacity(attach.len() + 1);
    let mut acc = 0u64;
    offsets.push(0);
    for &a in &attach {
        acc += clique + a as u64;
        offsets.push(acc);
    }
    DummyGadget {
        n: d_t.len(),
        delta,
        clique,
        attach,
        offsets,
    }
}

impl DummyGadget {
    pub fn len(&self) -> u64 {
        *self.offsets.last().unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node count of `H`: real nodes followed by `delta` dummies per real node.
    pub fn node_count(&self) -> usize {
        self.n * (self.delta + 1)
    }

    pub fn attach_count(&self, v: NodeId) -> usize {
        self.attach[v as usize] as usize
    }

    pub fn dummy_node(&self, v: NodeId, j: usize) -> NodeId {
        (self.n + v as usize * self.delta + j) as NodeId
    }

    /// Endpoints of dummy edge `idx`, smaller id first.
    pub fn edge(&self, idx: u64) -> (NodeId, NodeId) {
        let v = self.offsets.partition_point(|&o| o <= idx) - 1;
        let local = idx - self.offsets[v];
        let v = v as NodeId;
        if local < self.clique {
            let (a, b) = unrank_pair(local);
            (
                self.dummy_node(v, a as usize),
                self.dummy_node(v, b as usize),
            )
        } else {
            (v, self.dummy_node(v, (local - self.clique) as usize))
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        (0..self.len()).map(|i| self.edge(i))
    }

    /// Degrees in `H` given the real-edge degrees `d_r` of the Step-II
    /// subgraph. Dummy nodes follow the real ones.
    pub fn h_degrees(&self, d_r: &[usize]) -> Vec<usize> {
        let mut deg = vec![0usize; self.node_count()];
        for v in 0..self.n {
            let a = self.attach[v] as usize;
            deg[v] = d_r[v] + a;
            for j in 0..self.delta {
                deg[self.n + v * self.delta + j] = self.delta - 1 + usize::from(j < a);
            }
        }
        deg
    }
}

/// Inverse of `(a, b) -> b(b-1)/2 + a` for `a < b`.
fn unrank_pair(l: u64) -> (u64, u64) {
    let mut b = ((1.0 + (1.0 + 8.0 * l as f64).sqrt()) / 2.0) as u64;
    while b * (b - 1) / 2 > l {
        b -= 1;
    }
    while (b + 1) * b / 2 <= l {
        b += 1;
    }
    (l - b * (b - 1) / 2, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feed {
    Real,
    Dummy(u32),
}

/// Merges the real edges (in stream order) with the dummy edges in uniformly
/// random order: each step feeds a random remaining dummy with probability
/// `|D'| / (|R'| + |D'|)`.
#[derive(Debug, Clone)]
pub struct Interleaver {
    real_left: usize,
    pool: Vec<u32>,
}

impl Interleaver {
    pub fn new(real: usize, dummies: u32) -> Self {
        Interleaver {
            real_left: real,
            pool: (0..dummies).collect(),
        }
    }

    pub fn real_left(&self) -> usize {
        self.real_left
    }

    pub fn dummies_left(&self) -> usize {
        self.pool.len()
    }

    pub fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Option<Feed> {
        let d = self.pool.len();
        let total = self.real_left + d;
        if total == 0 {
            return None;
        }
        if rng.random_range(0..total) < d {
            let i = rng.random_range(0..d);
            Some(Feed::Dummy(self.pool.swap_remove(i)))
        } else {
            self.real_left -= 1;
            Some(Feed::Real)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step {
    Estimate,
    Padded,
    Greedy,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GeneralMetrics {
    pub t: usize,
    pub triggered: bool,
    pub m_prime: usize,
    /// The stream ended before position `m_prime`; the run behaved as if
    /// `m_prime` had been capped at the stream length.
    pub m_prime_capped: bool,
    pub delta1: Color,
    pub delta2: Color,
    pub delta3: Color,
    /// Real edges colored by each step.
    pub step_edges: [usize; 3],
    pub dummy_edges: u64,
    pub dummies_fed: u64,
    /// Palette size of the padded warm-up.
    pub step_two_colors: usize,
    /// Largest Step-II color that came from the warm-up palette, and the
    /// smallest that came from its greedy band, both shifted by `delta1`.
    pub step_two_max_tentative: Option<Color>,
    pub step_two_min_greedy: Option<Color>,
    pub step_two: Option<WarmupMetrics>,
}

struct StepTwo {
    warm: WarmupOnline,
    gadget: DummyGadget,
    mix: Interleaver,
    rng: RunRng,
}

/// The three-step algorithm for arbitrary graphs in random order, with only
/// `n` and `delta` known in advance.
pub struct GeneralOnline {
    n: usize,
    delta: usize,
    epsilon: f64,
    step_two_params: Params,
    seed: u64,
    one: Option<StepOne>,
    two: Option<StepTwo>,
    three: FirstFit,
    metrics: GeneralMetrics,
    last: Step,
}

impl GeneralOnline {
    /// The padded warm-up runs with parameter `2 eps`, which must give at
    /// least one round for `k`.
    pub fn new(n: usize, delta: usize, epsilon: f64, k: u32, seed: u64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(ColoringError::InvalidEpsilon {
                epsilon,
                reason: "must lie in (0, 1/2) so that 2*eps is a valid rate".into(),
            });
        }
        let params = Params::derive(n * (delta + 1), delta, 2.0 * epsilon, k)?;
        Ok(Self::with_step_two_params(n, delta, epsilon, params, seed))
    }

    /// Uses `params` for the padded warm-up as given.
    pub fn with_step_two_params(
        n: usize,
        delta: usize,
        epsilon: f64,
        params: Params,
        seed: u64,
    ) -> Self {
        GeneralOnline {
            n,
            delta,
            epsilon,
            step_two_params: params,
            seed,
            one: Some(StepOne::new(n, epsilon, delta)),
            two: None,
            three: FirstFit::new(n),
            metrics: GeneralMetrics::default(),
            last: Step::Estimate,
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn metrics(&self) -> &GeneralMetrics {
        &self.metrics
    }

    /// Step that colored the most recent arrival.
    pub fn last_step(&self) -> Step {
        self.last
    }

    /// Flags an unfinished Step II and returns the metrics.
    pub fn finish(mut self) -> GeneralMetrics {
        if let Some(one) = &self.one {
            self.metrics.t = one.t;
            self.metrics.delta1 = one.delta1;
            self.metrics.delta2 = one.delta1;
            self.metrics.delta3 = one.delta1;
        }
        if let Some(two) = self.two.take() {
            self.metrics.m_prime_capped = two.mix.real_left() > 0;
            self.metrics.step_two = Some(two.warm.metrics().clone());
        }
        self.metrics
    }

    fn enter_step_two(&mut self, one: StepOne) -> Result<()> {
        let m = &mut self.metrics;
        m.t = one.t;
        m.triggered = true;
        m.m_prime = m_prime(one.t, self.epsilon);
        m.delta1 = one.delta1;
        m.delta2 = one.delta1;
        m.delta3 = one.delta1;
        let real = m.m_prime.saturating_sub(one.t);
        if real == 0 {
            return Ok(());
        }
        let gadget = build_dummy_gadget(&one.degree, self.epsilon, self.delta);
        let dummies = u32::try_from(gadget.len()).map_err(|_| ColoringError::ResourceLimit {
            needed: gadget.len() as u128,
            budget: u32::MAX as u128,
        })?;
        m.dummy_edges = gadget.len();
        m.step_two_colors = self.step_two_params.phase1_colors;
        let warm = WarmupOnline::new(
            gadget.node_count(),
            &self.step_two_params,
            real + dummies as usize,
            derive_seed(self.seed, &[2]),
        );
        self.two = Some(StepTwo {
            warm,
            gadget,
            mix: Interleaver::new(real, dummies),
            rng: rng_from_seed(derive_seed(self.seed, &[3])),
        });
        Ok(())
    }

    /// Online step; the fallible part is building the gadget when Step I
    /// ends.
    pub fn try_process(&mut self, u: NodeId, v: NodeId) -> Result<Color> {
        if let Some(one) = self.one.as_mut() {
            let (c, fired) = one.push(u, v);
            self.metrics.step_edges[0] += 1;
            self.last = Step::Estimate;
            if fired {
                let one = self.one.take().unwrap();
                self.enter_step_two(one)?;
            }
            return Ok(c);
        }
        if let Some(two) = self.two.as_mut() {
            let d1 = self.metrics.delta1;
            loop {
                match two.mix.next(&mut two.rng).expect("a real edge is pending") {
                    Feed::Dummy(idx) => {
                        let (a, b) = two.gadget.edge(idx as u64);
                        two.warm.process(a, b);
                        self.metrics.dummies_fed += 1;
                    }
                    Feed::Real => break,
                }
            }
            let chi = two.warm.process(u, v);
            let c = chi + d1;
            let m = &mut self.metrics;
            m.step_edges[1] += 1;
            m.delta2 = m.delta2.max(c);
            m.delta3 = m.delta2;
            let dec = two.warm.last_decision().expect("just processed");
            if dec.color == dec.tentative && dec.tentative != NULL_COLOR {
                m.step_two_max_tentative = Some(m.step_two_max_tentative.map_or(c, |x| x.max(c)));
            } else {
                m.step_two_min_greedy = Some(m.step_two_min_greedy.map_or(c, |x| x.min(c)));
            }
            if two.mix.real_left() == 0 {
                // Dummies left after the last real edge only affect
                // discarded colors.
                let two = self.two.take().unwrap();
                m.step_two = Some(two.warm.metrics().clone());
            }
            self.last = Step::Padded;
            return Ok(c);
        }
        let c = self.three.assign(u, v, self.metrics.delta2);
        self.metrics.step_edges[2] += 1;
        self.metrics.delta3 = self.metrics.delta3.max(c);
        self.last = Step::Greedy;
        Ok(c)
    }
}

impl OnlineColorer for GeneralOnline {
    /// Panics if the gadget does not fit; use [`GeneralOnline::try_process`]
    /// to handle that case.
    fn process(&mut self, u: NodeId, v: NodeId) -> Color {
        self.try_process(u, v).expect("gadget construction failed")
    }
}

/// Colors `stream` with the three-step algorithm.
pub fn run_general<R: RngCore + ?Sized>(
    stream: &[(NodeId, NodeId)],
    n: usize,
    delta: usize,
    epsilon: f64,
    k: u32,
    rng: &mut R,
) -> Result<(Vec<Color>, GeneralMetrics)> {
    let alg = GeneralOnline::new(n, delta, epsilon, k, rng.next_u64())?;
    run_general_with(alg, stream)
}

/// Drives a prepared [`GeneralOnline`] over `stream`.
pub fn run_general_with(
    mut alg: GeneralOnline,
    stream: &[(NodeId, NodeId)],
) -> Result<(Vec<Color>, GeneralMetrics)> {
    let n = alg.node_count();
    let mut colors = Vec::with_capacity(stream.len());
    for &(u, v) in stream {
        if u as usize >= n || v as usize >= n {
            return Err(ColoringError::NodeOutOfRange {
                node: u.max(v),
                node_count: n,
            });
        }
        colors.push(alg.try_process(u, v)?);
    }
    Ok((colors, alg.finish()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn trigger_position() {
        // eps * delta = 2; node 0 gets its second edge at position 7.
        let stream = [
            (0, 1),
            (2, 3),
            (4, 5),
            (6, 7),
            (8, 9),
            (10, 11),
            (0, 2),
            (1, 3),
        ];
        let est = estimate_stage(&stream, 12, 0.5, 4);
        assert_eq!(est.t, 7);
        assert!(est.triggered);
        assert_eq!(est.d_t[0], 2);
        assert_eq!(est.colors.len(), 7);
    }

    #[test]
    fn short_stream_never_triggers() {
        let est = estimate_stage(&[(0, 1)], 3, 0.5, 4);
        assert!(!est.triggered);
        assert_eq!(est.t, 1);
    }

    #[test]
    fn m_prime_floor() {
        assert_eq!(m_prime(100, 0.1), 990);
    }

    #[test]
    fn dummy_counts() {
        assert_eq!(dummy_edge_count(0, 0.1, 100), 100);
        assert_eq!(dummy_edge_count(10, 0.1, 100), 10);
        assert_eq!(dummy_edge_count(20, 0.1, 100), 0);
    }

    #[test]
    fn gadget_edges_are_distinct_and_well_formed() {
        let g = build_dummy_gadget(&[0, 1, 3], 0.25, 5);
        // clique 10 per node, attachments 5, 2, 0
        assert_eq!(g.len(), 30 + 7);
        let edges: Vec<_> = g.edges().collect();
        let set: HashSet<_> = edges.iter().copied().collect();
        assert_eq!(set.len(), edges.len());
        for &(a, b) in &edges {
            assert!(a < b);
            assert!(b >= 3 && (b as usize) < g.node_count());
        }
        let mut deg = vec![0usize; g.node_count()];
        for &(a, b) in &edges {
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        assert_eq!(deg, g.h_degrees(&[0, 0, 0]));
        assert_eq!(&deg[..3], &[5, 2, 0]);
    }

    #[test]
    fn unrank_roundtrip() {
        let mut l = 0;
        for b in 1..60u64 {
            for a in 0..b {
                assert_eq!(unrank_pair(l), (a, b));
                l += 1;
            }
        }
    }

    #[test]
    fn interleaver_degenerate_cases() {
        let mut rng = rng_from_seed(0);
        let mut only_real = Interleaver::new(3, 0);
        for _ in 0..3 {
            assert_eq!(only_real.next(&mut rng), Some(Feed::Real));
        }
        assert_eq!(only_real.next(&mut rng), None);
        let mut only_dummy = Interleaver::new(0, 4);
        let mut seen = HashSet::new();
        while let Some(f) = only_dummy.next(&mut rng) {
            match f {
                Feed::Dummy(i) => assert!(seen.insert(i)),
                Feed::Real => panic!(),
            }
        }
        assert_eq!(seen.len(), 4);
    }
}
