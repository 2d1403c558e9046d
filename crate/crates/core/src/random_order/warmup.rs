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

use super::sampler::binomial_prefix_partition;
use crate::baselines::{run_online, OnlineColorer};
use crate::colorset::{ColorMatrix, FirstFit};
use crate::error::{ColoringError, Result};
use crate::graph::{Color, NodeId, NULL_COLOR};
use crate::params::Params;
use crate::rng::{derive_seed, rng_from_seed, RunRng};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WarmupMetrics {
    pub phase1_colors: usize,
    pub rounds: usize,
    pub boundaries: Vec<usize>,
    /// Edges that kept their tentative color.
    pub tentative_edges: usize,
    /// Edges sent to the greedy band because the draw was NULL.
    pub null_edges: usize,
    /// Edges sent to the greedy band by a same-round clash.
    pub conflict_edges: usize,
    /// Edges after the last boundary.
    pub tail_edges: usize,
    pub max_tentative_color: Color,
    pub min_greedy_color: Option<Color>,
    pub max_color: Color,
    /// Distinct colors in `[1, C]` and above `C`.
    pub tentative_band_colors: usize,
    pub greedy_band_colors: usize,
    /// Degree range of the streamed graph; the algorithm assumes it is close
    /// to `delta` but does not enforce it.
    pub min_degree: usize,
    pub max_degree: usize,
    pub near_regular: bool,
}

/// One arrival as seen by the warm-up algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WarmupDecision {
    /// Round of the arrival, or `rounds + 1` after the last boundary.
    pub round: usize,
    pub tentative: Color,
    pub color: Color,
}

/// The near-regular random-order algorithm.
///
/// Arrival `p` (1-based) belongs to round `i` when `b_{i-1} < p <= b_i`.
/// Every color drawn in a round blocks that color at both endpoints for all
/// later rounds, whether or not the edge kept it.
#[derive(Debug, Clone)]
pub struct WarmupOnline {
    colors: usize,
    boundaries: Vec<usize>,
    arrivals: usize,
    round: usize,
    prev: ColorMatrix,
    cur: ColorMatrix,
    overflow: FirstFit,
    rng: RunRng,
    metrics: WarmupMetrics,
    last: Option<WarmupDecision>,
}

impl WarmupOnline {
    /// `m` is the declared stream length. Round cut points and all draws come
    /// from `seed`.
    pub fn new(node_count: usize, params: &Params, m: usize, seed: u64) -> Self {
        let mut cut_rng = rng_from_seed(derive_seed(seed, &[0x5a3]));
        let rounds = params.phase_one_rounds();
        let boundaries = binomial_prefix_partition(m, params.epsilon, rounds, &mut cut_rng);
        let colors = params.phase1_colors;
        WarmupOnline {
            colors,
            boundaries: boundaries.clone(),
            arrivals: 0,
            round: 1,
            prev: ColorMatrix::new(node_count, colors),
            cur: ColorMatrix::new(node_count, colors),
            overflow: FirstFit::new(node_count),
            rng: rng_from_seed(derive_seed(seed, &[0x5a4])),
            metrics: WarmupMetrics {
                phase1_colors: colors,
                rounds,
                boundaries,
                ..Default::default()
            },
            last: None,
        }
    }

    pub fn phase1_colors(&self) -> usize {
        self.colors
    }

    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    pub fn arrivals(&self) -> usize {
        self.arrivals
    }

    pub fn metrics(&self) -> &WarmupMetrics {
        &self.metrics
    }

    /// Details of the most recent arrival.
    pub fn last_decision(&self) -> Option<WarmupDecision> {
        self.last
    }

    fn advance_round(&mut self, position: usize) {
        while self.round <= self.boundaries.len() && position > self.boundaries[self.round - 1] {
            self.prev.absorb(&mut self.cur);
            self.round += 1;
        }
    }

    fn greedy(&mut self, u: NodeId, v: NodeId) -> Color {
        let c = self.overflow.assign(u, v, self.colors as Color);
        let m = &mut self.metrics;
        m.min_greedy_color = Some(m.min_greedy_color.map_or(c, |x| x.min(c)));
        c
    }
}

impl OnlineColorer for WarmupOnline {
    fn process(&mut self, u: NodeId, v: NodeId) -> Color {
        self.arrivals += 1;
        self.advance_round(self.arrivals);
        let round = self.round;
        if round > self.boundaries.len() {
            self.metrics.tail_edges += 1;
            let c = self.greedy(u, v);
            self.last = Some(WarmupDecision {
                round,
                tentative: NULL_COLOR,
                color: c,
            });
            self.metrics.max_color = self.metrics.max_color.max(c);
            return c;
        }
        let k = self.prev.count_free(u, v);
        let tentative = if k == 0 {
            NULL_COLOR
        } else {
            let j = self.rng.random_range(0..k);
            self.prev.nth_free(u, v, j).expect("k free colors")
        };
        let color = if tentative == NULL_COLOR {
            self.metrics.null_edges += 1;
            self.greedy(u, v)
        } else {
            let clash = self.cur.contains(u, tentative) || self.cur.contains(v, tentative);
            self.cur.insert(u, tentative);
            self.cur.insert(v, tentative);
            if clash {
                self.metrics.conflict_edges += 1;
                self.greedy(u, v)
            } else {
                self.metrics.tentative_edges += 1;
                self.metrics.max_tentative_color = self.metrics.max_tentative_color.max(tentative);
                tentative
            }
        };
        self.metrics.max_color = self.metrics.max_color.max(color);
        self.last = Some(WarmupDecision {
            round,
            tentative,
            color,
        });
        color
    }
}

/// Colors `stream` (of declared length `m`) with the warm-up algorithm.
pub fn run_warmup<R: RngCore + ?Sized>(
    stream: &[(NodeId, NodeId)],
    n: usize,
    delta: usize,
    m: usize,
    epsilon: f64,
    k: u32,
    rng: &mut R,
) -> Result<(Vec<Color>, WarmupMetrics)> {
    if stream.len() != m {
        return Err(ColoringError::StreamLengthMismatch {
            expected: m,
            actual: stream.len(),
        });
    }
    let params = Params::derive(n, delta, epsilon, k)?;
    run_warmup_with(stream, n, &params, rng.next_u64())
}

/// [`run_warmup`] with explicit parameters and seed.
pub fn run_warmup_with(
    stream: &[(NodeId, NodeId)],
    n: usize,
    params: &Params,
    seed: u64,
) -> Result<(Vec<Color>, WarmupMetrics)> {
    let mut degree = vec![0usize; n];
    for &(u, v) in stream {
        for x in [u, v] {
            let d = degree
                .get_mut(x as usize)
                .ok_or(ColoringError::NodeOutOfRange {
                    node: x,
                    node_count: n,
                })?;
            *d += 1;
        }
    }
    let mut alg = WarmupOnline::new(n, params, stream.len(), seed);
    let colors = run_online(&mut alg, stream);
    let mut metrics = alg.metrics.clone();
    let c = params.phase1_colors as Color;
    let mut seen: Vec<Color> = colors.clone();
    seen.sort_unstable();
    seen.dedup();
    metrics.tentative_band_colors = seen.iter().filter(|&&x| x <= c).count();
    metrics.greedy_band_colors = seen.len() - metrics.tentative_band_colors;
    metrics.min_degree = degree.iter().copied().min().unwrap_or(0);
    metrics.max_degree = degree.iter().copied().max().unwrap_or(0);
    let e2 = params.epsilon * params.epsilon;
    let d = params.delta as f64;
    metrics.near_regular = degree
        .iter()
        .all(|&x| (x as f64) >= (1.0 - e2) * d - 1e-9 && (x as f64) <= (1.0 + e2) * d + 1e-9);
    Ok((colors, metrics))
}
