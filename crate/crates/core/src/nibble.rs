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

//! The offline two-phase algorithm.
//!
//! Phase one runs `t_eps - 1` rounds. In round `i` every still-unsampled edge
//! joins `S_i` with probability `eps`, each sampled edge draws a tentative
//! color uniformly from the colors of `[C]` not tentatively drawn at either
//! endpoint in earlier rounds, and an edge keeps its draw only if no other
//! round-`i` edge at either endpoint drew the same color. Draws of failed
//! edges still block their color for later rounds. Phase two colors the
//! failed and never-sampled edges first-fit from `C + 1` upwards.

use rand::seq::index::sample as sample_indices;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::colorset::{ColorMatrix, FirstFit};
use crate::error::{ColoringError, Result};
use crate::graph::{Color, EdgeColoring, EdgeId, Graph, NodeId, NULL_COLOR};
use crate::params::Params;
use crate::rng::{derive_seed, rng_from_seed};

/// Uniform draw from `palette`; NULL when it is empty.
pub fn tentative_color<R: Rng + ?Sized>(palette: &[Color], rng: &mut R) -> Color {
    if palette.is_empty() {
        NULL_COLOR
    } else {
        palette[rng.random_range(0..palette.len())]
    }
}

/// Mutable state of phase one between rounds.
#[derive(Debug, Clone)]
pub struct RoundState<'g> {
    graph: &'g Graph,
    colors: usize,
    round: usize,
    live: Vec<EdgeId>,
    sampled: Vec<EdgeId>,
    /// Round in which each edge was sampled; 0 while it is still live.
    sampled_in: Vec<u32>,
    tentative: Vec<Color>,
    failed: Vec<bool>,
    /// Colors drawn at each node by edges of rounds before `round`.
    blocked: ColorMatrix,
}

impl<'g> RoundState<'g> {
    /// State at the start of round 1: `E_1 = E`, all palettes full.
    pub fn new(graph: &'g Graph, phase1_colors: usize) -> Self {
        let bound = graph.edge_id_bound();
        RoundState {
            graph,
            colors: phase1_colors,
            round: 1,
            live: graph.edges().map(|(e, _, _)| e).collect(),
            sampled: Vec::new(),
            sampled_in: vec![0; bound],
            tentative: vec![NULL_COLOR; bound],
            failed: vec![false; bound],
            blocked: ColorMatrix::new(graph.node_count(), phase1_colors),
        }
    }

    pub fn round(&self) -> usize {
        self.round
    }

    /// `E_i`, ascending by edge id.
    pub fn live_edges(&self) -> &[EdgeId] {
        &self.live
    }

    /// `S_i` of the round in progress.
    pub fn sampled_edges(&self) -> &[EdgeId] {
        &self.sampled
    }

    pub fn sampled_in(&self, e: EdgeId) -> Option<usize> {
        match self.sampled_in[e as usize] {
            0 => None,
            r => Some(r as usize),
        }
    }

    pub fn tentative(&self, e: EdgeId) -> Color {
        self.tentative[e as usize]
    }

    pub fn is_failed(&self, e: EdgeId) -> bool {
        self.failed[e as usize]
    }

    /// Whether color `c` is still in `P_i(v)`.
    pub fn node_has_color(&self, v: NodeId, c: Color) -> bool {
        !self.blocked.contains(v, c)
    }

    pub fn node_palette_size(&self, v: NodeId) -> usize {
        self.colors - self.blocked.count(v)
    }

    fn ends(&self, e: EdgeId) -> (NodeId, NodeId) {
        self.graph.endpoints(e).expect("edge id of a current edge")
    }

    /// Each live edge joins `S_i` independently with probability `eps`; one
    /// draw per live edge in ascending id order.
    pub fn sample_round<R: Rng + ?Sized>(&mut self, epsilon: f64, rng: &mut R) -> &[EdgeId] {
        let mut keep = Vec::with_capacity(self.live.len());
        self.sampled.clear();
        for &e in &self.live {
            if rng.random_bool(epsilon) {
                self.sampled.push(e);
                self.sampled_in[e as usize] = self.round as u32;
            } else {
                keep.push(e);
            }
        }
        self.live = keep;
        &self.sampled
    }

    /// `P_i(e)`: `[C]` minus every color tentatively drawn at either endpoint
    /// of `e` in an earlier round, failed draws included.
    pub fn palette(&self, e: EdgeId) -> Vec<Color> {
        let (u, v) = self.ends(e);
        self.blocked.free_colors(u, v)
    }

    pub fn palette_size(&self, e: EdgeId) -> usize {
        let (u, v) = self.ends(e);
        self.blocked.count_free(u, v)
    }

    /// Tentative draws for all of `S_i`, ascending edge id.
    pub fn draw_tentative<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        for idx in 0..self.sampled.len() {
            let e = self.sampled[idx];
            let (u, v) = self.ends(e);
            let k = self.blocked.count_free(u, v);
            self.tentative[e as usize] = if k == 0 {
                NULL_COLOR
            } else {
                self.blocked
                    .nth_free(u, v, rng.random_range(0..k))
                    .expect("k-th free color exists")
            };
        }
    }

    /// Computes `F_i`, writes the final color of every successful edge into
    /// `coloring`, blocks every drawn color for later rounds and advances to
    /// round `i + 1`. Returns `F_i` ascending.
    pub fn resolve_failures(&mut self, coloring: &mut EdgeColoring) -> Vec<EdgeId> {
        let mut incidences: Vec<(NodeId, Color)> = Vec::with_capacity(2 * self.sampled.len());
        for &e in &self.sampled {
            let c = self.tentative[e as usize];
            if c != NULL_COLOR {
                let (u, v) = self.ends(e);
                incidences.push((u, c));
                incidences.push((v, c));
            }
        }
        incidences.sort_unstable();
        let clash = |x: (NodeId, Color)| {
            let lo = incidences.partition_point(|&y| y < x);
            incidences.get(lo + 1) == Some(&x)
        };
        let mut failed = Vec::new();
        for &e in &self.sampled {
            let c = self.tentative[e as usize];
            let (u, v) = self.ends(e);
            if c == NULL_COLOR || clash((u, c)) || clash((v, c)) {
                self.failed[e as usize] = true;
                failed.push(e);
            } else {
                coloring.set(e, c);
            }
        }
        for &(x, c) in &incidences {
            self.blocked.insert(x, c);
        }
        self.round += 1;
        failed
    }
}

/// Per-round raw samples used by the event checks in the harness.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RoundSamples {
    /// `|P_i(e)|` for sampled `e in E_i`.
    pub palette_sizes: Vec<usize>,
    /// `|N_{i,c}(v)|` for sampled `(v, c)` pairs.
    pub c_degrees: Vec<usize>,
    /// `|S_i cap N_{i,c}(v)| / |N_{i,c}(v)|` for the same pairs (when nonzero).
    pub c_sampled_fractions: Vec<f64>,
    /// `|S_i cap N_i(v)| / |N_i(v)|` for sampled nodes with `N_i(v)` nonempty.
    pub sampled_fractions: Vec<f64>,
    /// `|F_i cap N(v)| / |S_i cap N(v)|` for sampled nodes with sampled edges.
    pub failed_fractions: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundTrace {
    pub round: usize,
    pub live: usize,
    pub sampled: usize,
    pub failed: usize,
    pub palette_min: usize,
    pub palette_max: usize,
    pub palette_mean: f64,
    pub c_degree_min: usize,
    pub c_degree_max: usize,
    /// `Delta(G_{F_i})`.
    pub failed_max_degree: usize,
    pub samples: Option<RoundSamples>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseOneOptions {
    /// Reject inputs whose degrees leave `[(1-eps^2)D, (1+eps^2)D]`.
    pub strict_regularity: bool,
    /// Per-round cap on measured edges, nodes and `(v, c)` pairs.
    pub event_budget: usize,
    /// Keep the raw per-round samples in the trace.
    pub keep_samples: bool,
}

impl Default for PhaseOneOptions {
    fn default() -> Self {
        PhaseOneOptions {
            strict_regularity: false,
            event_budget: 10_000,
            keep_samples: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PhaseOneOutcome {
    pub partial: EdgeColoring,
    /// Edges of `G_F = (V, union F_i)`.
    pub failed_edges: Vec<EdgeId>,
    /// Edges of `G_{t_eps}` (never sampled).
    pub tail_edges: Vec<EdgeId>,
    pub trace: Vec<RoundTrace>,
}

fn check_regularity(g: &Graph, params: &Params) -> Result<()> {
    let eps2 = params.epsilon * params.epsilon;
    let lo = (1.0 - eps2) * params.delta as f64;
    let hi = (1.0 + eps2) * params.delta as f64;
    for v in 0..g.node_count() as NodeId {
        let d = g.degree(v);
        if (d as f64) < lo - 1e-9 || (d as f64) > hi + 1e-9 {
            return Err(ColoringError::DegreeOutOfRange {
                node: v,
                degree: d,
                lo,
                hi,
            });
        }
    }
    Ok(())
}

/// Runs phase one. All randomness of the algorithm comes from `rng`; event
/// sampling uses a separate stream derived from `trace_seed`, so enabling it
/// does not change the coloring.
pub fn run_phase_one<R: Rng + ?Sized>(
    g: &Graph,
    params: &Params,
    rng: &mut R,
    opts: &PhaseOneOptions,
    trace_seed: u64,
) -> Result<PhaseOneOutcome> {
    if opts.strict_regularity {
        check_regularity(g, params)?;
    }
    let mut state = RoundState::new(g, params.phase1_colors);
    let mut partial = EdgeColoring::for_graph(g);
    let mut failed_edges = Vec::new();
    let mut trace = Vec::with_capacity(params.phase_one_rounds());
    for i in 1..=params.phase_one_rounds() {
        let mut probe = rng_from_seed(derive_seed(trace_seed, &[i as u64]));
        let live_before = state.live_edges().to_vec();
        let palette_sample = sample_edges(&live_before, opts.event_budget, &mut probe);
        let palette_sizes: Vec<usize> = palette_sample
            .iter()
            .map(|&e| state.palette_size(e))
            .collect();

        state.sample_round(params.epsilon, rng);
        state.draw_tentative(rng);

        let mut samples = node_samples(&state, g, params, i, opts.event_budget, &mut probe);
        let failed = state.resolve_failures(&mut partial);
        // Failed fractions need F_i, which only exists after resolution.
        samples.failed_fractions = failed_fractions(&state, g, i, opts.event_budget, &mut probe);
        let failed_max_degree = {
            let mut deg = vec![0usize; g.node_count()];
            for &e in &failed {
                let (u, v) = g.endpoints(e).expect("current edge");
                deg[u as usize] += 1;
                deg[v as usize] += 1;
            }
            deg.into_iter().max().unwrap_or(0)
        };
        samples.palette_sizes = palette_sizes;
        trace.push(RoundTrace {
            round: i,
            live: live_before.len(),
            sampled: state.sampled_edges().len(),
            failed: failed.len(),
            palette_min: samples.palette_sizes.iter().copied().min().unwrap_or(0),
            palette_max: samples.palette_sizes.iter().copied().max().unwrap_or(0),
            palette_mean: mean_usize(&samples.palette_sizes),
            c_degree_min: samples.c_degrees.iter().copied().min().unwrap_or(0),
            c_degree_max: samples.c_degrees.iter().copied().max().unwrap_or(0),
            failed_max_degree,
            samples: opts.keep_samples.then_some(samples),
        });
        failed_edges.extend(failed);
    }
    failed_edges.sort_unstable();
    Ok(PhaseOneOutcome {
        partial,
        failed_edges,
        tail_edges: state.live_edges().to_vec(),
        trace,
    })
}

fn mean_usize(xs: &[usize]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<usize>() as f64 / xs.len() as f64
    }
}

fn sample_edges<R: Rng + ?Sized>(pool: &[EdgeId], budget: usize, rng: &mut R) -> Vec<EdgeId> {
    if pool.len() <= budget {
        pool.to_vec()
    } else {
        let mut idx = sample_indices(rng, pool.len(), budget).into_vec();
        idx.sort_unstable();
        idx.into_iter().map(|i| pool[i]).collect()
    }
}

fn sample_nodes<R: Rng + ?Sized>(n: usize, budget: usize, rng: &mut R) -> Vec<NodeId> {
    let all: Vec<EdgeId> = (0..n as NodeId).collect();
    sample_edges(&all, budget, rng)
}

/// Node and `(v, c)` statistics of round `i`, measured after sampling and
/// before `blocked` absorbs this round's draws.
fn node_samples<R: Rng + ?Sized>(
    state: &RoundState<'_>,
    g: &Graph,
    params: &Params,
    round: usize,
    budget: usize,
    rng: &mut R,
) -> RoundSamples {
    let mut out = RoundSamples::default();
    let in_round = |e: EdgeId| match state.sampled_in(e) {
        None => Some(false),
        Some(r) if r == round => Some(true),
        Some(_) => None,
    };
    for v in sample_nodes(g.node_count(), budget, rng) {
        let mut live = 0usize;
        let mut sampled = 0usize;
        for &(_, e) in g.neighbors(v) {
            if let Some(s) = in_round(e) {
                live += 1;
                sampled += s as usize;
            }
        }
        if live > 0 {
            out.sampled_fractions.push(sampled as f64 / live as f64);
        }
    }
    let colors = params.phase1_colors as u64;
    if colors == 0 || g.node_count() == 0 {
        return out;
    }
    for _ in 0..budget {
        let v = rng.random_range(0..g.node_count() as NodeId);
        let c = rng.random_range(1..=colors) as Color;
        let mut cdeg = 0usize;
        let mut sampled = 0usize;
        for &(u, e) in g.neighbors(v) {
            if let Some(s) = in_round(e) {
                if state.node_has_color(u, c) {
                    cdeg += 1;
                    sampled += s as usize;
                }
            }
        }
        out.c_degrees.push(cdeg);
        if cdeg > 0 {
            out.c_sampled_fractions.push(sampled as f64 / cdeg as f64);
        }
    }
    out
}

fn failed_fractions<R: Rng + ?Sized>(
    state: &RoundState<'_>,
    g: &Graph,
    round: usize,
    budget: usize,
    rng: &mut R,
) -> Vec<f64> {
    let mut out = Vec::new();
    for v in sample_nodes(g.node_count(), budget, rng) {
        let mut sampled = 0usize;
        let mut failed = 0usize;
        for &(_, e) in g.neighbors(v) {
            if state.sampled_in(e) == Some(round) {
                sampled += 1;
                failed += state.is_failed(e) as usize;
            }
        }
        if sampled > 0 {
            out.push(failed as f64 / sampled as f64);
        }
    }
    out
}

/// Greedy phase: first-fit over the uncolored edges, ascending id, using only
/// colors above `phase1_colors`.
pub fn run_phase_two(
    g: &Graph,
    partial: &EdgeColoring,
    failed_edges: &[EdgeId],
    tail_edges: &[EdgeId],
    phase1_colors: usize,
) -> EdgeColoring {
    let mut out = partial.clone();
    let mut uncolored: Vec<EdgeId> = failed_edges.iter().chain(tail_edges).copied().collect();
    uncolored.sort_unstable();
    let mut ff = FirstFit::new(g.node_count());
    for e in uncolored {
        let (u, v) = g.endpoints(e).expect("current edge");
        out.set(e, ff.assign(u, v, phase1_colors as Color));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasicMetrics {
    pub phase1_colors: usize,
    pub colors_used: usize,
    pub max_color: Color,
    /// `Delta(G_{t_eps} cup G_F)`.
    pub uncolored_max_degree: usize,
    /// Largest color of phase one (0 if nothing was colored there).
    pub phase_one_max: Color,
    /// Smallest color of phase two (0 if phase two colored nothing).
    pub phase_two_min: Color,
    pub phase_one_colored_fraction: f64,
    /// `|F_i| / |S_i|` per round (0 when nothing was sampled).
    pub failure_fractions: Vec<f64>,
    pub trace: Vec<RoundTrace>,
}

/// Both phases end to end.
pub fn run_basic<R: Rng + ?Sized>(
    g: &Graph,
    params: &Params,
    rng: &mut R,
    opts: &PhaseOneOptions,
    trace_seed: u64,
) -> Result<(EdgeColoring, BasicMetrics)> {
    let one = run_phase_one(g, params, rng, opts, trace_seed)?;
    let coloring = run_phase_two(
        g,
        &one.partial,
        &one.failed_edges,
        &one.tail_edges,
        params.phase1_colors,
    );
    let mut uncolored = vec![false; g.edge_id_bound()];
    for &e in one.failed_edges.iter().chain(&one.tail_edges) {
        uncolored[e as usize] = true;
    }
    let uncolored_max_degree = g.max_degree_of(|e| uncolored[e as usize]);
    let c = params.phase1_colors as Color;
    let mut phase_one_max = 0;
    let mut phase_two_min = 0;
    for (e, _, _) in g.edges() {
        let col = coloring.get(e);
        if uncolored[e as usize] {
            if phase_two_min == 0 || col < phase_two_min {
                phase_two_min = col;
            }
        } else {
            phase_one_max = phase_one_max.max(col);
        }
    }
    let m = g.edge_count();
    let colored_in_one = m - one.failed_edges.len() - one.tail_edges.len();
    let metrics = BasicMetrics {
        phase1_colors: c as usize,
        colors_used: coloring.distinct_colors(g),
        max_color: coloring.max_color(g),
        uncolored_max_degree,
        phase_one_max,
        phase_two_min,
        phase_one_colored_fraction: if m == 0 {
            0.0
        } else {
            colored_in_one as f64 / m as f64
        },
        failure_fractions: one
            .trace
            .iter()
            .map(|t| {
                if t.sampled == 0 {
                    0.0
                } else {
                    t.failed as f64 / t.sampled as f64
                }
            })
            .collect(),
        trace: one.trace,
    };
    Ok((coloring, metrics))
}
