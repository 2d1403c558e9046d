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

//! Dynamic versus fresh static colorings under matched rounds.
//!
//! After an update sequence the dynamic structure should hold a coloring
//! distributed exactly like the static nibble run on the final graph with
//! the same round of every edge. Each trial here draws both with
//! independent seeds and records, for every final edge in pair order, its
//! tentative color (0 for NULL and the last round) and failed flag.

use rand::Rng;

use crate::dynamic::{DynamicColoring, DynamicConfig, RoundAssignment};
use crate::error::Result;
use crate::generators::Update;
use crate::graph::{pair_key, Color, Graph, NodeId, NULL_COLOR};
use crate::rng::{derive_seed, rng_from_seed};

use super::distribution::{tv_distance, TvResult};

/// Per-edge `(tentative, failed)` in increasing pair-key order.
pub type Outcome = Vec<(Color, bool)>;

fn sorted_edges(g: &Graph) -> Vec<(NodeId, NodeId)> {
    let mut es: Vec<(NodeId, NodeId)> = g.edges().map(|(_, u, v)| (u.min(v), u.max(v))).collect();
    es.sort_unstable_by_key(|&(u, v)| pair_key(u, v));
    es
}

/// One static run: rounds `1..t_eps` in order, each edge drawing uniformly
/// from the colors not drawn by incident edges of earlier rounds.
pub fn static_outcome<R: Rng + ?Sized>(
    g: &Graph,
    rounds: &RoundAssignment,
    colors: usize,
    rng: &mut R,
) -> Outcome {
    let es = sorted_edges(g);
    let round: Vec<usize> = es.iter().map(|&(u, v)| rounds.round(u, v)).collect();
    let mut tc = vec![NULL_COLOR; es.len()];
    let index = |u: NodeId, v: NodeId| {
        es.binary_search_by_key(&pair_key(u.min(v), u.max(v)), |&(a, b)| pair_key(a, b))
            .expect("edge of g")
    };
    let incident = |i: usize| {
        let (u, v) = es[i];
        let mut out = Vec::new();
        for (a, b) in [(u, v), (v, u)] {
            for &(x, _) in g.neighbors(a) {
                if x != b {
                    out.push(index(a, x));
                }
            }
        }
        out
    };
    let nbrs: Vec<Vec<usize>> = (0..es.len()).map(incident).collect();
    for r in 1..rounds.t_eps() {
        for i in 0..es.len() {
            if round[i] != r {
                continue;
            }
            let mut free = vec![true; colors + 1];
            for &j in &nbrs[i] {
                if round[j] < r {
                    free[tc[j] as usize] = false;
                }
            }
            let palette: Vec<Color> = (1..=colors as Color)
                .filter(|&c| free[c as usize])
                .collect();
            if !palette.is_empty() {
                tc[i] = palette[rng.random_range(0..palette.len())];
            }
        }
    }
    (0..es.len())
        .map(|i| {
            let failed = round[i] < rounds.t_eps()
                && (tc[i] == NULL_COLOR
                    || nbrs[i]
                        .iter()
                        .any(|&j| round[j] == round[i] && tc[j] == tc[i]));
            (tc[i], failed)
        })
        .collect()
}

pub fn dynamic_outcome(s: &DynamicColoring) -> Outcome {
    sorted_edges(s.real_graph())
        .into_iter()
        .map(|(u, v)| {
            (
                s.tentative(u, v).expect("current edge"),
                s.is_failed(u, v).expect("current edge"),
            )
        })
        .collect()
}

/// Runs `trials` dynamic and static colorings and compares the joint
/// per-edge distributions. The gadget is switched off; `fixed` pins rounds
/// of chosen pairs, the rest follow the per-trial assignment.
pub fn equivalence_tv(
    cfg: &DynamicConfig,
    updates: &[Update],
    fixed: &[(NodeId, NodeId, usize)],
    trials: usize,
    seed: u64,
) -> Result<TvResult> {
    let mut cfg = cfg.clone();
    cfg.gadget = false;
    let t_eps = cfg.params()?.t_eps;
    let mut dynamic = Vec::with_capacity(trials);
    let mut fresh = Vec::with_capacity(trials);
    for t in 0..trials as u64 {
        cfg.seed = derive_seed(seed, &[t, 1]);
        let mut rounds = RoundAssignment::new(derive_seed(seed, &[t, 0]), cfg.epsilon, t_eps);
        for &(u, v, r) in fixed {
            rounds.set(u, v, r);
        }
        let mut s = DynamicColoring::with_rounds(cfg.clone(), rounds.clone())?;
        for &up in updates {
            s.apply(up)?;
        }
        dynamic.push(dynamic_outcome(&s));
        let mut rng = rng_from_seed(derive_seed(seed, &[t, 2]));
        fresh.push(static_outcome(
            s.real_graph(),
            &rounds,
            s.phase1_colors(),
            &mut rng,
        ));
    }
    tv_distance(&dynamic, &fresh)
}
