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

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use super::gadget::Gadget;
use super::rounds::RoundAssignment;
use super::simple_color::SimpleColor;
use super::tentative::{draw, tentatively_color};
use crate::colorset::Palette;
use crate::error::{ColoringError, Result};
use crate::generators::Update;
use crate::graph::{
    pair_key, unpack_pair, verify_proper_coloring, Color, ColoringReport, EdgeColoring, EdgeId,
    Graph, NodeId, NULL_COLOR,
};
use crate::params::Params;
use crate::rng::keyed_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    /// Revisit only edges whose palette can have changed.
    Cone,
    /// Revisit every current edge of every round.
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicConfig {
    pub n: usize,
    pub delta: usize,
    pub epsilon: f64,
    pub k: u32,
    /// Overrides the derived round count.
    pub t_eps: Option<usize>,
    pub gadget: bool,
    pub mode: SweepMode,
    /// Assert local properness and the per-update recourse bound.
    pub check: bool,
    pub seed: u64,
}

impl DynamicConfig {
    pub fn new(n: usize, delta: usize, epsilon: f64, k: u32, seed: u64) -> Self {
        DynamicConfig {
            n,
            delta,
            epsilon,
            k,
            t_eps: None,
            gadget: true,
            mode: SweepMode::Cone,
            check: false,
            seed,
        }
    }

    pub fn params(&self) -> Result<Params> {
        let nodes = if self.gadget {
            self.n * (self.delta + 1)
        } else {
            self.n
        };
        match self.t_eps {
            Some(t) => Params::custom(nodes, self.delta, self.epsilon, self.k, t),
            None => Params::derive(nodes, self.delta, self.epsilon, self.k),
        }
    }
}

/// Outcome of one update of the padded graph.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StepReport {
    /// Entry `i - 1`: edges of round `i` whose tentative color changed.
    pub dirty_per_round: Vec<usize>,
    /// Current edges other than the updated one whose failed flag flipped.
    pub failed_flips: usize,
    pub simplecolor_events: usize,
    /// Edges other than the updated one whose final color changed.
    pub recourse: usize,
    #[serde(skip)]
    pub changes: Vec<(u64, Color, Color)>,
    #[serde(skip)]
    pub pair: u64,
}

impl StepReport {
    pub fn dirty(&self) -> usize {
        self.dirty_per_round.iter().sum()
    }
}

/// Outcome of one real update.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct UpdateReport {
    pub t: usize,
    pub op: String,
    /// Real edges, present before and after, whose color changed.
    pub recourse: usize,
    /// Same count for gadget edges.
    pub dummy_recourse: usize,
    pub dirty_per_round: Vec<usize>,
    pub simplecolor_events: usize,
    pub colors_in_use: usize,
    pub changed_edges: Vec<(NodeId, NodeId)>,
    /// Reports of the underlying padded-graph updates.
    #[serde(skip)]
    pub steps: Vec<StepReport>,
}

/// The updated edge of a step.
#[derive(Debug, Clone, Copy)]
struct Star {
    id: EdgeId,
    u: NodeId,
    v: NodeId,
    round: usize,
    insert: bool,
    /// Tentative color: drawn for an insertion, the last one for a deletion.
    tc: Color,
}

/// Fully dynamic edge coloring with low recourse.
///
/// Every pair has a fixed round. Edges of rounds below `t_eps` hold a
/// tentative color drawn from their palette, which excludes colors of
/// incident edges from earlier rounds; after each update the affected
/// tentative colors are patched with [`tentatively_color`]. Edges that clash
/// within their round, drew NULL, or sit in the last round are colored by
/// [`SimpleColor`] above the palette.
pub struct DynamicColoring {
    cfg: DynamicConfig,
    colors: usize,
    t_eps: usize,
    rounds: RoundAssignment,
    graph: Graph,
    real: Graph,
    gadget: Option<Gadget>,
    round: Vec<u16>,
    tc: Vec<Color>,
    failed: Vec<bool>,
    fin: EdgeColoring,
    sc: SimpleColor,
    in_use: FxHashMap<Color, usize>,
    time: u64,
    real_time: usize,
}

impl DynamicColoring {
    pub fn new(cfg: DynamicConfig) -> Result<Self> {
        let rounds = RoundAssignment::new(cfg.seed, cfg.epsilon, cfg.params()?.t_eps);
        Self::with_rounds(cfg, rounds)
    }

    /// Uses an explicit round assignment; its `t_eps` wins over the config.
    pub fn with_rounds(cfg: DynamicConfig, rounds: RoundAssignment) -> Result<Self> {
        let mut cfg = cfg;
        cfg.t_eps = Some(rounds.t_eps());
        let params = cfg.params()?;
        let colors = params.phase1_colors;
        let (graph, real, gadget) = if cfg.gadget {
            let gad = Gadget::new(cfg.n, cfg.delta);
            let g = Graph::unbounded(gad.node_count(), cfg.delta + 1);
            (g, Graph::unbounded(cfg.n, cfg.delta), Some(gad))
        } else {
            (Graph::new(cfg.n, cfg.delta), Graph::new(0, cfg.delta), None)
        };
        let nodes = graph.node_count();
        let mut s = DynamicColoring {
            t_eps: params.t_eps,
            cfg,
            colors,
            rounds,
            graph,
            real,
            gadget,
            round: Vec::new(),
            tc: Vec::new(),
            failed: Vec::new(),
            fin: EdgeColoring::new(0),
            sc: SimpleColor::new(nodes, colors as Color),
            in_use: FxHashMap::default(),
            time: 0,
            real_time: 0,
        };
        if let Some(gad) = &s.gadget {
            let edges = gad.initial_edges();
            s.initialize(&edges)?;
        }
        Ok(s)
    }

    /// Colors a starting graph from scratch, as the offline algorithm would
    /// with the fixed rounds.
    fn initialize(&mut self, edges: &[(NodeId, NodeId)]) -> Result<()> {
        let mut by_round: Vec<Vec<EdgeId>> = vec![Vec::new(); self.t_eps + 1];
        for &(u, v) in edges {
            let id = self.graph.insert_edge(u, v)?;
            let r = self.rounds.round(u, v);
            self.reset_slot(id, r);
            by_round[r].push(id);
        }
        for (i, ids) in by_round.iter().enumerate().take(self.t_eps).skip(1) {
            for &e in ids {
                let (a, b) = self.graph.endpoints(e).unwrap();
                let p = self.palette_now(e, a, b, i);
                let mut rng = keyed_rng(self.cfg.seed, &[0xa192, 0, pair_key(a, b)]);
                self.tc[e as usize] = draw(&p, &mut rng);
            }
        }
        let mut gu = Vec::new();
        for ids in &by_round[1..] {
            for &e in ids {
                let (a, b) = self.graph.endpoints(e).unwrap();
                let f = self.compute_failed(e, a, b);
                self.failed[e as usize] = f;
                if self.in_gu(e) {
                    gu.push((pair_key(a, b), e));
                } else {
                    self.set_final(e, self.tc[e as usize]);
                }
            }
        }
        gu.sort_unstable();
        for (key, e) in gu {
            let (a, b) = unpack_pair(key);
            let c = self.sc.insert(e, a, b);
            self.set_final(e, c);
        }
        Ok(())
    }

    pub fn config(&self) -> &DynamicConfig {
        &self.cfg
    }

    pub fn phase1_colors(&self) -> usize {
        self.colors
    }

    pub fn t_eps(&self) -> usize {
        self.t_eps
    }

    /// The padded graph (the real graph when the gadget is off).
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn real_graph(&self) -> &Graph {
        if self.gadget.is_some() {
            &self.real
        } else {
            &self.graph
        }
    }

    pub fn coloring(&self) -> &EdgeColoring {
        &self.fin
    }

    pub fn simple_color(&self) -> &SimpleColor {
        &self.sc
    }

    pub fn is_real(&self, u: NodeId, v: NodeId) -> bool {
        self.gadget
            .as_ref()
            .is_none_or(|g| !g.is_dummy(u) && !g.is_dummy(v))
    }

    pub fn round_of(&self, u: NodeId, v: NodeId) -> usize {
        self.rounds.round(u, v)
    }

    fn id(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        self.graph.edge_id(u, v)
    }

    /// Tentative color of a current edge (NULL for last-round edges).
    pub fn tentative(&self, u: NodeId, v: NodeId) -> Option<Color> {
        self.id(u, v).map(|e| self.tc[e as usize])
    }

    pub fn is_failed(&self, u: NodeId, v: NodeId) -> Option<bool> {
        self.id(u, v).map(|e| self.failed[e as usize])
    }

    /// Whether a current edge is colored by the fallback.
    pub fn in_fallback(&self, u: NodeId, v: NodeId) -> Option<bool> {
        self.id(u, v).map(|e| self.in_gu(e))
    }

    pub fn final_color(&self, u: NodeId, v: NodeId) -> Option<Color> {
        self.id(u, v).map(|e| self.fin.get(e))
    }

    pub fn colors_in_use(&self) -> usize {
        self.in_use.len()
    }

    /// Full properness check of the padded graph.
    pub fn verify(&self) -> ColoringReport {
        verify_proper_coloring(&self.graph, &self.fin, true)
    }

    /// Whether every tentative-band color is at most `C` and every fallback
    /// color above it.
    pub fn bands_ok(&self) -> bool {
        self.graph.edges().all(|(e, _, _)| {
            let c = self.fin.get(e) as usize;
            if self.in_gu(e) {
                c > self.colors
            } else {
                c >= 1 && c <= self.colors
            }
        })
    }

    fn reset_slot(&mut self, id: EdgeId, round: usize) {
        let i = id as usize;
        if i >= self.round.len() {
            self.round.resize(i + 1, 0);
            self.tc.resize(i + 1, NULL_COLOR);
            self.failed.resize(i + 1, false);
        }
        self.round[i] = round as u16;
        self.tc[i] = NULL_COLOR;
        self.failed[i] = false;
        self.fin.set(id, NULL_COLOR);
    }

    fn set_final(&mut self, e: EdgeId, c: Color) {
        let old = self.fin.get(e);
        if old == c {
            return;
        }
        if old != NULL_COLOR {
            let n = self.in_use.get_mut(&old).expect("counted color");
            *n -= 1;
            if *n == 0 {
                self.in_use.remove(&old);
            }
        }
        if c != NULL_COLOR {
            *self.in_use.entry(c).or_insert(0) += 1;
        }
        self.fin.set(e, c);
    }

    fn in_gu(&self, e: EdgeId) -> bool {
        self.round[e as usize] as usize >= self.t_eps || self.failed[e as usize]
    }

    fn palette_now(&self, e: EdgeId, a: NodeId, b: NodeId, i: usize) -> Palette {
        let mut p = Palette::full(self.colors);
        for x in [a, b] {
            for &(_, f) in self.graph.neighbors(x) {
                if f != e && (self.round[f as usize] as usize) < i {
                    p.remove(self.tc[f as usize]);
                }
            }
        }
        p
    }

    /// Palette before the current step: undoes tentative changes recorded in
    /// `old` and the presence change of `star`.
    fn palette_prev(
        &self,
        e: EdgeId,
        a: NodeId,
        b: NodeId,
        i: usize,
        old: &FxHashMap<EdgeId, Color>,
        star: &Star,
    ) -> Palette {
        let mut p = Palette::full(self.colors);
        for x in [a, b] {
            for &(_, f) in self.graph.neighbors(x) {
                if f == e || (star.insert && f == star.id) {
                    continue;
                }
                if (self.round[f as usize] as usize) < i {
                    p.remove(old.get(&f).copied().unwrap_or(self.tc[f as usize]));
                }
            }
        }
        if !star.insert && star.round < i && [star.u, star.v].iter().any(|&x| x == a || x == b) {
            p.remove(star.tc);
        }
        p
    }

    fn compute_failed(&self, e: EdgeId, a: NodeId, b: NodeId) -> bool {
        let c = self.tc[e as usize];
        if c == NULL_COLOR {
            return true;
        }
        let r = self.round[e as usize];
        [a, b].iter().any(|&x| {
            self.graph
                .neighbors(x)
                .iter()
                .any(|&(_, f)| f != e && self.round[f as usize] == r && self.tc[f as usize] == c)
        })
    }

    /// Applies one real update (three padded-graph updates with the gadget).
    pub fn apply(&mut self, update: Update) -> Result<UpdateReport> {
        let (u, v) = update.endpoints();
        let steps = if let Some(gad) = self.gadget.as_mut() {
            if update.is_insert() {
                if self.real.has_edge(u, v) {
                    return Err(ColoringError::DuplicateEdge(u, v));
                }
            } else if !self.real.has_edge(u, v) {
                return Err(ColoringError::MissingEdge(u, v));
            }
            let wrapped = gad.wrap(update)?;
            match update {
                Update::Insert(..) => self.real.insert_edge(u, v)?,
                Update::Delete(..) => self.real.delete_edge(u, v)?,
            };
            wrapped
        } else {
            vec![update]
        };
        self.real_time += 1;
        let mut report = UpdateReport {
            t: self.real_time,
            op: format!("{} {} {}", if update.is_insert() { '+' } else { '-' }, u, v),
            dirty_per_round: vec![0; self.t_eps.saturating_sub(1)],
            ..Default::default()
        };
        for step in steps {
            let s = self.apply_step(step)?;
            for (acc, d) in report.dirty_per_round.iter_mut().zip(&s.dirty_per_round) {
                *acc += d;
            }
            report.simplecolor_events += s.simplecolor_events;
            report.steps.push(s);
        }
        // Net change over the whole update, for edges present before and after.
        let stars: FxHashSet<u64> = report.steps.iter().map(|s| s.pair).collect();
        let mut net: FxHashMap<u64, (Color, Color)> = FxHashMap::default();
        for s in &report.steps {
            for &(key, old, new) in &s.changes {
                net.entry(key).or_insert((old, new)).1 = new;
            }
        }
        let mut changed: Vec<u64> = net
            .iter()
            .filter(|(k, (a, b))| a != b && !stars.contains(k))
            .map(|(k, _)| *k)
            .collect();
        changed.sort_unstable();
        for key in changed {
            let (a, b) = unpack_pair(key);
            if self.is_real(a, b) {
                report.recourse += 1;
                report.changed_edges.push((a, b));
            } else {
                report.dummy_recourse += 1;
            }
        }
        report.colors_in_use = self.colors_in_use();
        Ok(report)
    }

    /// Applies one update of the padded graph directly.
    pub fn apply_step(&mut self, update: Update) -> Result<StepReport> {
        let (u, v) = update.endpoints();
        self.time += 1;
        let t = self.time;
        let key = pair_key(u, v);
        let star = if update.is_insert() {
            let id = self.graph.insert_edge(u, v)?;
            let r = self.rounds.round(u, v);
            self.reset_slot(id, r);
            if r < self.t_eps {
                let p = self.palette_now(id, u, v, r);
                let mut rng = keyed_rng(self.cfg.seed, &[0xa192, t, key]);
                self.tc[id as usize] = draw(&p, &mut rng);
            }
            Star {
                id,
                u,
                v,
                round: r,
                insert: true,
                tc: self.tc[id as usize],
            }
        } else {
            let id = self.graph.delete_edge(u, v)?;
            Star {
                id,
                u,
                v,
                round: self.round[id as usize] as usize,
                insert: false,
                tc: self.tc[id as usize],
            }
        };
        let mut report = StepReport {
            dirty_per_round: vec![0; self.t_eps.saturating_sub(1)],
            pair: key,
            ..Default::default()
        };

        // Step I: patch tentative colors round by round.
        let mut old_tc: FxHashMap<EdgeId, Color> = FxHashMap::default();
        let mut order: Vec<EdgeId> = Vec::new();
        match self.cfg.mode {
            SweepMode::Cone => {
                let mut touched: Vec<NodeId> = Vec::new();
                if star.round < self.t_eps && star.tc != NULL_COLOR {
                    touched.extend([u, v]);
                }
                for i in star.round + 1..self.t_eps {
                    if touched.is_empty() {
                        break;
                    }
                    let mut cand: Vec<EdgeId> = Vec::new();
                    for &x in &touched {
                        for &(_, f) in self.graph.neighbors(x) {
                            if self.round[f as usize] as usize == i
                                && !(star.insert && f == star.id)
                            {
                                cand.push(f);
                            }
                        }
                    }
                    cand.sort_unstable();
                    cand.dedup();
                    let mut fresh = Vec::new();
                    for f in cand {
                        if self.retint(f, i, t, &mut old_tc, &star) {
                            report.dirty_per_round[i - 1] += 1;
                            order.push(f);
                            let (a, b) = self.graph.endpoints(f).unwrap();
                            fresh.extend([a, b]);
                        }
                    }
                    touched.extend(fresh);
                    touched.sort_unstable();
                    touched.dedup();
                }
            }
            SweepMode::Full => {
                let mut by_round: Vec<Vec<EdgeId>> = vec![Vec::new(); self.t_eps];
                for (f, _, _) in self.graph.edges() {
                    let r = self.round[f as usize] as usize;
                    if r < self.t_eps && !(star.insert && f == star.id) {
                        by_round[r].push(f);
                    }
                }
                for (i, ids) in by_round.iter().enumerate().skip(1) {
                    for &f in ids {
                        if self.retint(f, i, t, &mut old_tc, &star) {
                            report.dirty_per_round[i - 1] += 1;
                            order.push(f);
                        }
                    }
                }
            }
        }

        // Step II: failed flags.
        let mut recheck: Vec<EdgeId> = Vec::new();
        match self.cfg.mode {
            SweepMode::Cone => {
                let mut seeds: Vec<(NodeId, NodeId, usize)> = order
                    .iter()
                    .map(|&f| {
                        let (a, b) = self.graph.endpoints(f).unwrap();
                        (a, b, self.round[f as usize] as usize)
                    })
                    .collect();
                recheck.extend(order.iter().copied());
                if star.round < self.t_eps {
                    seeds.push((u, v, star.round));
                }
                for (a, b, r) in seeds {
                    for x in [a, b] {
                        for &(_, f) in self.graph.neighbors(x) {
                            if self.round[f as usize] as usize == r {
                                recheck.push(f);
                            }
                        }
                    }
                }
            }
            SweepMode::Full => {
                recheck.extend(
                    self.graph
                        .edges()
                        .map(|(f, _, _)| f)
                        .filter(|&f| (self.round[f as usize] as usize) < self.t_eps),
                );
            }
        }
        recheck.sort_unstable();
        recheck.dedup();
        let mut flipped: Vec<EdgeId> = Vec::new();
        for f in recheck {
            let (a, b) = self.graph.endpoints(f).unwrap();
            let now = self.compute_failed(f, a, b);
            if now != self.failed[f as usize] {
                self.failed[f as usize] = now;
                if !(star.insert && f == star.id) {
                    flipped.push(f);
                }
            }
        }
        report.failed_flips = flipped.len();

        // Step III: final colors and the fallback subgraph. Removals first.
        let mut touched: Vec<EdgeId> = order.clone();
        touched.extend(flipped.iter().copied());
        touched.sort_unstable();
        touched.dedup();
        let before: Vec<Color> = touched.iter().map(|&f| self.fin.get(f)).collect();
        let mut events = 0usize;
        if !star.insert {
            if self.sc.remove(star.id).is_some() {
                events += 1;
            }
            self.set_final(star.id, NULL_COLOR);
        }
        let mut entering: Vec<(u64, EdgeId)> = Vec::new();
        for &f in &touched {
            let (a, b) = self.graph.endpoints(f).unwrap();
            if self.in_gu(f) {
                if !self.sc.contains(f) {
                    entering.push((pair_key(a, b), f));
                }
            } else {
                if self.sc.remove(f).is_some() {
                    events += 1;
                }
                self.set_final(f, self.tc[f as usize]);
            }
        }
        if star.insert {
            if self.in_gu(star.id) {
                entering.push((key, star.id));
            } else {
                self.set_final(star.id, self.tc[star.id as usize]);
            }
        }
        entering.sort_unstable();
        for (k, f) in entering {
            let (a, b) = unpack_pair(k);
            let c = self.sc.insert(f, a, b);
            events += 1;
            self.set_final(f, c);
        }
        report.simplecolor_events = events;
        for (&f, &old) in touched.iter().zip(&before) {
            let new = self.fin.get(f);
            if new != old {
                report.recourse += 1;
                let (a, b) = self.graph.endpoints(f).unwrap();
                report.changes.push((pair_key(a, b), old, new));
            }
        }

        if self.cfg.check {
            let d = report.dirty();
            assert!(
                report.failed_flips <= 4 * (d + 1),
                "{} failed-flag flips with {} dirty edges",
                report.failed_flips,
                d
            );
            assert!(
                report.recourse <= 4 * (d + 1) + report.simplecolor_events,
                "recourse {} with {} dirty edges and {} fallback events",
                report.recourse,
                d,
                report.simplecolor_events
            );
            let mut probe = touched;
            if star.insert {
                probe.push(star.id);
            }
            for f in probe {
                self.assert_locally_proper(f);
            }
        }
        Ok(report)
    }

    /// Reruns the tentative coloring of `f` (round `i`) if its palette moved.
    fn retint(
        &mut self,
        f: EdgeId,
        i: usize,
        t: u64,
        old_tc: &mut FxHashMap<EdgeId, Color>,
        star: &Star,
    ) -> bool {
        let (a, b) = self.graph.endpoints(f).unwrap();
        let prev = self.palette_prev(f, a, b, i, old_tc, star);
        let now = self.palette_now(f, a, b, i);
        if prev == now {
            return false;
        }
        let mut rng = keyed_rng(self.cfg.seed, &[0xa192, t, pair_key(a, b)]);
        let c_prev = self.tc[f as usize];
        let c = tentatively_color(c_prev, &prev, &now, &mut rng);
        if c == c_prev {
            return false;
        }
        old_tc.insert(f, c_prev);
        self.tc[f as usize] = c;
        true
    }

    fn assert_locally_proper(&self, f: EdgeId) {
        let Some((a, b)) = self.graph.endpoints(f) else {
            return;
        };
        let c = self.fin.get(f);
        assert_ne!(c, NULL_COLOR, "edge ({a}, {b}) left uncolored");
        for x in [a, b] {
            for &(y, g) in self.graph.neighbors(x) {
                assert!(
                    g == f || self.fin.get(g) != c,
                    "edges ({a}, {b}) and ({x}, {y}) share color {c}"
                );
            }
        }
        let band_ok = if self.in_gu(f) {
            c as usize > self.colors
        } else {
            c as usize <= self.colors
        };
        assert!(band_ok, "edge ({a}, {b}) has color {c} outside its band");
    }
}

/// Runs `updates` from the empty graph and returns one report per update.
pub fn run_dynamic(
    cfg: DynamicConfig,
    updates: &[Update],
) -> Result<(DynamicColoring, Vec<UpdateReport>)> {
    let mut s = DynamicColoring::new(cfg)?;
    let mut out = Vec::with_capacity(updates.len());
    for &up in updates {
        out.push(s.apply(up)?);
    }
    Ok((s, out))
}
