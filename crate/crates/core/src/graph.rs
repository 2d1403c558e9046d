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

//! Simple undirected graph with dynamic edge updates, and the edge-coloring
//! container plus properness check shared by every algorithm in the crate.

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{ColoringError, Result};

pub type NodeId = u32;
pub type EdgeId = u32;
pub type Color = u32;

/// Sentinel for "no color". Real colors start at 1.
pub const NULL_COLOR: Color = 0;

/// Packs an unordered node pair into a single map key.
#[inline]
pub fn pair_key(u: NodeId, v: NodeId) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    ((a as u64) << 32) | b as u64
}

#[inline]
pub fn unpack_pair(key: u64) -> (NodeId, NodeId) {
    ((key >> 32) as NodeId, key as NodeId)
}

/// Mutable simple graph.
///
/// Edge ids are dense indices. An id is stable for the lifetime of its edge and
/// is recycled only once that edge has been deleted.
#[derive(Debug, Clone)]
pub struct Graph {
    adjacency: Vec<Vec<(NodeId, EdgeId)>>,
    endpoints: Vec<Option<(NodeId, NodeId)>>,
    free_ids: Vec<EdgeId>,
    index: FxHashMap<u64, EdgeId>,
    edge_count: usize,
    max_degree_bound: usize,
    enforce_bound: bool,
}

impl Graph {
    /// Empty graph on `node_count` nodes that rejects insertions pushing a
    /// degree above `max_degree_bound`.
    pub fn new(node_count: usize, max_degree_bound: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); node_count],
            endpoints: Vec::new(),
            free_ids: Vec::new(),
            index: FxHashMap::default(),
            edge_count: 0,
            max_degree_bound,
            enforce_bound: true,
        }
    }

    /// Empty graph whose degree bound is declared but not enforced.
    pub fn unbounded(node_count: usize, max_degree_bound: usize) -> Self {
        let mut g = Self::new(node_count, max_degree_bound);
        g.enforce_bound = false;
        g
    }

    pub fn from_edges<I>(node_count: usize, max_degree_bound: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut g = Self::new(node_count, max_degree_bound);
        for (u, v) in edges {
            g.insert_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn set_bound_enforcement(&mut self, enforce: bool) {
        self.enforce_bound = enforce;
    }

    pub fn bound_enforced(&self) -> bool {
        self.enforce_bound
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn max_degree_bound(&self) -> usize {
        self.max_degree_bound
    }

    /// One past the largest edge id ever handed out; sizes per-edge arrays.
    pub fn edge_id_bound(&self) -> usize {
        self.endpoints.len()
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, EdgeId)] {
        &self.adjacency[v as usize]
    }

    pub fn endpoints(&self, e: EdgeId) -> Option<(NodeId, NodeId)> {
        self.endpoints.get(e as usize).copied().flatten()
    }

    pub fn edge_id(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        self.index.get(&pair_key(u, v)).copied()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.index.contains_key(&pair_key(u, v))
    }

    /// Current edges as `(id, u, v)` with `u < v`, in ascending id order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, NodeId, NodeId)> + '_ {
        self.endpoints
            .iter()
            .enumerate()
            .filter_map(|(i, ep)| ep.map(|(u, v)| (i as EdgeId, u, v)))
    }

    fn check_node(&self, v: NodeId) -> Result<()> {
        if (v as usize) < self.adjacency.len() {
            Ok(())
        } else {
            Err(ColoringError::NodeOutOfRange {
                node: v,
                node_count: self.adjacency.len(),
            })
        }
    }

    pub fn insert_edge(&mut self, u: NodeId, v: NodeId) -> Result<EdgeId> {
        if u == v {
            return Err(ColoringError::SelfLoop(u));
        }
        self.check_node(u)?;
        self.check_node(v)?;
        let key = pair_key(u, v);
        if self.index.contains_key(&key) {
            return Err(ColoringError::DuplicateEdge(u, v));
        }
        if self.enforce_bound
            && (self.degree(u) >= self.max_degree_bound || self.degree(v) >= self.max_degree_bound)
        {
            return Err(ColoringError::DegreeBoundExceeded {
                u,
                v,
                bound: self.max_degree_bound,
            });
        }
        let (a, b) = unpack_pair(key);
        let id = match self.free_ids.pop() {
            Some(id) => {
                self.endpoints[id as usize] = Some((a, b));
                id
            }
            None => {
                self.endpoints.push(Some((a, b)));
                (self.endpoints.len() - 1) as EdgeId
            }
        };
        self.index.insert(key, id);
        self.adjacency[u as usize].push((v, id));
        self.adjacency[v as usize].push((u, id));
        self.edge_count += 1;
        Ok(id)
    }

    /// Removes `(u, v)` and returns the id it held.
    pub fn delete_edge(&mut self, u: NodeId, v: NodeId) -> Result<EdgeId> {
        if u == v {
            return Err(ColoringError::MissingEdge(u, v));
        }
        self.check_node(u)?;
        self.check_node(v)?;
        let id = self
            .index
            .remove(&pair_key(u, v))
            .ok_or(ColoringError::MissingEdge(u, v))?;
        for (x, y) in [(u, v), (v, u)] {
            let adj = &mut self.adjacency[x as usize];
            let pos = adj
                .iter()
                .position(|&(w, _)| w == y)
                .expect("adjacency out of sync with index");
            adj.swap_remove(pos);
        }
        self.endpoints[id as usize] = None;
        self.free_ids.push(id);
        self.edge_count -= 1;
        Ok(id)
    }

    /// Exact maximum degree over all nodes; 0 for an edgeless graph.
    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Maximum degree of the subgraph spanned by the edges `keep` accepts.
    pub fn max_degree_of<F>(&self, mut keep: F) -> usize
    where
        F: FnMut(EdgeId) -> bool,
    {
        let mut deg = vec![0usize; self.node_count()];
        for (e, u, v) in self.edges() {
            if keep(e) {
                deg[u as usize] += 1;
                deg[v as usize] += 1;
            }
        }
        deg.into_iter().max().unwrap_or(0)
    }
}

/// Partial map from edge id to color; [`NULL_COLOR`] marks uncolored edges.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeColoring {
    colors: Vec<Color>,
}

impl EdgeColoring {
    pub fn new(edge_id_bound: usize) -> Self {
        EdgeColoring {
            colors: vec![NULL_COLOR; edge_id_bound],
        }
    }

    pub fn for_graph(g: &Graph) -> Self {
        Self::new(g.edge_id_bound())
    }

    pub fn get(&self, e: EdgeId) -> Color {
        self.colors.get(e as usize).copied().unwrap_or(NULL_COLOR)
    }

    pub fn set(&mut self, e: EdgeId, c: Color) {
        let i = e as usize;
        if i >= self.colors.len() {
            self.colors.resize(i + 1, NULL_COLOR);
        }
        self.colors[i] = c;
    }

    pub fn clear(&mut self, e: EdgeId) {
        self.set(e, NULL_COLOR);
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.colors
    }

    /// Largest color on a current edge of `g` (0 if none).
    pub fn max_color(&self, g: &Graph) -> Color {
        g.edges().map(|(e, _, _)| self.get(e)).max().unwrap_or(0)
    }

    /// Number of distinct non-NULL colors on current edges of `g`.
    pub fn distinct_colors(&self, g: &Graph) -> usize {
        let mut seen: Vec<Color> = g
            .edges()
            .map(|(e, _, _)| self.get(e))
            .filter(|&c| c != NULL_COLOR)
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringReport {
    pub valid: bool,
    pub first_conflict: Option<(EdgeId, EdgeId)>,
    pub uncolored_count: usize,
}

/// Checks that no two edges sharing a node carry the same non-NULL color and,
/// when `require_complete` is set, that every edge is colored.
pub fn verify_proper_coloring(
    g: &Graph,
    col: &EdgeColoring,
    require_complete: bool,
) -> ColoringReport {
    let uncolored_count = g
        .edges()
        .filter(|&(e, _, _)| col.get(e) == NULL_COLOR)
        .count();
    let mut first_conflict = None;
    let mut seen: FxHashMap<Color, EdgeId> = FxHashMap::default();
    'nodes: for v in 0..g.node_count() as NodeId {
        seen.clear();
        for &(_, e) in g.neighbors(v) {
            let c = col.get(e);
            if c == NULL_COLOR {
                continue;
            }
            if let Some(&other) = seen.get(&c) {
                first_conflict = Some((other.min(e), other.max(e)));
                break 'nodes;
            }
            seen.insert(c, e);
        }
    }
    let valid = first_conflict.is_none() && (!require_complete || uncolored_count == 0);
    ColoringReport {
        valid,
        first_conflict,
        uncolored_count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn first_insertion() {
        let mut g = Graph::new(4, 3);
        assert_eq!(g.insert_edge(0, 1).unwrap(), 0);
        assert_eq!(g.degree(0), 1);
        assert_eq!(g.degree(1), 1);
    }

    #[test]
    fn duplicate_and_self_loop_rejected() {
        let mut g = Graph::new(4, 3);
        g.insert_edge(0, 1).unwrap();
        assert_eq!(g.insert_edge(0, 1), Err(ColoringError::DuplicateEdge(0, 1)));
        assert_eq!(g.insert_edge(1, 0), Err(ColoringError::DuplicateEdge(1, 0)));
        assert_eq!(g.insert_edge(3, 3), Err(ColoringError::SelfLoop(3)));
    }

    #[test]
    fn degree_bound_enforced_unless_disabled() {
        let mut g = Graph::new(4, 1);
        g.insert_edge(0, 1).unwrap();
        assert!(matches!(
            g.insert_edge(0, 2),
            Err(ColoringError::DegreeBoundExceeded { .. })
        ));
        g.set_bound_enforcement(false);
        g.insert_edge(0, 2).unwrap();
        assert_eq!(g.degree(0), 2);
    }

    #[test]
    fn delete_inverts_insert() {
        let mut g = Graph::new(3, 2);
        g.insert_edge(0, 1).unwrap();
        g.delete_edge(0, 1).unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.degree(0), 0);
        assert_eq!(g.delete_edge(0, 1), Err(ColoringError::MissingEdge(0, 1)));
    }

    #[test]
    fn delete_keeps_other_degrees() {
        let mut g = Graph::new(3, 2);
        g.insert_edge(0, 1).unwrap();
        g.insert_edge(1, 2).unwrap();
        g.delete_edge(0, 1).unwrap();
        assert_eq!(g.degree(1), 1);
        assert!(g.has_edge(2, 1));
    }

    #[test]
    fn edge_ids_recycled_after_delete() {
        let mut g = Graph::new(4, 3);
        let a = g.insert_edge(0, 1).unwrap();
        let b = g.insert_edge(2, 3).unwrap();
        g.delete_edge(0, 1).unwrap();
        let c = g.insert_edge(0, 2).unwrap();
        assert_eq!(c, a);
        assert_ne!(c, b);
        assert_eq!(g.endpoints(c), Some((0, 2)));
    }

    #[test]
    fn max_degree_examples() {
        assert_eq!(Graph::new(0, 0).max_degree(), 0);
        let star = Graph::from_edges(6, 5, (1..6).map(|l| (0, l))).unwrap();
        assert_eq!(star.max_degree(), 5);
        let tri = Graph::from_edges(3, 2, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(tri.max_degree(), 2);
    }

    fn triangle_with(colors: [Color; 3]) -> (Graph, EdgeColoring) {
        let g = Graph::from_edges(3, 2, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let mut col = EdgeColoring::for_graph(&g);
        for (e, c) in colors.into_iter().enumerate() {
            col.set(e as EdgeId, c);
        }
        (g, col)
    }

    #[test]
    fn verify_triangle() {
        let (g, col) = triangle_with([1, 2, 3]);
        assert!(verify_proper_coloring(&g, &col, true).valid);
        let (g, col) = triangle_with([1, 1, 2]);
        let rep = verify_proper_coloring(&g, &col, true);
        assert!(!rep.valid);
        assert_eq!(rep.first_conflict, Some((0, 1)));
    }

    #[test]
    fn verify_counts_uncolored() {
        let g = Graph::from_edges(3, 2, [(0, 1), (1, 2)]).unwrap();
        let mut col = EdgeColoring::for_graph(&g);
        col.set(0, 1);
        let rep = verify_proper_coloring(&g, &col, true);
        assert!(!rep.valid);
        assert_eq!(rep.uncolored_count, 1);
        assert!(verify_proper_coloring(&g, &col, false).valid);
    }

    fn brute_force_proper(g: &Graph, col: &EdgeColoring) -> bool {
        let edges: Vec<_> = g.edges().collect();
        for (i, &(e, a, b)) in edges.iter().enumerate() {
            for &(f, c, d) in &edges[i + 1..] {
                let adjacent = a == c || a == d || b == c || b == d;
                let (ce, cf) = (col.get(e), col.get(f));
                if adjacent && ce != NULL_COLOR && ce == cf {
                    return false;
                }
            }
        }
        true
    }

    proptest! {
        #[test]
        fn verify_matches_quadratic_scan(
            pairs in proptest::collection::vec((0u32..5, 0u32..5), 0..12),
            palette in proptest::collection::vec(0u32..4, 12),
        ) {
            let mut g = Graph::unbounded(5, 4);
            for (u, v) in pairs {
                if g.edge_count() < 8 {
                    let _ = g.insert_edge(u, v);
                }
            }
            let mut col = EdgeColoring::for_graph(&g);
            for (e, _, _) in g.edges() {
                col.set(e, palette[e as usize]);
            }
            let rep = verify_proper_coloring(&g, &col, false);
            prop_assert_eq!(rep.valid, brute_force_proper(&g, &col));
        }

        #[test]
        fn degree_counters_match_adjacency(
            ops in proptest::collection::vec((any::<bool>(), 0u32..6, 0u32..6), 0..60),
        ) {
            let mut g = Graph::new(6, 3);
            let mut deg = [0usize; 6];
            for (ins, u, v) in ops {
                let ok = if ins { g.insert_edge(u, v).is_ok() } else { g.delete_edge(u, v).is_ok() };
                if ok {
                    let d = if ins { 1isize } else { -1 };
                    deg[u as usize] = (deg[u as usize] as isize + d) as usize;
                    deg[v as usize] = (deg[v as usize] as isize + d) as usize;
                }
                for x in 0..6u32 {
                    prop_assert_eq!(g.degree(x), deg[x as usize]);
                    prop_assert!(g.degree(x) <= 3);
                    for &(y, e) in g.neighbors(x) {
                        prop_assert_eq!(g.edge_id(y, x), Some(e));
                    }
                }
            }
        }
    }
}
