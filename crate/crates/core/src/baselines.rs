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

//! Online greedy baseline and the shared online-coloring interface.

use crate::colorset::FirstFit;
use crate::error::Result;
use crate::graph::{Color, EdgeColoring, Graph, NodeId};

/// An edge stream in arrival order.
pub type Stream = Vec<(NodeId, NodeId)>;

/// An algorithm that colors each edge irrevocably when it arrives.
pub trait OnlineColorer {
    fn process(&mut self, u: NodeId, v: NodeId) -> Color;
}

/// First-fit greedy: each edge takes the smallest color not used by an
/// already-colored incident edge. Never exceeds `2 * Delta - 1`.
#[derive(Debug, Clone)]
pub struct GreedyOnline {
    used: FirstFit,
}

impl GreedyOnline {
    pub fn new(node_count: usize) -> Self {
        GreedyOnline {
            used: FirstFit::new(node_count),
        }
    }

    /// Number of colors already present at `v`.
    pub fn colored_degree(&self, v: NodeId) -> usize {
        self.used.used(v).len()
    }
}

impl OnlineColorer for GreedyOnline {
    fn process(&mut self, u: NodeId, v: NodeId) -> Color {
        self.used.assign(u, v, 0)
    }
}

/// Feeds `stream` through `alg` and returns the color of each position.
pub fn run_online<A: OnlineColorer + ?Sized>(
    alg: &mut A,
    stream: &[(NodeId, NodeId)],
) -> Vec<Color> {
    stream.iter().map(|&(u, v)| alg.process(u, v)).collect()
}

pub fn greedy_online(node_count: usize, stream: &[(NodeId, NodeId)]) -> Vec<Color> {
    run_online(&mut GreedyOnline::new(node_count), stream)
}

/// Materializes a stream and its per-position colors as a graph plus edge
/// coloring, for verification.
pub fn coloring_from_stream(
    node_count: usize,
    delta: usize,
    stream: &[(NodeId, NodeId)],
    colors: &[Color],
) -> Result<(Graph, EdgeColoring)> {
    let mut g = Graph::unbounded(node_count, delta);
    let mut col = EdgeColoring::new(stream.len());
    for (&(u, v), &c) in stream.iter().zip(colors) {
        let e = g.insert_edge(u, v)?;
        col.set(e, c);
    }
    Ok((g, col))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::verify_proper_coloring;

    #[test]
    fn path_star_triangle() {
        assert_eq!(greedy_online(4, &[(0, 1), (1, 2), (2, 3)]), vec![1, 2, 1]);
        let star: Vec<_> = (1..6).map(|l| (0, l)).collect();
        assert_eq!(greedy_online(6, &star), vec![1, 2, 3, 4, 5]);
        for order in [[(0, 1), (1, 2), (0, 2)], [(1, 2), (0, 2), (0, 1)]] {
            let mut c = greedy_online(3, &order);
            c.sort();
            assert_eq!(c, vec![1, 2, 3]);
        }
    }

    #[test]
    fn result_is_proper() {
        let stream = vec![(0, 1), (2, 3), (1, 2), (0, 3), (0, 2), (1, 3)];
        let colors = greedy_online(4, &stream);
        let (g, col) = coloring_from_stream(4, 3, &stream, &colors).unwrap();
        assert!(verify_proper_coloring(&g, &col, true).valid);
    }
}
