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

use rustc_hash::FxHashMap;

use crate::colorset::FirstFit;
use crate::graph::{Color, EdgeId, NodeId};

/// Coloring of the fallback subgraph in the band above `floor`.
///
/// Insertion takes the smallest band color free at both endpoints; deletion
/// frees the color. No other edge is ever recolored.
#[derive(Debug, Clone)]
pub struct SimpleColor {
    floor: Color,
    used: FirstFit,
    colors: FxHashMap<EdgeId, (NodeId, NodeId, Color)>,
    events: u64,
}

impl SimpleColor {
    pub fn new(node_count: usize, floor: Color) -> Self {
        SimpleColor {
            floor,
            used: FirstFit::new(node_count),
            colors: FxHashMap::default(),
            events: 0,
        }
    }

    pub fn floor(&self) -> Color {
        self.floor
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.colors.contains_key(&e)
    }

    pub fn color(&self, e: EdgeId) -> Option<Color> {
        self.colors.get(&e).map(|x| x.2)
    }

    /// Insertions plus deletions so far.
    pub fn events(&self) -> u64 {
        self.events
    }

    pub fn insert(&mut self, e: EdgeId, u: NodeId, v: NodeId) -> Color {
        debug_assert!(!self.contains(e));
        let c = self.used.assign(u, v, self.floor);
        self.colors.insert(e, (u, v, c));
        self.events += 1;
        c
    }

    /// Returns the freed color, or `None` if `e` was not in the subgraph.
    pub fn remove(&mut self, e: EdgeId) -> Option<Color> {
        let (u, v, c) = self.colors.remove(&e)?;
        self.used.release(u, v, c);
        self.events += 1;
        Some(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_fit_above_floor() {
        let mut sc = SimpleColor::new(5, 4);
        assert_eq!(sc.insert(0, 0, 1), 5);
        assert_eq!(sc.insert(1, 1, 2), 6);
        assert_eq!(sc.insert(2, 1, 3), 7);
        assert_eq!(sc.remove(1), Some(6));
        assert_eq!(sc.insert(1, 1, 2), 6);
        assert_eq!(sc.events(), 5);
    }

    #[test]
    fn isolated_edge_reinsert() {
        let mut sc = SimpleColor::new(2, 10);
        assert_eq!(sc.insert(7, 0, 1), 11);
        sc.remove(7);
        assert_eq!(sc.insert(7, 0, 1), 11);
        assert_eq!(sc.remove(3), None);
    }
}
