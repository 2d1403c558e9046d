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

use crate::error::{ColoringError, Result};
use crate::generators::Update;
use crate::graph::NodeId;

/// Dummy cliques that keep every degree of the padded graph in
/// `{delta - 1, delta}`.
///
/// Real node `v` owns dummies `n + v*delta + j` for `j < delta`; together with
/// `v` they start as a `(delta + 1)`-clique. A real edge at `v` is paid for by
/// removing the lowest-indexed remaining edge `(v, v_j)`.
#[derive(Debug, Clone)]
pub struct Gadget {
    n: usize,
    delta: usize,
    /// `attached[v * delta + j]`: whether `(v, v_j)` is present.
    attached: Vec<bool>,
}

impl Gadget {
    pub fn new(n: usize, delta: usize) -> Self {
        Gadget {
            n,
            delta,
            attached: vec![true; n * delta],
        }
    }

    pub fn node_count(&self) -> usize {
        self.n * (self.delta + 1)
    }

    pub fn dummy(&self, v: NodeId, j: usize) -> NodeId {
        (self.n + v as usize * self.delta + j) as NodeId
    }

    pub fn is_dummy(&self, x: NodeId) -> bool {
        x as usize >= self.n
    }

    /// Every edge of the initial padded graph.
    pub fn initial_edges(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::with_capacity(self.n * self.delta * (self.delta + 1) / 2);
        for v in 0..self.n as NodeId {
            for j in 0..self.delta {
                out.push((v, self.dummy(v, j)));
                for i in 0..j {
                    out.push((self.dummy(v, i), self.dummy(v, j)));
                }
            }
        }
        out
    }

    fn slot(&self, v: NodeId, present: bool) -> Result<usize> {
        let row = &self.attached[v as usize * self.delta..(v as usize + 1) * self.delta];
        row.iter()
            .position(|&a| a == present)
            .ok_or(ColoringError::GadgetExhausted(v))
    }

    /// Translates a real update into padded-graph updates, in application
    /// order, and records the change.
    pub fn wrap(&mut self, update: Update) -> Result<Vec<Update>> {
        let (u, v) = update.endpoints();
        if u == v {
            return Err(ColoringError::SelfLoop(u));
        }
        for x in [u, v] {
            if x as usize >= self.n {
                return Err(ColoringError::NodeOutOfRange {
                    node: x,
                    node_count: self.n,
                });
            }
        }
        let insert = update.is_insert();
        // Insertion consumes a present dummy edge, deletion restores a missing one.
        let i = self.slot(u, insert)?;
        let j = self.slot(v, insert)?;
        self.attached[u as usize * self.delta + i] = !insert;
        self.attached[v as usize * self.delta + j] = !insert;
        let (du, dv) = (self.dummy(u, i), self.dummy(v, j));
        Ok(if insert {
            vec![
                Update::Insert(u, v),
                Update::Delete(u, du),
                Update::Delete(v, dv),
            ]
        } else {
            vec![
                Update::Delete(u, v),
                Update::Insert(u, du),
                Update::Insert(v, dv),
            ]
        })
    }
}

/// Stateless form of [`Gadget::wrap`].
pub fn gadget_wrap(update: Update, gadget: &mut Gadget) -> Result<Vec<Update>> {
    gadget.wrap(update)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn apply(g: &mut Graph, ups: &[Update]) {
        for &up in ups {
            match up {
                Update::Insert(a, b) => {
                    g.insert_edge(a, b).unwrap();
                }
                Update::Delete(a, b) => {
                    g.delete_edge(a, b).unwrap();
                }
            }
        }
    }

    #[test]
    fn insert_then_delete() {
        let (n, d) = (3, 2);
        let mut gad = Gadget::new(n, d);
        let mut g = Graph::unbounded(gad.node_count(), d);
        apply(
            &mut g,
            &gad.initial_edges()
                .into_iter()
                .map(|(a, b)| Update::Insert(a, b))
                .collect::<Vec<_>>(),
        );
        assert!((0..g.node_count() as NodeId).all(|x| g.degree(x) == d));
        let ups = gad.wrap(Update::Insert(0, 1)).unwrap();
        assert_eq!(
            ups,
            vec![
                Update::Insert(0, 1),
                Update::Delete(0, 3),
                Update::Delete(1, 5)
            ]
        );
        apply(&mut g, &ups);
        assert_eq!((g.degree(0), g.degree(1)), (d, d));
        assert_eq!((g.degree(3), g.degree(5)), (d - 1, d - 1));
        let back = gad.wrap(Update::Delete(0, 1)).unwrap();
        assert_eq!(
            back,
            vec![
                Update::Delete(0, 1),
                Update::Insert(0, 3),
                Update::Insert(1, 5)
            ]
        );
        apply(&mut g, &back);
        assert!((0..g.node_count() as NodeId).all(|x| g.degree(x) == d));
    }

    #[test]
    fn exhausted_when_real_degree_is_full() {
        let mut gad = Gadget::new(4, 2);
        gad.wrap(Update::Insert(0, 1)).unwrap();
        gad.wrap(Update::Insert(0, 2)).unwrap();
        assert_eq!(
            gad.wrap(Update::Insert(0, 3)),
            Err(ColoringError::GadgetExhausted(0))
        );
    }
}
