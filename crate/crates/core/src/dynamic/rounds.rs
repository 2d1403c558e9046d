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

use crate::graph::{pair_key, NodeId};
use crate::rng::keyed_unit;

/// Inverse CDF of the capped geometric law on `1..=t_eps`:
/// `Pr[k] = eps (1 - eps)^(k-1)` for `k < t_eps`, the rest of the mass on `t_eps`.
pub fn capped_geometric(u: f64, epsilon: f64, t_eps: usize) -> usize {
    if t_eps <= 1 || epsilon >= 1.0 {
        return 1;
    }
    if epsilon <= 0.0 {
        return t_eps;
    }
    // Smallest k with 1 - (1 - eps)^k > u.
    let k = ((1.0 - u).ln() / (1.0 - epsilon).ln()).floor() as usize + 1;
    k.min(t_eps)
}

/// Round of every unordered pair, fixed for the whole run.
///
/// Rounds are a keyed hash of `(seed, pair)` pushed through the capped
/// geometric inverse CDF, so a pair keeps its round across deletions and
/// reinsertions without any stored state. Explicit overrides take priority.
#[derive(Debug, Clone)]
pub struct RoundAssignment {
    seed: u64,
    epsilon: f64,
    t_eps: usize,
    overrides: FxHashMap<u64, usize>,
}

impl RoundAssignment {
    pub fn new(seed: u64, epsilon: f64, t_eps: usize) -> Self {
        RoundAssignment {
            seed,
            epsilon,
            t_eps,
            overrides: FxHashMap::default(),
        }
    }

    pub fn t_eps(&self) -> usize {
        self.t_eps
    }

    /// Pins the round of `(u, v)`; `round` must be in `1..=t_eps`.
    pub fn set(&mut self, u: NodeId, v: NodeId, round: usize) {
        assert!(
            (1..=self.t_eps).contains(&round),
            "round {round} out of range"
        );
        self.overrides.insert(pair_key(u, v), round);
    }

    pub fn round(&self, u: NodeId, v: NodeId) -> usize {
        let key = pair_key(u, v);
        if let Some(&r) = self.overrides.get(&key) {
            return r;
        }
        let x = keyed_unit(self.seed, &[0x7209, key]);
        capped_geometric(x, self.epsilon, self.t_eps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_round_cap() {
        let ra = RoundAssignment::new(3, 0.3, 1);
        for v in 1..100 {
            assert_eq!(ra.round(0, v), 1);
        }
    }

    #[test]
    fn stable_per_pair() {
        let mut ra = RoundAssignment::new(9, 0.2, 5);
        for v in 1..50 {
            assert_eq!(ra.round(0, v), ra.round(v, 0));
        }
        ra.set(4, 2, 3);
        assert_eq!(ra.round(2, 4), 3);
    }

    #[test]
    fn inverse_cdf_edges() {
        assert_eq!(capped_geometric(0.0, 0.5, 3), 1);
        assert_eq!(capped_geometric(0.49, 0.5, 3), 1);
        assert_eq!(capped_geometric(0.5, 0.5, 3), 2);
        assert_eq!(capped_geometric(0.74, 0.5, 3), 2);
        assert_eq!(capped_geometric(0.75, 0.5, 3), 3);
        assert_eq!(capped_geometric(0.999, 0.5, 3), 3);
    }
}
