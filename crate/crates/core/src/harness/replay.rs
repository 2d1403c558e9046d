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

//! Online-model checks on decision logs.
//!
//! A log lists one decision per arrival, in the order they were made. It is
//! valid when every arrival is decided exactly once, in stream order, and
//! each decision is reproduced by a fresh instance that sees the same prefix
//! followed by a different suffix.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::baselines::OnlineColorer;
use crate::graph::{Color, NodeId};
use crate::rng::{derive_seed, rng_from_seed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub index: usize,
    pub u: NodeId,
    pub v: NodeId,
    pub color: Color,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionLog {
    pub decisions: Vec<Decision>,
}

impl DecisionLog {
    pub fn record<A: OnlineColorer + ?Sized>(alg: &mut A, stream: &[(NodeId, NodeId)]) -> Self {
        let decisions = stream
            .iter()
            .enumerate()
            .map(|(index, &(u, v))| Decision {
                index,
                u,
                v,
                color: alg.process(u, v),
            })
            .collect();
        DecisionLog { decisions }
    }

    pub fn len(&self) -> usize {
        self.decisions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decisions.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReplayVerdict {
    Valid,
    /// `index` is the stream position of the offending decision.
    Invalid {
        index: usize,
        reason: String,
    },
}

impl ReplayVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, ReplayVerdict::Valid)
    }
}

fn invalid(index: usize, reason: impl Into<String>) -> ReplayVerdict {
    ReplayVerdict::Invalid {
        index,
        reason: reason.into(),
    }
}

/// Validates `log` against `stream`.
///
/// `fresh` builds a new instance with the same seed; it is handed the stream
/// the instance is about to see, so an implementation that reads ahead is
/// exposed by a changed suffix. Besides one straight rerun, `probes` cut points `k` are drawn from `seed`; the instance then
/// sees `stream[..=k]` followed by a shuffle of the rest, and its first `k+1`
/// decisions must match the log.
pub fn replay_validate<A, F>(
    log: &DecisionLog,
    stream: &[(NodeId, NodeId)],
    mut fresh: F,
    probes: usize,
    seed: u64,
) -> ReplayVerdict
where
    A: OnlineColorer,
    F: FnMut(&[(NodeId, NodeId)]) -> A,
{
    for (pos, d) in log.decisions.iter().enumerate() {
        if d.index != pos {
            let reason = if d.index < pos {
                "decision revisits an earlier arrival"
            } else {
                "decision skips an arrival"
            };
            return invalid(d.index, reason);
        }
        match stream.get(pos) {
            None => return invalid(pos, "decision past the end of the stream"),
            Some(&(u, v)) if (u, v) != (d.u, d.v) => {
                return invalid(pos, "endpoints differ from the stream")
            }
            _ => {}
        }
    }
    if log.len() != stream.len() {
        return invalid(log.len(), "arrival without a decision");
    }
    let mut alg = fresh(stream);
    for d in &log.decisions {
        if alg.process(d.u, d.v) != d.color {
            return invalid(d.index, "rerun on the same stream decides differently");
        }
    }
    if stream.len() < 2 {
        return ReplayVerdict::Valid;
    }
    let mut rng = rng_from_seed(derive_seed(seed, &[0x7e9]));
    for p in 0..probes {
        let k = rand::Rng::random_range(&mut rng, 0..stream.len() - 1);
        let mut probe: Vec<(NodeId, NodeId)> = stream.to_vec();
        probe[k + 1..].shuffle(&mut rng_from_seed(derive_seed(seed, &[0x7ea, p as u64])));
        let mut alg = fresh(&probe);
        for (i, &(u, v)) in probe.iter().enumerate().take(k + 1) {
            if alg.process(u, v) != log.decisions[i].color {
                return invalid(i, format!("decision depends on arrivals after {k}"));
            }
        }
    }
    ReplayVerdict::Valid
}
