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

use std::path::PathBuf;

use thiserror::Error;

use crate::graph::NodeId;

/// Errors raised by graph mutation, parameter derivation and the algorithms.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ColoringError {
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("edge ({0}, {1}) already present")]
    DuplicateEdge(NodeId, NodeId),
    #[error("edge ({0}, {1}) not present")]
    MissingEdge(NodeId, NodeId),
    #[error("node {node} out of range (graph has {node_count} nodes)")]
    NodeOutOfRange { node: NodeId, node_count: usize },
    #[error("inserting ({u}, {v}) would push a degree above the bound {bound}")]
    DegreeBoundExceeded { u: NodeId, v: NodeId, bound: usize },
    #[error("invalid epsilon {epsilon}: {reason}")]
    InvalidEpsilon { epsilon: f64, reason: String },
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
    #[error("node {node} has degree {degree}, outside the near-regular window [{lo}, {hi}]")]
    DegreeOutOfRange {
        node: NodeId,
        degree: usize,
        lo: f64,
        hi: f64,
    },
    #[error("stream has {actual} edges but m = {expected} was declared")]
    StreamLengthMismatch { expected: usize, actual: usize },
    #[error("gadget exhausted at node {0}: no dummy edge left to trade")]
    GadgetExhausted(NodeId),
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParams(String),
    #[error("instance needs {needed} nodes, budget is {budget}")]
    ResourceLimit { needed: u128, budget: u128 },
    #[error("no samples supplied")]
    EmptySamples,
}

/// Errors surfaced by file formats and the experiment harness.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("config field `{field}`: {msg}")]
    Config { field: String, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = ColoringError> = std::result::Result<T, E>;
