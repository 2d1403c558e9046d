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

//! Text formats.
//!
//! Edge list: a header line `# n=<n> delta=<delta>` followed by one `u v`
//! line per edge (0-based). When used as a stream the line order is the
//! arrival order. Update stream: the same header, then `+ u v` or `- u v`
//! lines in update order. Blank lines and other `#` lines are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::HarnessError;
use crate::generators::Update;
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub n: usize,
    pub delta: usize,
}

pub fn format_header(h: Header) -> String {
    format!("# n={} delta={}\n", h.n, h.delta)
}

fn parse_header(line: &str) -> Option<Header> {
    let rest = line.strip_prefix('#')?;
    let mut n = None;
    let mut delta = None;
    for tok in rest.split_whitespace() {
        if let Some(x) = tok.strip_prefix("n=") {
            n = x.parse().ok();
        } else if let Some(x) = tok.strip_prefix("delta=") {
            delta = x.parse().ok();
        }
    }
    Some(Header {
        n: n?,
        delta: delta?,
    })
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> HarnessError {
    HarnessError::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

fn parse_node(tok: Option<&str>, path: &Path, line: usize) -> Result<NodeId, HarnessError> {
    tok.ok_or_else(|| parse_err(path, line, "missing node index"))?
        .parse()
        .map_err(|e| parse_err(path, line, format!("bad node index: {e}")))
}

/// Parses an edge list; `path` is only used in error messages.
pub fn parse_edge_list(
    text: &str,
    path: &Path,
) -> Result<(Header, Vec<(NodeId, NodeId)>), HarnessError> {
    let mut header = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if header.is_none() {
                header = parse_header(line);
            }
            continue;
        }
        let mut toks = line.split_whitespace();
        let u = parse_node(toks.next(), path, i + 1)?;
        let v = parse_node(toks.next(), path, i + 1)?;
        if toks.next().is_some() {
            return Err(parse_err(path, i + 1, "expected exactly two node indices"));
        }
        edges.push((u, v));
    }
    let header =
        header.ok_or_else(|| parse_err(path, 1, "missing `# n=<n> delta=<delta>` header"))?;
    Ok((header, edges))
}

pub fn parse_update_stream(text: &str, path: &Path) -> Result<(Header, Vec<Update>), HarnessError> {
    let mut header = None;
    let mut ups = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if header.is_none() {
                header = parse_header(line);
            }
            continue;
        }
        let mut toks = line.split_whitespace();
        let op = toks.next();
        let u = parse_node(toks.next(), path, i + 1)?;
        let v = parse_node(toks.next(), path, i + 1)?;
        ups.push(match op {
            Some("+") => Update::Insert(u, v),
            Some("-") => Update::Delete(u, v),
            other => return Err(parse_err(path, i + 1, format!("unknown op {other:?}"))),
        });
    }
    let header =
        header.ok_or_else(|| parse_err(path, 1, "missing `# n=<n> delta=<delta>` header"))?;
    Ok((header, ups))
}

pub fn format_edge_list(h: Header, edges: &[(NodeId, NodeId)]) -> String {
    let mut s = format_header(h);
    for &(u, v) in edges {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

pub fn format_update_stream(h: Header, ups: &[Update]) -> String {
    let mut s = format_header(h);
    for u in ups {
        let _ = match *u {
            Update::Insert(a, b) => writeln!(s, "+ {a} {b}"),
            Update::Delete(a, b) => writeln!(s, "- {a} {b}"),
        };
    }
    s
}

pub fn graph_edges(g: &Graph) -> Vec<(NodeId, NodeId)> {
    g.edges().map(|(_, u, v)| (u, v)).collect()
}

fn read(path: &Path) -> Result<String, HarnessError> {
    fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), HarnessError> {
    fs::write(path, text).map_err(|source| HarnessError::Io {
        path: PathBuf::from(path),
        source,
    })
}

pub fn read_edge_list(path: &Path) -> Result<(Header, Vec<(NodeId, NodeId)>), HarnessError> {
    parse_edge_list(&read(path)?, path)
}

pub fn read_update_stream(path: &Path) -> Result<(Header, Vec<Update>), HarnessError> {
    parse_update_stream(&read(path)?, path)
}

/// Loads an edge list into a graph that enforces the declared degree bound.
pub fn read_graph(path: &Path) -> Result<Graph, HarnessError> {
    let (h, edges) = read_edge_list(path)?;
    Ok(Graph::from_edges(h.n, h.delta, edges)?)
}
