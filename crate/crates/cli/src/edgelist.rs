//! Plain edge lists: a header line `n m`, then `m` lines `u v` with
//! `0 <= u, v < n`. Blank lines and lines starting with `#` are ignored.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use subdiv_core::graph::{Graph, VertexId};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EdgeListError {
    #[error("line {line}: malformed header, expected `n m`")]
    Header { line: usize },
    #[error("missing header line")]
    MissingHeader,
    #[error("line {line}: malformed edge, expected `u v`")]
    EdgeLine { line: usize },
    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    OutOfRange { line: usize, vertex: u64, n: usize },
    #[error("line {line}: self-loop at vertex {vertex}")]
    SelfLoop { line: usize, vertex: VertexId },
    #[error("line {line}: duplicate edge {u}-{v}")]
    Duplicate {
        line: usize,
        u: VertexId,
        v: VertexId,
    },
    #[error("header announces {expected} edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
}

fn two_numbers(s: &str) -> Option<(u64, u64)> {
    let mut it = s.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    it.next().is_none().then_some((a, b))
}

/// Parses an edge list into a graph on `0..n`. Edges given as `v u` with
/// `v > u` are accepted and stored the same way.
pub fn parse_edge_list(text: &str) -> Result<Graph, EdgeListError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(EdgeListError::MissingHeader)?;
    let (n, m) = two_numbers(header).ok_or(EdgeListError::Header { line: hline })?;
    let n = usize::try_from(n)
        .ok()
        .filter(|&n| n <= VertexId::MAX as usize)
        .ok_or(EdgeListError::Header { line: hline })?;
    let m = usize::try_from(m).map_err(|_| EdgeListError::Header { line: hline })?;

    let mut g = Graph::empty(n);
    let mut seen = BTreeSet::new();
    let mut found = 0;
    for (line, l) in lines {
        let (a, b) = two_numbers(l).ok_or(EdgeListError::EdgeLine { line })?;
        for vertex in [a, b] {
            if vertex >= n as u64 {
                return Err(EdgeListError::OutOfRange { line, vertex, n });
            }
        }
        let (u, v) = (a.min(b) as VertexId, a.max(b) as VertexId);
        if u == v {
            return Err(EdgeListError::SelfLoop { line, vertex: u });
        }
        if !seen.insert((u, v)) {
            return Err(EdgeListError::Duplicate { line, u, v });
        }
        g.add_edge(u, v).expect("checked above");
        found += 1;
    }
    if found != m {
        return Err(EdgeListError::EdgeCount { expected: m, found });
    }
    Ok(g)
}

/// Writes `g` as an edge list. Vertex ids are written as they are, so `g`
/// should live on `0..n`; the header uses `max id + 1`.
pub fn write_edge_list(g: &Graph) -> String {
    let n = g.max_vertex().map_or(0, |v| v as usize + 1);
    let mut out = format!("{n} {}\n", g.edge_count());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}
