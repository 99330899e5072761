//! Reduction of (graph, ordered clique) pairs.
//!
//! A pair either grows its clique by a vertex adjacent to the whole clique
//! (placed first in the order), or, when no such vertex exists, drops the
//! first clique vertex and reconnects each of its outside neighbours to the
//! first clique vertex that neighbour misses. The recorded sequence of steps
//! from `(G, ∅)` to a pair whose graph is its clique is a [`ReductionTrace`].

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("every vertex is already in the clique")]
    Terminal,
    #[error("level {level} is past the end of the trace ({len} steps)")]
    LevelOutOfRange { level: usize, len: usize },
    #[error("removed vertex {vertex} is a clique vertex at level {level}")]
    RemovedInClique { vertex: VertexId, level: usize },
    #[error("removed vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("empty graph has no reduction")]
    EmptyGraph,
}

/// A graph with an ordered clique; `clique[0]` is the first vertex of the order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairState {
    pub graph: Graph,
    pub clique: Vec<VertexId>,
}

impl PairState {
    pub fn initial(graph: Graph) -> Self {
        PairState {
            graph,
            clique: Vec::new(),
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.clique.len() == self.graph.vertex_count()
    }

    pub fn in_clique(&self, v: VertexId) -> bool {
        self.clique.contains(&v)
    }

    /// Vertices outside the clique.
    pub fn outside(&self) -> BTreeSet<VertexId> {
        let k: BTreeSet<_> = self.clique.iter().copied().collect();
        self.graph.vertices().filter(|v| !k.contains(v)).collect()
    }

    /// `|V(G)| + |V(G) \ V(K)|`, strictly decreasing along any trace.
    pub fn measure(&self) -> usize {
        2 * self.graph.vertex_count() - self.clique.len()
    }

    /// 0-based clique position of `v`.
    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.clique.iter().position(|&c| c == v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionStep {
    Add(VertexId),
    /// `rewires` holds `(u, target)`: the new edge from `u` to the first clique
    /// vertex it misses. Sorted by `u`.
    Delete {
        v1: VertexId,
        rewires: Vec<(VertexId, VertexId)>,
    },
}

impl ReductionStep {
    pub fn is_add(&self) -> bool {
        matches!(self, ReductionStep::Add(_))
    }
}

/// Computes the next step without touching `state`.
fn next_step(state: &PairState) -> Result<ReductionStep, ReductionError> {
    if state.is_terminal() {
        return Err(ReductionError::Terminal);
    }
    let candidate = state
        .graph
        .vertices()
        .find(|&w| !state.in_clique(w) && state.clique.iter().all(|&v| state.graph.has_edge(v, w)));
    if let Some(w) = candidate {
        return Ok(ReductionStep::Add(w));
    }
    // The clique is non-empty here: with an empty clique every vertex is a candidate.
    let v1 = state.clique[0];
    let rewires = state
        .graph
        .neighbors(v1)
        .filter(|&u| !state.in_clique(u))
        .map(|u| {
            let target = state
                .clique
                .iter()
                .copied()
                .find(|&v| !state.graph.has_edge(u, v))
                .expect("no outside vertex sees the whole clique");
            (u, target)
        })
        .collect();
    Ok(ReductionStep::Delete { v1, rewires })
}

fn apply_in_place(state: &mut PairState, step: &ReductionStep) {
    match step {
        ReductionStep::Add(w) => state.clique.insert(0, *w),
        ReductionStep::Delete { v1, rewires } => {
            debug_assert_eq!(state.clique.first(), Some(v1));
            state.graph.remove_vertex(*v1);
            state.clique.remove(0);
            for &(u, t) in rewires {
                if state.graph.contains_vertex(u) {
                    state
                        .graph
                        .add_edge(u, t)
                        .expect("rewire creates a new edge");
                }
            }
        }
    }
}

/// Applies the unique applicable operation, choosing the smallest-id vertex
/// when several could be added.
pub fn apply_step(state: &PairState) -> Result<(PairState, ReductionStep), ReductionError> {
    let step = next_step(state)?;
    let mut next = state.clone();
    apply_in_place(&mut next, &step);
    Ok((next, step))
}

/// A full reduction from `(initial, ∅)` to a terminal pair.
///
/// Cliques are stored as a shared stack: level `i` owns a pointer to its first
/// vertex, whose node points to the rest of the clique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub initial: Graph,
    pub steps: Vec<ReductionStep>,
    nodes: Vec<(VertexId, Option<usize>)>,
    level_top: Vec<Option<usize>>,
    /// Step index (1-based level) at which each vertex entered the clique.
    added_at: std::collections::BTreeMap<VertexId, usize>,
}

impl ReductionTrace {
    /// Index of the terminal level.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Step producing `level` from `level - 1`.
    pub fn step_into(&self, level: usize) -> Option<&ReductionStep> {
        level.checked_sub(1).and_then(|i| self.steps.get(i))
    }

    /// Ordered clique at `level`, first vertex first.
    pub fn clique_at(&self, level: usize) -> Vec<VertexId> {
        let mut out = Vec::new();
        let mut cur = self.level_top[level];
        while let Some(i) = cur {
            out.push(self.nodes[i].0);
            cur = self.nodes[i].1;
        }
        out
    }

    pub fn clique_len_at(&self, level: usize) -> usize {
        let mut n = 0;
        let mut cur = self.level_top[level];
        while let Some(i) = cur {
            n += 1;
            cur = self.nodes[i].1;
        }
        n
    }

    /// Level whose step added `v` to the clique.
    pub fn added_at(&self, v: VertexId) -> Option<usize> {
        self.added_at.get(&v).copied()
    }

    /// Whether `v` lies outside the clique at `level` (and is still in the graph).
    pub fn is_outside_at(&self, v: VertexId, level: usize) -> bool {
        self.initial.contains_vertex(v) && self.added_at(v).is_none_or(|a| a > level)
    }
}

/// Runs the reduction of `g` to completion.
pub fn run_trace(g: &Graph) -> Result<ReductionTrace, ReductionError> {
    if g.vertex_count() == 0 {
        return Err(ReductionError::EmptyGraph);
    }
    let mut state = PairState::initial(g.clone());
    let mut steps = Vec::new();
    let mut nodes: Vec<(VertexId, Option<usize>)> = Vec::new();
    let mut level_top = vec![None];
    let mut added_at = std::collections::BTreeMap::new();
    while !state.is_terminal() {
        let step = next_step(&state).expect("non-terminal state has a step");
        let top = *level_top.last().unwrap();
        let new_top = match &step {
            ReductionStep::Add(w) => {
                nodes.push((*w, top));
                added_at.insert(*w, steps.len() + 1);
                Some(nodes.len() - 1)
            }
            ReductionStep::Delete { .. } => nodes[top.expect("delete needs a clique")].1,
        };
        apply_in_place(&mut state, &step);
        steps.push(step);
        level_top.push(new_top);
    }
    Ok(ReductionTrace {
        initial: g.clone(),
        steps,
        nodes,
        level_top,
        added_at,
    })
}

/// Replays `trace` on `initial - removed` up to `level`.
///
/// `removed` may only hold vertices that stay outside every clique up to
/// `level`; rewires of removed vertices are skipped. The result is the state
/// the reduction of `initial - removed` itself reaches as long as some vertex
/// outside the level's clique survives the removal (a joined terminal, in
/// every use by the engine).
pub fn state_at(
    trace: &ReductionTrace,
    level: usize,
    removed: &BTreeSet<VertexId>,
) -> Result<PairState, ReductionError> {
    if level > trace.len() {
        return Err(ReductionError::LevelOutOfRange {
            level,
            len: trace.len(),
        });
    }
    for &r in removed {
        if !trace.initial.contains_vertex(r) {
            return Err(ReductionError::UnknownVertex(r));
        }
        if let Some(a) = trace.added_at(r).filter(|&a| a <= level) {
            return Err(ReductionError::RemovedInClique {
                vertex: r,
                level: a,
            });
        }
    }
    let graph = trace
        .initial
        .induced_delete(removed)
        .expect("removed vertices checked above");
    let mut state = PairState::initial(graph);
    for step in &trace.steps[..level] {
        apply_in_place(&mut state, step);
    }
    Ok(state)
}
