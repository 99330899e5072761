//! Joined path systems and the three ways of moving them one level down a
//! reduction trace.
//!
//! A [`JoinWitness`] at level `i` says that terminals `u_1..u_t`, outside the
//! clique `K_i`, are joined to it by internally disjoint paths, `n_j` of them
//! from `u_j`, no two with the same pair of ends, each avoiding the terminals
//! and the clique in its interior. Paths are stored terminal first.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{path_violation, PathViolation, VertexId, VertexPath};
use crate::reduction::{state_at, PairState, ReductionError, ReductionStep, ReductionTrace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinWitness {
    /// `(u_j, n_j)` in terminal order.
    pub terminals: Vec<(VertexId, usize)>,
    /// Each path runs from a terminal to a clique vertex.
    pub paths: Vec<VertexPath>,
    pub level: usize,
    /// Vertices deleted from the host before replaying the trace.
    pub removed: BTreeSet<VertexId>,
}

/// Reason a witness fails to be a joined system at its level.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JoinViolation {
    #[error("terminal {0} has weight 0")]
    ZeroWeight(VertexId),
    #[error("terminal {0} is listed twice")]
    DuplicateTerminal(VertexId),
    #[error("terminal {0} is not in the level graph")]
    TerminalMissing(VertexId),
    #[error("terminal {0} is a clique vertex")]
    TerminalInClique(VertexId),
    #[error("path {0} does not start at a terminal")]
    NotFromTerminal(usize),
    #[error("path {0} does not end in the clique")]
    NotToClique(usize),
    #[error("path {index} is invalid: {reason}")]
    BadPath { index: usize, reason: PathViolation },
    #[error("path {index} passes through terminal or clique vertex {vertex}")]
    ForbiddenInternal { index: usize, vertex: VertexId },
    #[error("vertex {0} is internal to two paths")]
    InternalOverlap(VertexId),
    #[error("two paths join {0} and {1}")]
    DuplicateEnds(VertexId, VertexId),
    #[error("terminal {terminal} has {found} paths, expected {expected}")]
    WeightMismatch {
        terminal: VertexId,
        expected: usize,
        found: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JoinError {
    #[error("step into level {0} is not a delete")]
    NotADelete(usize),
    #[error("step into level {0} is not an add of the given vertex")]
    NotThisAdd(usize),
    #[error("witness is at level 0, nothing to lift to")]
    AtLevelZero,
    #[error("{0} paths end at the added vertex; at most one can be lifted directly")]
    TooManyAtAdded(usize),
    #[error("{0} paths end at the added vertex; detaching needs at least two")]
    TooFewAtAdded(usize),
    #[error("weights have a unique maximum")]
    UniqueMaximum,
    #[error("no clique vertex is free for terminal {0}")]
    NoFreeCliqueVertex(VertexId),
    #[error("detached weight {m} does not fit a clique of size {clique}")]
    CliqueTooSmall { m: usize, clique: usize },
    #[error("terminal {0} is not in the witness")]
    UnknownTerminal(VertexId),
    #[error("terminal {terminal} has weight {have}, {want} requested")]
    InsufficientWeight {
        terminal: VertexId,
        have: usize,
        want: usize,
    },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("lifted witness is invalid: {0}")]
    Invalid(#[from] JoinViolation),
}

impl JoinWitness {
    pub fn terminal_ids(&self) -> Vec<VertexId> {
        self.terminals.iter().map(|&(u, _)| u).collect()
    }

    pub fn weights(&self) -> Vec<usize> {
        self.terminals.iter().map(|&(_, n)| n).collect()
    }

    /// Paths starting at `u`, in stored order.
    pub fn fan(&self, u: VertexId) -> impl Iterator<Item = &VertexPath> + '_ {
        self.paths.iter().filter(move |p| p.first() == u)
    }

    /// Internal vertices of all paths from `u`.
    pub fn fan_internal(&self, u: VertexId) -> BTreeSet<VertexId> {
        self.fan(u)
            .flat_map(|p| p.internal().iter().copied())
            .collect()
    }

    /// Indices of paths ending at `w`.
    pub fn ending_at(&self, w: VertexId) -> Vec<usize> {
        (0..self.paths.len())
            .filter(|&i| self.paths[i].last() == w)
            .collect()
    }
}

/// True iff the weight sequence has no unique maximum.
pub fn no_unique_maximum(weights: &[usize]) -> bool {
    match weights.iter().max() {
        Some(m) => weights.iter().filter(|&&n| n == *m).count() >= 2,
        None => true,
    }
}

/// Checks every joined-system rule against `state`, which must already be
/// the level state with the witness's removed set deleted.
pub fn validate_witness(w: &JoinWitness, state: &PairState) -> Result<(), JoinViolation> {
    let clique: BTreeSet<VertexId> = state.clique.iter().copied().collect();
    let mut terms = BTreeMap::new();
    for &(u, n) in &w.terminals {
        if n == 0 {
            return Err(JoinViolation::ZeroWeight(u));
        }
        if terms.insert(u, n).is_some() {
            return Err(JoinViolation::DuplicateTerminal(u));
        }
        if !state.graph.contains_vertex(u) {
            return Err(JoinViolation::TerminalMissing(u));
        }
        if clique.contains(&u) {
            return Err(JoinViolation::TerminalInClique(u));
        }
    }
    let mut internal = BTreeSet::new();
    let mut ends = BTreeSet::new();
    let mut counts: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (index, p) in w.paths.iter().enumerate() {
        if let Some(reason) = path_violation(&state.graph, p) {
            return Err(JoinViolation::BadPath { index, reason });
        }
        if !terms.contains_key(&p.first()) {
            return Err(JoinViolation::NotFromTerminal(index));
        }
        if !clique.contains(&p.last()) {
            return Err(JoinViolation::NotToClique(index));
        }
        for &x in p.internal() {
            if terms.contains_key(&x) || clique.contains(&x) {
                return Err(JoinViolation::ForbiddenInternal { index, vertex: x });
            }
            if !internal.insert(x) {
                return Err(JoinViolation::InternalOverlap(x));
            }
        }
        if !ends.insert(p.endpoints()) {
            return Err(JoinViolation::DuplicateEnds(p.first(), p.last()));
        }
        *counts.entry(p.first()).or_default() += 1;
    }
    for (&u, &n) in &terms {
        let found = counts.get(&u).copied().unwrap_or(0);
        if found != n {
            return Err(JoinViolation::WeightMismatch {
                terminal: u,
                expected: n,
                found,
            });
        }
    }
    Ok(())
}

/// Replays the trace to the witness's level and validates there.
pub fn validate_at(trace: &ReductionTrace, w: &JoinWitness) -> Result<(), JoinError> {
    let state = state_at(trace, w.level, &w.removed)?;
    validate_witness(w, &state)?;
    Ok(())
}

/// Moves `w` from the level produced by a delete step to the level before it.
///
/// Only the last edge of a path can be a rewire edge. Within one fan the
/// rewire edges, sorted by clique position of their far end, are each moved
/// one slot back, the first onto the deleted vertex. Interiors are untouched.
pub fn lift_through_delete(
    w: &JoinWitness,
    step: &ReductionStep,
    pre_clique: &[VertexId],
) -> Result<JoinWitness, JoinError> {
    if w.level == 0 {
        return Err(JoinError::AtLevelZero);
    }
    let ReductionStep::Delete { v1, rewires } = step else {
        return Err(JoinError::NotADelete(w.level));
    };
    if pre_clique.first() != Some(v1) {
        return Err(JoinError::NotADelete(w.level));
    }
    let rewired: BTreeMap<VertexId, VertexId> = rewires.iter().copied().collect();
    let pos = |v: VertexId| pre_clique.iter().position(|&c| c == v);
    let mut paths = w.paths.clone();
    for &(u, _) in &w.terminals {
        let mut bad: Vec<(usize, usize)> = paths
            .iter()
            .enumerate()
            .filter(|(_, p)| p.first() == u)
            .filter_map(|(i, p)| {
                let vs = p.vertices();
                let before = vs[vs.len() - 2];
                (rewired.get(&before) == Some(&p.last()))
                    .then(|| (pos(p.last()).expect("path ends in the clique"), i))
            })
            .collect();
        bad.sort_unstable();
        let mut prev = 0;
        for (j, i) in bad {
            paths[i] = paths[i].with_last(pre_clique[prev]);
            prev = j;
        }
    }
    Ok(JoinWitness {
        terminals: w.terminals.clone(),
        paths,
        level: w.level - 1,
        removed: w.removed.clone(),
    })
}

/// Moves `w` across the add of `added` when at most one path ends there.
/// That path is extended to the first clique vertex its terminal does not
/// already reach.
pub fn lift_through_add_single(
    w: &JoinWitness,
    added: VertexId,
    pre_clique: &[VertexId],
) -> Result<JoinWitness, JoinError> {
    if w.level == 0 {
        return Err(JoinError::AtLevelZero);
    }
    if !no_unique_maximum(&w.weights()) {
        return Err(JoinError::UniqueMaximum);
    }
    let hits = w.ending_at(added);
    if hits.len() > 1 {
        return Err(JoinError::TooManyAtAdded(hits.len()));
    }
    let mut paths = w.paths.clone();
    if let Some(&i) = hits.first() {
        let u = paths[i].first();
        let reached: BTreeSet<VertexId> = w.fan(u).map(VertexPath::last).collect();
        let v = pre_clique
            .iter()
            .copied()
            .find(|v| !reached.contains(v))
            .ok_or(JoinError::NoFreeCliqueVertex(u))?;
        paths[i] = paths[i].extended(v);
    }
    Ok(JoinWitness {
        terminals: w.terminals.clone(),
        paths,
        level: w.level - 1,
        removed: w.removed.clone(),
    })
}

/// Result of detaching the paths that end at an added vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Detached {
    /// Witness one level down with `added` as last terminal, weight `m`.
    pub witness: JoinWitness,
    /// The detached paths, each from its terminal to `added`, in terminal order.
    pub detached: Vec<VertexPath>,
    /// Terminals of the detached paths, in terminal order.
    pub u_prime: Vec<VertexId>,
    /// Terminals whose weight dropped to zero; they are left out of `witness`.
    pub exhausted: Vec<VertexId>,
    pub m: usize,
}

/// Detaches the paths ending at `added` (at least two), lowers each affected
/// terminal's weight by one, and joins `added` to the first `m` clique
/// vertices by single edges, `m` being the largest remaining weight.
///
/// Terminals left with weight zero cannot appear in a joined system and are
/// reported in [`Detached::exhausted`] instead. If all of them run out, the
/// returned witness is empty and `added` is not made a terminal.
pub fn detach(
    w: &JoinWitness,
    added: VertexId,
    pre_clique: &[VertexId],
) -> Result<Detached, JoinError> {
    if w.level == 0 {
        return Err(JoinError::AtLevelZero);
    }
    let hits = w.ending_at(added);
    if hits.len() < 2 {
        return Err(JoinError::TooFewAtAdded(hits.len()));
    }
    let mut detached = Vec::new();
    let mut u_prime = Vec::new();
    let mut terminals = Vec::new();
    let mut exhausted = Vec::new();
    for &(u, n) in &w.terminals {
        let mine: Vec<&VertexPath> = hits
            .iter()
            .map(|&i| &w.paths[i])
            .filter(|p| p.first() == u)
            .collect();
        debug_assert!(mine.len() <= 1, "a terminal has one path per clique vertex");
        let n2 = n - mine.len();
        if let Some(p) = mine.first() {
            detached.push((*p).clone());
            u_prime.push(u);
        }
        if n2 == 0 {
            exhausted.push(u);
        } else {
            terminals.push((u, n2));
        }
    }
    let m = terminals.iter().map(|&(_, n)| n).max().unwrap_or(0);
    // m == 0 exactly when every terminal is exhausted: nothing is left to join.
    if m > pre_clique.len() {
        return Err(JoinError::CliqueTooSmall {
            m,
            clique: pre_clique.len(),
        });
    }
    let mut removed = w.removed.clone();
    removed.extend(detached.iter().flat_map(|p| p.internal().iter().copied()));
    let mut paths: Vec<VertexPath> = w
        .paths
        .iter()
        .filter(|p| p.last() != added)
        .cloned()
        .collect();
    paths.extend(pre_clique[..m].iter().map(|&v| VertexPath::edge(added, v)));
    if m > 0 {
        terminals.push((added, m));
    }
    Ok(Detached {
        witness: JoinWitness {
            terminals,
            paths,
            level: w.level - 1,
            removed,
        },
        detached,
        u_prime,
        exhausted,
        m,
    })
}

/// Keeps only the listed terminals, in the listed order, each with exactly the
/// requested weight. Surplus paths are dropped from the end of each fan.
pub fn restrict(w: &JoinWitness, wanted: &[(VertexId, usize)]) -> Result<JoinWitness, JoinError> {
    let have: BTreeMap<VertexId, usize> = w.terminals.iter().copied().collect();
    let mut paths = Vec::new();
    for &(u, want) in wanted {
        let Some(&n) = have.get(&u) else {
            return Err(JoinError::UnknownTerminal(u));
        };
        if n < want {
            return Err(JoinError::InsufficientWeight {
                terminal: u,
                have: n,
                want,
            });
        }
        paths.extend(w.fan(u).take(want).cloned());
    }
    Ok(JoinWitness {
        terminals: wanted.to_vec(),
        paths,
        level: w.level,
        removed: w.removed.clone(),
    })
}
