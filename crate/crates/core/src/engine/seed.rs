//! Starting witnesses: the seed edge, and the K4 containment reached by
//! descending from it.

use std::collections::BTreeSet;

use crate::graph::{check_certificate, SubdivisionCertificate, VertexId, VertexPath};
use crate::joins::{restrict, validate_at, validate_witness, JoinWitness};
use crate::reduction::{state_at, ReductionStep, ReductionTrace};

use super::{descend, internal, ConfigId, EngineError, Hit, Realization};

/// An edge `u1 u2` outside the clique at `level`, with `(d-1, d-1)`-joins.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedEdge {
    pub level: usize,
    pub u1: VertexId,
    pub u2: VertexId,
    pub witness: JoinWitness,
}

pub(crate) fn check_min_degree(
    g: &crate::graph::Graph,
    required: usize,
) -> Result<(), EngineError> {
    let (vertex, degree) = g.min_degree().ok_or(EngineError::EmptyGraph)?;
    if degree < required {
        return Err(EngineError::DegreeTooLow {
            vertex,
            degree,
            required,
        });
    }
    Ok(())
}

/// Finds the last level at which two adjacent vertices are both outside the clique.
///
/// With `s(v)` the step adding `v`, that level is `i = max_{uv} min(s(u), s(v)) - 1`.
/// `u1` (added at step `i + 1`) sees all of `K_i`; `u2` has `u1` as its only
/// non-clique neighbour, so degree preservation gives it `d - 1` clique neighbours.
pub fn find_seed_edge(trace: &ReductionTrace, d: usize) -> Result<SeedEdge, EngineError> {
    if d < 2 {
        return Err(EngineError::BadParameter(format!(
            "seed edge needs d >= 2, got {d}"
        )));
    }
    check_min_degree(&trace.initial, d)?;
    let s = |v: VertexId| {
        trace
            .added_at(v)
            .expect("every vertex enters the clique once")
    };
    let top = trace
        .initial
        .edges()
        .map(|(u, v)| s(u).min(s(v)))
        .max()
        .ok_or_else(|| internal("graph of positive minimum degree has no edge"))?;
    let level = top - 1;
    let u1 = match trace.step_into(top) {
        Some(&ReductionStep::Add(v)) => v,
        _ => return Err(internal("seed step is not an add")),
    };
    let u2 = trace
        .initial
        .neighbors(u1)
        .find(|&v| s(v) > top)
        .ok_or_else(|| internal("seed vertex has no later neighbour"))?;

    let state = state_at(trace, level, &BTreeSet::new())?;
    let n = d - 1;
    if state.clique.len() < n {
        return Err(internal("seed clique smaller than d - 1"));
    }
    let mut paths: Vec<VertexPath> = state.clique[..n]
        .iter()
        .map(|&k| VertexPath::edge(u1, k))
        .collect();
    let mut seen = 0;
    for &k in &state.clique {
        if seen == n {
            break;
        }
        if state.graph.has_edge(u2, k) {
            paths.push(VertexPath::edge(u2, k));
            seen += 1;
        }
    }
    if seen < n {
        return Err(internal("second seed vertex lacks clique neighbours"));
    }
    let witness = JoinWitness {
        terminals: vec![(u1, n), (u2, n)],
        paths,
        level,
        removed: BTreeSet::new(),
    };
    validate_witness(&witness, &state).map_err(crate::joins::JoinError::from)?;
    Ok(SeedEdge {
        level,
        u1,
        u2,
        witness,
    })
}

/// A subdivision `cert` in the initial graph together with a join from its
/// terminals. The join avoids every non-terminal vertex of `cert`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainmentWitness {
    pub id: ConfigId,
    pub cert: SubdivisionCertificate,
    pub join: JoinWitness,
}

impl ContainmentWitness {
    /// Re-checks the subdivision, the join and their separation.
    pub fn check(&self, trace: &ReductionTrace) -> Result<(), EngineError> {
        let terminals = self.join.terminal_ids();
        check_certificate(&trace.initial, &self.cert, Some(&terminals))?;
        validate_at(trace, &self.join)?;
        if let Some(v) = self
            .cert
            .host_vertices()
            .into_iter()
            .find(|v| !terminals.contains(v) && !self.join.removed.contains(v))
        {
            return Err(internal(format!(
                "subdivision vertex {v} is not removed from the join"
            )));
        }
        Ok(())
    }
}

/// Containment state during the descent: a realization with terminals first
/// and, for C12, the fourth branch vertex last.
struct State {
    id: ConfigId,
    real: Realization,
    join: JoinWitness,
}

/// Descends from the seed edge to a K4 subdivision on three joined terminals
/// plus one more branch vertex, each terminal of weight `d - 3`.
pub fn find_k4_seed(trace: &ReductionTrace, d: usize) -> Result<ContainmentWitness, EngineError> {
    if d < 4 {
        return Err(EngineError::BadParameter(format!(
            "K4 seed needs d >= 4, got {d}"
        )));
    }
    let seed = find_seed_edge(trace, d)?;
    let mut st = State {
        id: ConfigId::C10(d - 1),
        real: Realization {
            branches: vec![seed.u1, seed.u2],
            edges: vec![(seed.u1, seed.u2, VertexPath::edge(seed.u1, seed.u2))],
        },
        join: seed.witness,
    };
    while !matches!(st.id, ConfigId::C13(_)) {
        st = step(trace, st)?;
    }
    let out = ContainmentWitness {
        id: st.id,
        cert: st.real.to_certificate(3),
        join: st.join,
    };
    out.check(trace)?;
    Ok(out)
}

fn step(trace: &ReductionTrace, st: State) -> Result<State, EngineError> {
    let State { id, mut real, join } = st;
    let t = join.terminal_ids();
    let level = join.level;
    let Hit {
        added: w,
        detached,
        hit,
    } = descend(trace, join, false, &mut |_| {})?;
    if detached.witness.level >= level {
        return Err(internal("descent did not lower the level"));
    }
    let spoke = |i: usize| -> VertexPath {
        detached
            .detached
            .iter()
            .find(|p| p.first() == t[i])
            .cloned()
            .expect("hit terminal has a detached path")
    };
    // Replaces the C12 path t1 - x - t3 by a single t1 - t3 edge through x
    // and forgets the x - t2 edge.
    let merge_through_x = |real: &mut Realization| -> Result<(), EngineError> {
        let x = real.branches[3];
        let a = real
            .take_edge(t[0], x)
            .ok_or_else(|| internal("C12 lacks t1-x"))?;
        let b = real
            .take_edge(x, t[2])
            .ok_or_else(|| internal("C12 lacks x-t3"))?;
        real.take_edge(x, t[1])
            .ok_or_else(|| internal("C12 lacks x-t2"))?;
        real.branches.retain(|&v| v != x);
        real.edges.push((t[0], t[2], a.concat(&b)));
        Ok(())
    };

    let (next, terms, order): (ConfigId, Vec<VertexId>, Vec<VertexId>) = match (id, hit.as_slice())
    {
        (ConfigId::C10(e), [0, 1]) => {
            real.branches.push(w);
            for i in [0, 1] {
                real.edges.push((t[i], w, spoke(i)));
            }
            let terms = vec![t[0], t[1], w];
            (ConfigId::C11(e - 1), terms.clone(), terms)
        }
        (ConfigId::C11(e), [0, 1, 2]) => {
            real.branches.push(w);
            for (i, &ti) in t.iter().enumerate() {
                real.edges.push((ti, w, spoke(i)));
            }
            (ConfigId::C13(e - 1), t.clone(), vec![t[0], t[1], t[2], w])
        }
        (ConfigId::C11(e), &[a, b]) => {
            let c = 3 - a - b;
            real.branches.push(w);
            for i in [a, b] {
                real.edges.push((t[i], w, spoke(i)));
            }
            let terms = vec![t[c], t[a], w];
            (ConfigId::C12(e - 1), terms, vec![t[c], t[a], w, t[b]])
        }
        (ConfigId::C12(f), [0, 1, 2]) => {
            merge_through_x(&mut real)?;
            real.branches.push(w);
            for (i, &ti) in t.iter().enumerate() {
                real.edges.push((ti, w, spoke(i)));
            }
            (
                ConfigId::C13(f),
                vec![t[0], t[2], w],
                vec![t[0], t[2], w, t[1]],
            )
        }
        (ConfigId::C12(f), [0, 2]) => {
            real.edges
                .push((t[0], t[2], spoke(0).concat(&spoke(2).reversed())));
            let x = real.branches[3];
            (ConfigId::C13(f), t.clone(), vec![t[0], t[1], t[2], x])
        }
        (ConfigId::C12(f), [1, 2]) => {
            merge_through_x(&mut real)?;
            real.branches.push(w);
            for i in [1, 2] {
                real.edges.push((t[i], w, spoke(i)));
            }
            (
                ConfigId::C12(f),
                vec![t[0], t[2], w],
                vec![t[0], t[2], w, t[1]],
            )
        }
        (ConfigId::C12(f), [0, 1]) => {
            merge_through_x(&mut real)?;
            real.branches.push(w);
            for i in [0, 1] {
                real.edges.push((t[i], w, spoke(i)));
            }
            (
                ConfigId::C12(f),
                vec![t[2], t[0], w],
                vec![t[2], t[0], w, t[1]],
            )
        }
        _ => {
            return Err(internal(format!(
                "{id}: no containment case for paths from terminals {hit:?}"
            )))
        }
    };
    real.branches = order;

    let wanted: Vec<(VertexId, usize)> = terms.iter().copied().zip(next.weights()).collect();
    let mut join = restrict(&detached.witness, &wanted)?;
    if !terms.contains(&w) {
        join.removed.insert(w);
    }
    join.removed.extend(t.iter().filter(|u| !terms.contains(u)));
    Ok(State {
        id: next,
        real,
        join,
    })
}
