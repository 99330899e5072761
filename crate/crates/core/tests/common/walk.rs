//! Random joined systems and a walker that lifts them down the trace,
//! checking each lifting guarantee at every level.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use subdiv_core::graph::{VertexId, VertexPath};
use subdiv_core::joins::{
    detach, lift_through_add_single, lift_through_delete, no_unique_maximum, validate_at,
    JoinWitness,
};
use subdiv_core::reduction::{state_at, ReductionStep, ReductionTrace};

/// A joined system at a random level: 2-4 terminals outside the clique, fans
/// of single edges or two-edge paths through unused outside vertices, and
/// weights adjusted so the maximum is shared.
pub fn random_witness(trace: &ReductionTrace, rng: &mut ChaCha8Rng) -> Option<JoinWitness> {
    let level = rng.gen_range(1..=trace.len());
    let state = state_at(trace, level, &BTreeSet::new()).unwrap();
    let clique = &state.clique;
    let mut outside: Vec<VertexId> = state.outside().into_iter().collect();
    outside.shuffle(rng);
    let k = rng.gen_range(2..=4).min(outside.len());
    if k < 2 {
        return None;
    }
    let terminals: Vec<VertexId> = outside[..k].to_vec();
    let mut free: BTreeSet<VertexId> = outside[k..].iter().copied().collect();
    let mut fans: Vec<(VertexId, Vec<VertexPath>)> = Vec::new();
    for &u in &terminals {
        let mut fan = Vec::new();
        for &c in clique {
            if rng.gen_bool(0.3) {
                continue;
            }
            if state.graph.has_edge(u, c) && rng.gen_bool(0.6) {
                fan.push(VertexPath::edge(u, c));
                continue;
            }
            let via = free
                .iter()
                .copied()
                .find(|&x| state.graph.has_edge(u, x) && state.graph.has_edge(x, c));
            if let Some(x) = via {
                free.remove(&x);
                fan.push(VertexPath::new(vec![u, x, c]));
            } else if state.graph.has_edge(u, c) {
                fan.push(VertexPath::edge(u, c));
            }
        }
        if fan.is_empty() {
            return None;
        }
        fans.push((u, fan));
    }
    let mut weights: Vec<usize> = fans.iter().map(|(_, f)| f.len()).collect();
    let mut sorted = weights.clone();
    sorted.sort_unstable();
    let (top, second) = (sorted[k - 1], sorted[k - 2]);
    for w in weights.iter_mut() {
        *w = (*w).min(second);
    }
    debug_assert!(top >= second);
    let mut out = JoinWitness {
        terminals: Vec::new(),
        paths: Vec::new(),
        level,
        removed: BTreeSet::new(),
    };
    for ((u, fan), w) in fans.into_iter().zip(weights) {
        out.terminals.push((u, w));
        out.paths.extend(fan.into_iter().take(w));
    }
    Some(out)
}

pub fn internals_by_terminal(w: &JoinWitness) -> BTreeMap<VertexId, Vec<VertexId>> {
    w.terminal_ids()
        .into_iter()
        .map(|u| {
            let mut v: Vec<VertexId> = w
                .fan(u)
                .flat_map(|p| p.internal().iter().copied())
                .collect();
            v.sort_unstable();
            (u, v)
        })
        .collect()
}

#[derive(Debug, Default)]
pub struct Counts {
    pub deletes: usize,
    pub adds: usize,
    pub detaches: usize,
}

/// Lifts `w` to level 0 (or until every terminal is exhausted), checking
/// each lift's guarantee on the way.
pub fn walk(trace: &ReductionTrace, mut w: JoinWitness) -> Result<Counts, TestCaseError> {
    let mut counts = Counts::default();
    validate_at(trace, &w).map_err(|e| TestCaseError::fail(format!("initial: {e}")))?;
    while w.level > 0 && !w.terminals.is_empty() {
        let step = trace.step_into(w.level).unwrap();
        let pre = trace.clique_at(w.level - 1);
        let next = match step {
            ReductionStep::Delete { .. } => {
                let out = lift_through_delete(&w, step, &pre).unwrap();
                prop_assert_eq!(internals_by_terminal(&out), internals_by_terminal(&w));
                prop_assert_eq!(out.weights(), w.weights());
                counts.deletes += 1;
                out
            }
            &ReductionStep::Add(a) if w.ending_at(a).len() <= 1 => {
                let out = lift_through_add_single(&w, a, &pre).unwrap();
                prop_assert_eq!(out.weights(), w.weights());
                counts.adds += 1;
                out
            }
            &ReductionStep::Add(a) => {
                let hit = w.ending_at(a);
                let d = detach(&w, a, &pre).unwrap();
                prop_assert_eq!(d.witness.paths.len(), w.paths.len() - hit.len() + d.m);
                let mut expect = w.removed.clone();
                expect.extend(
                    hit.iter()
                        .flat_map(|&i| w.paths[i].internal().iter().copied()),
                );
                prop_assert_eq!(&d.witness.removed, &expect);
                prop_assert!(no_unique_maximum(&d.witness.weights()));
                counts.detaches += 1;
                d.witness
            }
        };
        prop_assert_eq!(next.level, w.level - 1);
        if !next.terminals.is_empty() {
            validate_at(trace, &next)
                .map_err(|e| TestCaseError::fail(format!("level {}: {e}", next.level)))?;
        }
        w = next;
    }
    Ok(counts)
}
