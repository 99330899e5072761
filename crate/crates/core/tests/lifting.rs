//! Random joined systems carried down the trace by the three lifts.

mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subdiv_core::engine::{extract_observed, find_seed_edge, ConfigId, ExtractOptions, LiftEvent};
use subdiv_core::graph::VertexPath;
use subdiv_core::joins::{lift_through_delete, validate_at, JoinWitness};
use subdiv_core::reduction::{run_trace, ReductionStep};

use common::seeded_graph;
use common::walk::{internals_by_terminal, random_witness, walk, Counts};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_witnesses_lift_to_level_zero(seed in any::<u64>(), n in 5usize..24, d in 2usize..6) {
        prop_assume!(n > d + 1);
        let g = seeded_graph(n, d, n / 2, seed);
        let trace = run_trace(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xA5A5);
        if let Some(w) = random_witness(&trace, &mut rng) {
            walk(&trace, w)?;
        }
    }

    /// Same checks on the lifts the engine itself performs.
    #[test]
    fn engine_lifts_keep_their_guarantees(seed in any::<u64>(), n in 7usize..30) {
        let g = seeded_graph(n, 5, 0, seed);
        let trace = run_trace(&g).unwrap();
        let seed_edge = find_seed_edge(&trace, 5).unwrap();
        let mut failures = Vec::new();
        let mut last_level = usize::MAX;
        let mut observer = |e: &LiftEvent<'_>| match e {
            LiftEvent::Delete { before, after } => {
                if internals_by_terminal(before) != internals_by_terminal(after) {
                    failures.push(format!("delete into {} changed internals", before.level));
                }
            }
            LiftEvent::AddSingle { before, after, .. } => {
                if before.weights() != after.weights() {
                    failures.push(format!("add into {} changed weights", before.level));
                }
            }
            LiftEvent::Detach { before, result, added } => {
                let hit = before.ending_at(*added).len();
                if result.witness.paths.len() != before.paths.len() - hit + result.m {
                    failures.push(format!("detach at {} path count", before.level));
                }
            }
            LiftEvent::Dispatch { level, .. } => {
                if *level >= last_level {
                    failures.push(format!("dispatch level {level} did not decrease"));
                }
                last_level = *level;
            }
        };
        let opts = ExtractOptions { validate_each_level: true, check_membership: true };
        extract_observed(ConfigId::C5, &seed_edge.witness, &trace, opts, &mut observer).unwrap();
        prop_assert!(failures.is_empty(), "{:?}", failures);
    }
}

#[test]
fn walker_exercises_every_lift() {
    let mut total = Counts::default();
    let mut built = 0;
    for seed in 0..100u64 {
        let g = seeded_graph(8 + (seed % 20) as usize, 3 + (seed % 3) as usize, 6, seed);
        let trace = run_trace(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some(w) = random_witness(&trace, &mut rng) {
            built += 1;
            let c = walk(&trace, w).unwrap();
            total.deletes += c.deletes;
            total.adds += c.adds;
            total.detaches += c.detaches;
        }
    }
    assert!(built >= 50, "only {built} witnesses built");
    assert!(
        total.deletes > 0 && total.adds > 0 && total.detaches > 0,
        "{total:?}"
    );
}

#[test]
fn rewired_edge_moves_back_to_deleted_vertex() {
    // K4 on 0..4 plus 4 ~ {1, 3}. After four adds the clique is (3, 2, 1, 0);
    // deleting 3 rewires 4 to 2, the first clique vertex it misses.
    let mut g = common::complete(4);
    g.add_vertex(4);
    g.add_edge(4, 1).unwrap();
    g.add_edge(4, 3).unwrap();
    let trace = run_trace(&g).unwrap();
    let step = trace.step_into(5).unwrap();
    assert_eq!(
        step,
        &ReductionStep::Delete {
            v1: 3,
            rewires: vec![(4, 2)]
        }
    );
    let pre = trace.clique_at(4);
    assert_eq!(pre, vec![3, 2, 1, 0]);
    let w = JoinWitness {
        terminals: vec![(4, 2)],
        paths: vec![VertexPath::edge(4, 2), VertexPath::edge(4, 1)],
        level: 5,
        removed: BTreeSet::new(),
    };
    validate_at(&trace, &w).unwrap();
    let lifted = lift_through_delete(&w, step, &pre).unwrap();
    assert_eq!(
        lifted.paths,
        vec![VertexPath::edge(4, 3), VertexPath::edge(4, 1)]
    );
    validate_at(&trace, &lifted).unwrap();
}
