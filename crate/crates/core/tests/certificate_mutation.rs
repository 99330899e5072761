//! Damaged certificates must be rejected; intact ones accepted.

mod common;

use proptest::prelude::*;
use subdiv_core::engine::{extract_theorem, Target};
use subdiv_core::graph::{check_certificate, SubdivisionCertificate, VertexPath};

use common::seeded_graph;

#[derive(Debug, Clone, Copy)]
enum Mutation {
    DropPath,
    ReversePath,
    CollideBranches,
    ShareInternal,
    MoveEnd,
    ExtraPatternEdge,
}

fn arb_mutation() -> impl Strategy<Value = Mutation> {
    prop_oneof![
        Just(Mutation::DropPath),
        Just(Mutation::ReversePath),
        Just(Mutation::CollideBranches),
        Just(Mutation::ShareInternal),
        Just(Mutation::MoveEnd),
        Just(Mutation::ExtraPatternEdge),
    ]
}

/// Applies `m`; `None` when this certificate offers nothing to damage that way.
fn mutate(c: &SubdivisionCertificate, m: Mutation, pick: usize) -> Option<SubdivisionCertificate> {
    let mut c = c.clone();
    let keys: Vec<(u32, u32)> = c.edge_paths.keys().copied().collect();
    let key = keys[pick % keys.len()];
    match m {
        Mutation::DropPath => {
            c.edge_paths.remove(&key);
        }
        Mutation::ReversePath => {
            let p = c.edge_paths[&key].reversed();
            c.edge_paths.insert(key, p);
        }
        Mutation::CollideBranches => {
            let b = c.branch_map[&key.1];
            c.branch_map.insert(key.0, b);
        }
        Mutation::ShareInternal => {
            let donor = keys
                .iter()
                .find(|k| !c.edge_paths[k].internal().is_empty())?;
            let x = c.edge_paths[donor].internal()[0];
            let other = keys.iter().find(|k| *k != donor)?;
            let mut vs = c.edge_paths[other].vertices().to_vec();
            vs.insert(1, x);
            c.edge_paths.insert(*other, VertexPath::new(vs));
        }
        Mutation::MoveEnd => {
            let p = &c.edge_paths[&key];
            let stranger = c
                .edge_paths
                .values()
                .flat_map(|q| q.internal().iter().copied())
                .find(|v| !p.vertices().contains(v))?;
            let moved = p.with_last(stranger);
            c.edge_paths.insert(key, moved);
        }
        Mutation::ExtraPatternEdge => {
            let g = &c.pattern.graph;
            let (a, b) = g
                .vertices()
                .flat_map(|a| g.vertices().map(move |b| (a, b)))
                .find(|&(a, b)| a < b && !g.has_edge(a, b))?;
            c.pattern.graph.add_edge(a, b).unwrap();
        }
    }
    Some(c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn damaged_certificates_are_rejected(
        seed in any::<u64>(),
        m in arb_mutation(),
        pick in any::<usize>(),
    ) {
        let g = seeded_graph(12 + (seed % 15) as usize, 5, 0, seed);
        let cert = extract_theorem(&g, Target::P6).unwrap();
        prop_assert_eq!(check_certificate(&g, &cert, None), Ok(()));
        if let Some(bad) = mutate(&cert, m, pick) {
            prop_assert!(check_certificate(&g, &bad, None).is_err(), "{:?} accepted", m);
        }
    }

    #[test]
    fn wrong_terminal_expectation_is_rejected(seed in any::<u64>()) {
        let g = seeded_graph(15, 4, 0, seed);
        let cert = extract_theorem(&g, Target::K5Minus).unwrap();
        let mut t = cert.terminal_hosts();
        prop_assert_eq!(check_certificate(&g, &cert, Some(&t)), Ok(()));
        t.reverse();
        prop_assert!(check_certificate(&g, &cert, Some(&t)).is_err());
    }
}
