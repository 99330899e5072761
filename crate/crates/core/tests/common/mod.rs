#![allow(dead_code)]

pub mod walk;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use subdiv_core::graph::{Graph, VertexId};
use subdiv_core::oracle::random_min_degree_graph;

pub fn complete(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n as VertexId {
        for v in u + 1..n as VertexId {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

/// Arbitrary graph on `1..=max_n` vertices, each pair an edge with the drawn bit.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::empty(n);
            let mut k = 0;
            for u in 0..n as VertexId {
                for v in u + 1..n as VertexId {
                    if bits[k] {
                        g.add_edge(u, v).unwrap();
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

/// Random graph of minimum degree `d` on `n` vertices from a seed.
pub fn seeded_graph(n: usize, d: usize, extra: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_min_degree_graph(n, d, extra, &mut rng).unwrap()
}

/// `g` with vertex `v` renamed to `perm[v]`.
pub fn relabel(g: &Graph, perm: &[VertexId]) -> Graph {
    let mut h = Graph::with_vertices(g.vertices().map(|v| perm[v as usize]));
    for (u, v) in g.edges() {
        h.add_edge(perm[u as usize], perm[v as usize]).unwrap();
    }
    h
}

pub fn arb_perm(n: usize) -> impl Strategy<Value = Vec<VertexId>> {
    Just((0..n as VertexId).collect::<Vec<_>>()).prop_shuffle()
}
