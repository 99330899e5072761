use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::graph::{Graph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("cannot reach minimum degree {d} on {n} vertices")]
    Infeasible { n: usize, d: usize },
}

/// Random graph on `0..n` with minimum degree at least `d`.
///
/// Starts from `d / 2` random perfect matchings, then repeatedly joins a
/// uniformly chosen deficient vertex to a random non-neighbour (another
/// deficient one when possible), and finally adds `extra` uniform random edges.
/// The result is close to `d`-regular when `extra` is zero, which is the
/// sparse regime where subdivisions are hardest to find.
pub fn random_min_degree_graph<R: Rng + ?Sized>(
    n: usize,
    d: usize,
    extra: usize,
    rng: &mut R,
) -> Result<Graph, GenError> {
    if n < d + 1 {
        return Err(GenError::Infeasible { n, d });
    }
    let mut g = Graph::empty(n);
    let mut perm: Vec<VertexId> = (0..n as VertexId).collect();
    for _ in 0..d / 2 {
        perm.shuffle(rng);
        for pair in perm.chunks_exact(2) {
            let _ = g.add_edge(pair[0], pair[1]);
        }
    }
    loop {
        let deficient: Vec<VertexId> = g.vertices().filter(|&v| g.degree(v) < d).collect();
        let Some(&v) = deficient.choose(rng) else {
            break;
        };
        let mut pool: Vec<VertexId> = deficient
            .iter()
            .copied()
            .filter(|&u| u != v && !g.has_edge(u, v))
            .collect();
        if pool.is_empty() {
            pool = g
                .vertices()
                .filter(|&u| u != v && !g.has_edge(u, v))
                .collect();
        }
        let &u = pool.choose(rng).expect("n > d leaves a non-neighbour");
        g.add_edge(u, v).unwrap();
    }
    let max_edges = n * (n - 1) / 2;
    for _ in 0..extra {
        if g.edge_count() == max_edges {
            break;
        }
        loop {
            let u = rng.gen_range(0..n as VertexId);
            let v = rng.gen_range(0..n as VertexId);
            if u != v && g.add_edge(u, v).is_ok() {
                break;
            }
        }
    }
    Ok(g)
}
