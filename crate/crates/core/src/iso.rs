//! Isomorphism testing and canonical forms for small graphs.
//!
//! Both rest on colour refinement: vertices start with an invariant colour
//! (degree, terminal position) and are repeatedly recoloured by the multiset of
//! their neighbours' colours until the partition is stable.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{Graph, VertexId};

/// Largest order accepted by [`are_isomorphic`].
pub const MAX_ISO_ORDER: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("graph has {0} vertices; isomorphism is limited to {MAX_ISO_ORDER}")]
    TooLarge(usize),
}

/// Dense 0..n view of a graph.
struct Dense {
    adj: Vec<Vec<bool>>,
    nbrs: Vec<Vec<usize>>,
}

impl Dense {
    fn new(g: &Graph) -> (Dense, Vec<VertexId>) {
        let (c, old) = g.compacted();
        let n = old.len();
        let mut adj = vec![vec![false; n]; n];
        let mut nbrs = vec![Vec::new(); n];
        for (u, v) in c.edges() {
            let (u, v) = (u as usize, v as usize);
            adj[u][v] = true;
            adj[v][u] = true;
            nbrs[u].push(v);
            nbrs[v].push(u);
        }
        (Dense { adj, nbrs }, old)
    }

    fn len(&self) -> usize {
        self.adj.len()
    }
}

/// Replaces arbitrary sortable keys by their rank among the distinct keys.
fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).unwrap() as u32)
        .collect()
}

fn class_count(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Stable refinement of `colors`. Colour names are isomorphism-invariant.
fn refine(g: &Dense, colors: Vec<u32>) -> Vec<u32> {
    let mut colors = rank(&colors);
    let mut classes = class_count(&colors);
    loop {
        let keys: Vec<(u32, Vec<u32>)> = (0..g.len())
            .map(|v| {
                let mut nc: Vec<u32> = g.nbrs[v].iter().map(|&u| colors[u]).collect();
                nc.sort_unstable();
                (colors[v], nc)
            })
            .collect();
        let next = rank(&keys);
        let next_classes = class_count(&next);
        colors = next;
        if next_classes == classes {
            return colors;
        }
        classes = next_classes;
    }
}

fn initial_colors(g: &Dense, old: &[VertexId], terminals: &[VertexId]) -> Vec<u32> {
    (0..g.len())
        .map(|v| {
            let t = terminals
                .iter()
                .position(|&x| x == old[v])
                .map_or(0, |i| i as u32 + 1);
            t * 1000 + g.nbrs[v].len() as u32
        })
        .collect()
}

/// Decides whether `g1` and `g2` are isomorphic.
pub fn are_isomorphic(g1: &Graph, g2: &Graph) -> Result<bool, IsoError> {
    are_isomorphic_fixing(g1, &[], g2, &[])
}

/// Isomorphism that must send `t1[i]` to `t2[i]` for every i.
pub fn are_isomorphic_fixing(
    g1: &Graph,
    t1: &[VertexId],
    g2: &Graph,
    t2: &[VertexId],
) -> Result<bool, IsoError> {
    for g in [g1, g2] {
        if g.vertex_count() > MAX_ISO_ORDER {
            return Err(IsoError::TooLarge(g.vertex_count()));
        }
    }
    if g1.vertex_count() != g2.vertex_count()
        || g1.edge_count() != g2.edge_count()
        || t1.len() != t2.len()
        || g1.degree_sequence() != g2.degree_sequence()
    {
        return Ok(false);
    }
    let n = g1.vertex_count();
    // Refine the disjoint union so colours are comparable across both graphs.
    let mut union = Graph::empty(2 * n);
    let (d1, old1) = Dense::new(g1);
    let (d2, old2) = Dense::new(g2);
    for (offset, d) in [(0, &d1), (n, &d2)] {
        for u in 0..n {
            for &v in d.nbrs[u].iter().filter(|&&v| v > u) {
                union
                    .add_edge((u + offset) as VertexId, (v + offset) as VertexId)
                    .unwrap();
            }
        }
    }
    let (du, _) = Dense::new(&union);
    let mut init = initial_colors(&d1, &old1, t1);
    init.extend(initial_colors(&d2, &old2, t2));
    let colors = refine(&du, init);
    let (c1, c2) = colors.split_at(n);
    let mut h1 = c1.to_vec();
    let mut h2 = c2.to_vec();
    h1.sort_unstable();
    h2.sort_unstable();
    if h1 != h2 {
        return Ok(false);
    }
    // Map vertices of g1 in order of increasing colour-class size.
    let mut class_size: BTreeMap<u32, usize> = BTreeMap::new();
    for &c in c1 {
        *class_size.entry(c).or_default() += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (class_size[&c1[v]], c1[v], v));
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    Ok(extend_iso(&d1, &d2, c1, c2, &order, 0, &mut map, &mut used))
}

#[allow(clippy::too_many_arguments)]
fn extend_iso(
    d1: &Dense,
    d2: &Dense,
    c1: &[u32],
    c2: &[u32],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..d2.len() {
        if used[w] || c2[w] != c1[v] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&u| d1.adj[v][u] == d2.adj[w][map[u]]);
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend_iso(d1, d2, c1, c2, order, depth + 1, map, used) {
            return true;
        }
        used[w] = false;
    }
    map[v] = usize::MAX;
    false
}

/// A labelling-independent representation of a graph: the order and the
/// edge list under the canonical relabelling.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub order: usize,
    pub edges: Vec<(VertexId, VertexId)>,
}

impl CanonicalForm {
    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.order, self.edges.iter().copied()).unwrap()
    }
}

/// Canonical form by individualisation-refinement: the lexicographically
/// smallest adjacency bit string over all leaves of the search tree.
///
/// No automorphism pruning, so this is only meant for the small patterns
/// produced by enumeration.
pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let (d, _) = Dense::new(g);
    let init: Vec<u32> = (0..d.len()).map(|v| d.nbrs[v].len() as u32).collect();
    let colors = refine(&d, init);
    let mut best: Option<Vec<bool>> = None;
    let mut best_perm = Vec::new();
    search_canon(&d, colors, &mut best, &mut best_perm);
    let n = d.len();
    // best_perm[v] = canonical position of vertex v
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    for u in 0..n {
        for &v in &d.nbrs[u] {
            let (a, b) = (best_perm[u] as VertexId, best_perm[v] as VertexId);
            if a < b {
                edges.push((a, b));
            }
        }
    }
    edges.sort_unstable();
    CanonicalForm { order: n, edges }
}

fn search_canon(
    d: &Dense,
    colors: Vec<u32>,
    best: &mut Option<Vec<bool>>,
    best_perm: &mut Vec<usize>,
) {
    let n = d.len();
    if class_count(&colors) == n {
        // colours are a permutation of 0..n
        let perm: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
        let mut inv = vec![0; n];
        for (v, &p) in perm.iter().enumerate() {
            inv[p] = v;
        }
        let mut bits = Vec::with_capacity(n * n / 2);
        for i in 0..n {
            for j in i + 1..n {
                bits.push(d.adj[inv[i]][inv[j]]);
            }
        }
        if best.as_ref().is_none_or(|b| bits < *b) {
            *best = Some(bits);
            *best_perm = perm;
        }
        return;
    }
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &c in &colors {
        *counts.entry(c).or_default() += 1;
    }
    let target = counts
        .iter()
        .find(|&(_, &k)| k > 1)
        .map(|(&c, _)| c)
        .unwrap();
    for x in (0..n).filter(|&v| colors[v] == target) {
        let ind: Vec<u32> = colors
            .iter()
            .enumerate()
            .map(|(v, &c)| 2 * c + u32::from(v != x))
            .collect();
        search_canon(d, refine(d, ind), best, best_perm);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n as VertexId {
            for v in u + 1..n as VertexId {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    #[test]
    fn relabelled_graphs_share_canonical_form() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 2)]).unwrap();
        let h = Graph::from_edges(5, [(4, 3), (3, 2), (2, 1), (1, 0), (4, 2)]).unwrap();
        assert_eq!(canonical_form(&g), canonical_form(&h));
        assert!(are_isomorphic(&g, &h).unwrap());
        assert_eq!(canonical_form(&g).to_graph().edge_count(), 5);
    }

    #[test]
    fn complete_graphs_are_cheap() {
        assert!(are_isomorphic(&complete(12), &complete(12)).unwrap());
    }

    #[test]
    fn size_limit() {
        assert_eq!(
            are_isomorphic(&complete(13), &complete(13)),
            Err(IsoError::TooLarge(13))
        );
    }

    #[test]
    fn terminals_constrain_the_map() {
        // Path 0-1-2: the ends are interchangeable, the middle is not.
        let p = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert!(are_isomorphic_fixing(&p, &[0], &p, &[2]).unwrap());
        assert!(!are_isomorphic_fixing(&p, &[0], &p, &[1]).unwrap());
    }

    #[test]
    fn same_degrees_different_graphs() {
        // C6 versus two triangles.
        let c6 = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]).unwrap();
        let tt = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(!are_isomorphic(&c6, &tt).unwrap());
        assert_ne!(canonical_form(&c6), canonical_form(&tt));
    }
}
