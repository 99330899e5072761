//! Exhaustive subdivision search, used to cross-check the constructive
//! engine, to decide planarity of small patterns, and to probe goodness.

mod probe;
mod random;
mod search;

use std::collections::BTreeMap;
use std::time::Duration;

use thiserror::Error;

use crate::graph::{Graph, PatternGraph, SubdivisionCertificate, VertexId};
use crate::patterns::NamedPattern;

pub use probe::{probe_goodness, ProbeConfig, ProbeReport, ProbeVerdict};
pub use random::{random_min_degree_graph, GenError};

/// Largest pattern order the search accepts.
pub const MAX_PATTERN_ORDER: usize = 8;

/// Limits for one search. "Absent" is only reported when the search finished
/// inside both limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub time_limit: Duration,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 200_000_000,
            time_limit: Duration::from_secs(300),
        }
    }
}

impl SearchBudget {
    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExhausted { nodes: u64 },
    #[error("pattern has {0} vertices; the oracle is limited to {MAX_PATTERN_ORDER}")]
    PatternTooLarge(usize),
    #[error("fixed branch refers to unknown pattern vertex {0}")]
    UnknownPatternVertex(VertexId),
    #[error("fixed branch refers to unknown host vertex {0}")]
    UnknownHostVertex(VertexId),
}

/// Searches `g` for a subdivision of `h`. `Ok(None)` means the search ran to
/// completion without finding one.
pub fn find_subdivision(
    g: &Graph,
    h: &PatternGraph,
    fixed_branches: &BTreeMap<VertexId, VertexId>,
    budget: SearchBudget,
) -> Result<Option<SubdivisionCertificate>, OracleError> {
    if h.graph.vertex_count() > MAX_PATTERN_ORDER {
        return Err(OracleError::PatternTooLarge(h.graph.vertex_count()));
    }
    search::find(g, h, fixed_branches, budget)
}

/// Kuratowski: planar iff there is no `K_5` and no `K_{3,3}` subdivision.
pub fn is_planar_small(g: &Graph, budget: SearchBudget) -> Result<bool, OracleError> {
    for obstruction in [
        NamedPattern::Complete(5),
        NamedPattern::CompleteBipartite(3, 3),
    ] {
        let h = obstruction.build().expect("fixed pattern");
        if find_subdivision(g, &h, &BTreeMap::new(), budget)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::check_certificate;
    use crate::patterns::build_pn3;

    fn named(p: NamedPattern) -> Graph {
        p.build().unwrap().graph
    }

    fn none() -> BTreeMap<VertexId, VertexId> {
        BTreeMap::new()
    }

    #[test]
    fn k4_in_k4() {
        let k4 = NamedPattern::Complete(4).build().unwrap();
        let cert = find_subdivision(&k4.graph, &k4, &none(), SearchBudget::default())
            .unwrap()
            .unwrap();
        assert_eq!(check_certificate(&k4.graph, &cert, None), Ok(()));
        assert!(cert.edge_paths.values().all(|p| p.len() == 2));
    }

    #[test]
    fn triangle_in_five_cycle() {
        let c5 = named(NamedPattern::Cycle(5));
        let k3 = NamedPattern::Complete(3).build().unwrap();
        let cert = find_subdivision(&c5, &k3, &none(), SearchBudget::default())
            .unwrap()
            .unwrap();
        assert_eq!(check_certificate(&c5, &cert, None), Ok(()));
        assert_eq!(cert.branch_map.len(), 3);
    }

    #[test]
    fn k4_in_k33() {
        // a1 b1 a2 b2 as branches; a1-a2 through b3 and b1-b2 through a3
        let k33 = named(NamedPattern::CompleteBipartite(3, 3));
        let k4 = NamedPattern::Complete(4).build().unwrap();
        let found = find_subdivision(&k33, &k4, &none(), SearchBudget::default()).unwrap();
        let cert = found.expect("K_{3,3} contains a subdivided K4");
        assert_eq!(check_certificate(&k33, &cert, None), Ok(()));
    }

    #[test]
    fn k4_not_in_outerplanar() {
        // fan: path 1..5 plus hub 0; outerplanar, hence no K4 subdivision
        let g = Graph::from_edges(
            6,
            [
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (0, 5),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
            ],
        )
        .unwrap();
        let k4 = NamedPattern::Complete(4).build().unwrap();
        assert_eq!(
            find_subdivision(&g, &k4, &none(), SearchBudget::default()).unwrap(),
            None
        );
    }

    #[test]
    fn fixed_branches_are_respected() {
        let k5 = named(NamedPattern::Complete(5));
        let k3 = NamedPattern::Complete(3).build().unwrap();
        let fixed = BTreeMap::from([(0, 4), (1, 2)]);
        let cert = find_subdivision(&k5, &k3, &fixed, SearchBudget::default())
            .unwrap()
            .unwrap();
        assert_eq!(cert.branch_map[&0], 4);
        assert_eq!(cert.branch_map[&1], 2);
        assert_eq!(
            find_subdivision(&k5, &k3, &BTreeMap::from([(0, 9)]), SearchBudget::default()),
            Err(OracleError::UnknownHostVertex(9))
        );
    }

    #[test]
    fn budget_exhaustion_is_distinct() {
        let ico = named(NamedPattern::Icosahedron);
        let k5 = NamedPattern::Complete(5).build().unwrap();
        assert!(matches!(
            find_subdivision(&ico, &k5, &none(), SearchBudget::nodes(10)),
            Err(OracleError::BudgetExhausted { .. })
        ));
    }

    #[test]
    fn planarity_of_small_graphs() {
        let b = SearchBudget::default();
        assert!(!is_planar_small(&named(NamedPattern::Complete(5)), b).unwrap());
        assert!(!is_planar_small(&named(NamedPattern::CompleteBipartite(3, 3)), b).unwrap());
        assert!(is_planar_small(&named(NamedPattern::Octahedron), b).unwrap());
        assert!(is_planar_small(&build_pn3(7).unwrap().graph, b).unwrap());
        assert!(!is_planar_small(&named(NamedPattern::Petersen), b).unwrap());
    }

    #[test]
    fn adding_an_edge_to_a_maximal_planar_graph_breaks_planarity() {
        let b = SearchBudget::default();
        for base in [named(NamedPattern::Octahedron), build_pn3(7).unwrap().graph] {
            assert!(is_planar_small(&base, b).unwrap());
            let verts: Vec<VertexId> = base.vertices().collect();
            for &u in &verts {
                for &v in &verts {
                    if u < v && !base.has_edge(u, v) {
                        let mut g = base.clone();
                        g.add_edge(u, v).unwrap();
                        assert!(!is_planar_small(&g, b).unwrap(), "{u}-{v}");
                    }
                }
            }
        }
    }

    #[test]
    fn pattern_size_limit() {
        let big = NamedPattern::Complete(11).build().unwrap();
        assert_eq!(
            find_subdivision(&big.graph, &big, &none(), SearchBudget::default()),
            Err(OracleError::PatternTooLarge(11))
        );
    }
}
