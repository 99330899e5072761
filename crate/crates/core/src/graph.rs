//! Simple undirected graphs, vertex paths and subdivision certificates.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Vertex identifier. Ids are stable: deleting a vertex never renumbers the rest.
pub type VertexId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(VertexId, VertexId),
}

/// A finite simple undirected graph.
///
/// Adjacency is kept symmetric and ordered so that every traversal, and
/// everything derived from one, is deterministic.
#[derive(Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.adj.keys().collect::<Vec<_>>())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph on `0..n` with no edges.
    pub fn empty(n: usize) -> Self {
        Self::with_vertices(0..n as VertexId)
    }

    pub fn with_vertices(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        Graph {
            adj: vertices.into_iter().map(|v| (v, BTreeSet::new())).collect(),
        }
    }

    /// Graph on `0..n` with the given edges.
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: VertexId) -> bool {
        if self.adj.contains_key(&v) {
            return false;
        }
        self.adj.insert(v, BTreeSet::new());
        true
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        for x in [u, v] {
            if !self.adj.contains_key(&x) {
                return Err(GraphError::UnknownVertex(x));
            }
        }
        if !self.adj.get_mut(&u).unwrap().insert(v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.adj.get_mut(&v).unwrap().insert(u);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        let removed = self.adj.get_mut(&u).is_some_and(|n| n.remove(&v));
        if removed {
            self.adj.get_mut(&v).unwrap().remove(&u);
        }
        removed
    }

    /// Removes `v` and its incident edges in place.
    pub fn remove_vertex(&mut self, v: VertexId) -> bool {
        let Some(nbrs) = self.adj.remove(&v) else {
            return false;
        };
        for u in nbrs {
            self.adj.get_mut(&u).unwrap().remove(&v);
        }
        true
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj.get(&u).is_some_and(|n| n.contains(&v))
    }

    /// Neighbors of `v`; empty if `v` is not a vertex.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.get(&v).into_iter().flat_map(|n| n.iter().copied())
    }

    pub fn neighbor_set(&self, v: VertexId) -> Option<&BTreeSet<VertexId>> {
        self.adj.get(&v)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, n)| n.range(u + 1..).map(move |&v| (u, v)))
    }

    /// The smallest-id vertex of minimum degree, with that degree.
    pub fn min_degree(&self) -> Option<(VertexId, usize)> {
        self.adj
            .iter()
            .map(|(&v, n)| (v, n.len()))
            .min_by_key(|&(v, d)| (d, v))
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut seq: Vec<usize> = self.adj.values().map(BTreeSet::len).collect();
        seq.sort_unstable();
        seq
    }

    pub fn max_vertex(&self) -> Option<VertexId> {
        self.adj.keys().next_back().copied()
    }

    /// `G - S`: a new graph without the vertices of `s`. `self` is untouched.
    pub fn induced_delete(&self, s: &BTreeSet<VertexId>) -> Result<Graph, GraphError> {
        if let Some(&v) = s.iter().find(|v| !self.adj.contains_key(v)) {
            return Err(GraphError::UnknownVertex(v));
        }
        let adj = self
            .adj
            .iter()
            .filter(|(v, _)| !s.contains(v))
            .map(|(&v, n)| (v, n.iter().copied().filter(|u| !s.contains(u)).collect()))
            .collect();
        Ok(Graph { adj })
    }

    /// Subgraph induced by `keep`; vertices not in the graph are ignored.
    pub fn induced_subgraph(&self, keep: &BTreeSet<VertexId>) -> Graph {
        let adj = self
            .adj
            .iter()
            .filter(|(v, _)| keep.contains(v))
            .map(|(&v, n)| (v, n.intersection(keep).copied().collect()))
            .collect();
        Graph { adj }
    }

    /// Copy of the graph with vertices renumbered `0..n` in id order, plus the
    /// map from new ids back to old ones.
    pub fn compacted(&self) -> (Graph, Vec<VertexId>) {
        let old: Vec<VertexId> = self.vertices().collect();
        let index: BTreeMap<VertexId, VertexId> = old
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as VertexId))
            .collect();
        let mut g = Graph::empty(old.len());
        for (u, v) in self.edges() {
            g.add_edge(index[&u], index[&v]).unwrap();
        }
        (g, old)
    }
}

/// A sequence of distinct vertices, consecutive ones adjacent in some host.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexPath(Vec<VertexId>);

impl VertexPath {
    pub fn new(vertices: Vec<VertexId>) -> Self {
        VertexPath(vertices)
    }

    pub fn edge(u: VertexId, v: VertexId) -> Self {
        VertexPath(vec![u, v])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn into_vertices(self) -> Vec<VertexId> {
        self.0
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> VertexId {
        self.0[0]
    }

    pub fn last(&self) -> VertexId {
        *self.0.last().expect("empty path")
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.first(), self.last())
    }

    /// `I(P)`: every vertex except the two ends.
    pub fn internal(&self) -> &[VertexId] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    pub fn reversed(&self) -> VertexPath {
        VertexPath(self.0.iter().rev().copied().collect())
    }

    /// Joins `self` (ending at x) with `other` (starting at x).
    pub fn concat(&self, other: &VertexPath) -> VertexPath {
        assert_eq!(self.last(), other.first(), "paths do not meet");
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0[1..]);
        VertexPath(v)
    }

    /// Appends one vertex at the far end.
    pub fn extended(&self, v: VertexId) -> VertexPath {
        let mut p = self.0.clone();
        p.push(v);
        VertexPath(p)
    }

    /// Replaces the last vertex.
    pub fn with_last(&self, v: VertexId) -> VertexPath {
        let mut p = self.0.clone();
        *p.last_mut().expect("empty path") = v;
        VertexPath(p)
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.0.windows(2).map(|w| (w[0], w[1]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PathViolation {
    #[error("path has fewer than two vertices")]
    TooShort,
    #[error("vertex {0} is not in the graph")]
    MissingVertex(VertexId),
    #[error("vertex {0} repeats")]
    RepeatedVertex(VertexId),
    #[error("{0}-{1} is not an edge")]
    MissingEdge(VertexId, VertexId),
}

/// Why `p` fails to be a path of `g`, if it does.
pub fn path_violation(g: &Graph, p: &VertexPath) -> Option<PathViolation> {
    let vs = p.vertices();
    if vs.len() < 2 {
        return Some(PathViolation::TooShort);
    }
    let mut seen = BTreeSet::new();
    for &v in vs {
        if !g.contains_vertex(v) {
            return Some(PathViolation::MissingVertex(v));
        }
        if !seen.insert(v) {
            return Some(PathViolation::RepeatedVertex(v));
        }
    }
    p.edges()
        .find(|&(u, v)| !g.has_edge(u, v))
        .map(|(u, v)| PathViolation::MissingEdge(u, v))
}

pub fn verify_path(g: &Graph, p: &VertexPath) -> bool {
    path_violation(g, p).is_none()
}

/// A pattern graph `H`, optionally with an ordered list of terminal vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternGraph {
    pub graph: Graph,
    pub terminals: Vec<VertexId>,
}

impl PatternGraph {
    pub fn new(graph: Graph) -> Self {
        PatternGraph {
            graph,
            terminals: Vec::new(),
        }
    }

    pub fn with_terminals(graph: Graph, terminals: Vec<VertexId>) -> Self {
        debug_assert!(terminals.iter().all(|&t| graph.contains_vertex(t)));
        PatternGraph { graph, terminals }
    }

    pub fn terminals_valid(&self) -> bool {
        let distinct: BTreeSet<_> = self.terminals.iter().collect();
        distinct.len() == self.terminals.len()
            && self
                .terminals
                .iter()
                .all(|&t| self.graph.contains_vertex(t))
    }
}

/// A subdivision of `pattern` inside some host graph: branch vertices for every
/// pattern vertex and a host path for every pattern edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionCertificate {
    pub pattern: PatternGraph,
    /// Pattern vertex -> host branch vertex.
    pub branch_map: BTreeMap<VertexId, VertexId>,
    /// Pattern edge `(a, b)` with `a < b` -> host path from `branch_map[a]` to `branch_map[b]`.
    pub edge_paths: BTreeMap<(VertexId, VertexId), VertexPath>,
}

impl SubdivisionCertificate {
    /// Host vertices corresponding to the pattern's terminals, in order.
    pub fn terminal_hosts(&self) -> Vec<VertexId> {
        self.pattern
            .terminals
            .iter()
            .map(|t| self.branch_map[t])
            .collect()
    }

    /// Every host vertex used by the subdivision.
    pub fn host_vertices(&self) -> BTreeSet<VertexId> {
        self.branch_map
            .values()
            .copied()
            .chain(
                self.edge_paths
                    .values()
                    .flat_map(|p| p.vertices().iter().copied()),
            )
            .collect()
    }
}

/// Reason a certificate is rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateViolation {
    #[error("pattern terminal list is malformed")]
    BadTerminals,
    #[error("pattern vertex {0} has no branch vertex")]
    MissingBranch(VertexId),
    #[error("branch map mentions {0}, which is not a pattern vertex")]
    UnknownPatternVertex(VertexId),
    #[error("pattern vertices {0} and {1} share branch vertex {2}")]
    BranchCollision(VertexId, VertexId, VertexId),
    #[error("branch vertex {0} is not in the host")]
    BranchNotInHost(VertexId),
    #[error("pattern edge {0}-{1} has no path")]
    MissingPath(VertexId, VertexId),
    #[error("path recorded for {0}-{1}, which is not a pattern edge")]
    ExtraPath(VertexId, VertexId),
    #[error("path for pattern edge {edge:?} is invalid: {reason}")]
    BadPath {
        edge: (VertexId, VertexId),
        reason: PathViolation,
    },
    #[error("path for pattern edge {edge:?} does not join its branch vertices")]
    EndpointMismatch { edge: (VertexId, VertexId) },
    #[error("host vertex {0} is internal to two paths")]
    InternalOverlap(VertexId),
    #[error("branch vertex {0} is used inside a path")]
    BranchUsedInternally(VertexId),
    #[error("terminal hosts {found:?} differ from expected {expected:?}")]
    TerminalMismatch {
        expected: Vec<VertexId>,
        found: Vec<VertexId>,
    },
}

/// Checks every certificate invariant against `g`. When `expected_terminals`
/// is given, the pattern's terminals must map onto exactly those host vertices.
pub fn check_certificate(
    g: &Graph,
    cert: &SubdivisionCertificate,
    expected_terminals: Option<&[VertexId]>,
) -> Result<(), CertificateViolation> {
    let h = &cert.pattern.graph;
    if !cert.pattern.terminals_valid() {
        return Err(CertificateViolation::BadTerminals);
    }
    for &p in cert.branch_map.keys() {
        if !h.contains_vertex(p) {
            return Err(CertificateViolation::UnknownPatternVertex(p));
        }
    }
    let mut owner: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for p in h.vertices() {
        let Some(&b) = cert.branch_map.get(&p) else {
            return Err(CertificateViolation::MissingBranch(p));
        };
        if !g.contains_vertex(b) {
            return Err(CertificateViolation::BranchNotInHost(b));
        }
        if let Some(&q) = owner.get(&b) {
            return Err(CertificateViolation::BranchCollision(q, p, b));
        }
        owner.insert(b, p);
    }
    for &(a, b) in cert.edge_paths.keys() {
        if !h.has_edge(a, b) || a > b {
            return Err(CertificateViolation::ExtraPath(a, b));
        }
    }
    let mut internal_seen = BTreeSet::new();
    for (a, b) in h.edges() {
        let Some(path) = cert.edge_paths.get(&(a, b)) else {
            return Err(CertificateViolation::MissingPath(a, b));
        };
        if let Some(reason) = path_violation(g, path) {
            return Err(CertificateViolation::BadPath {
                edge: (a, b),
                reason,
            });
        }
        if path.endpoints() != (cert.branch_map[&a], cert.branch_map[&b]) {
            return Err(CertificateViolation::EndpointMismatch { edge: (a, b) });
        }
        for &x in path.internal() {
            if owner.contains_key(&x) {
                return Err(CertificateViolation::BranchUsedInternally(x));
            }
            if !internal_seen.insert(x) {
                return Err(CertificateViolation::InternalOverlap(x));
            }
        }
    }
    if let Some(expected) = expected_terminals {
        let found = cert.terminal_hosts();
        if found != expected {
            return Err(CertificateViolation::TerminalMismatch {
                expected: expected.to_vec(),
                found,
            });
        }
    }
    Ok(())
}

pub fn verify_certificate(g: &Graph, cert: &SubdivisionCertificate) -> bool {
    check_certificate(g, cert, None).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle4() -> Graph {
        Graph::from_edges(5, [(1, 2), (2, 3), (3, 4), (1, 4)])
            .unwrap()
            .induced_delete(&BTreeSet::from([0]))
            .unwrap()
    }

    fn k4() -> Graph {
        Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn identity_k4_cert() -> SubdivisionCertificate {
        let g = k4();
        SubdivisionCertificate {
            branch_map: (0..4).map(|v| (v, v)).collect(),
            edge_paths: g
                .edges()
                .map(|(a, b)| ((a, b), VertexPath::edge(a, b)))
                .collect(),
            pattern: PatternGraph::new(g),
        }
    }

    /// Wheel with hub 0 and rim 1-2-3-4; K4 on {0,1,2,3} where 1-3 goes round via 4.
    fn wheel_cert(path13: Vec<VertexId>) -> (Graph, SubdivisionCertificate) {
        let w4 = Graph::from_edges(
            5,
            [
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (1, 2),
                (2, 3),
                (3, 4),
                (1, 4),
            ],
        )
        .unwrap();
        let mut cert = identity_k4_cert();
        cert.edge_paths.insert((1, 3), VertexPath::new(path13));
        (w4, cert)
    }

    #[test]
    fn delete_from_triangle() {
        let t = Graph::from_edges(4, [(1, 2), (2, 3), (1, 3)]).unwrap();
        let t = t.induced_delete(&BTreeSet::from([0])).unwrap();
        let e = t.induced_delete(&BTreeSet::from([3])).unwrap();
        assert_eq!(e.vertices().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(e.edges().collect::<Vec<_>>(), vec![(1, 2)]);
        assert_eq!(t.vertex_count(), 3, "original untouched");
    }

    #[test]
    fn delete_nothing_is_identity() {
        let g = k4();
        assert_eq!(g.induced_delete(&BTreeSet::new()).unwrap(), g);
    }

    #[test]
    fn delete_unknown_vertex() {
        assert_eq!(
            k4().induced_delete(&BTreeSet::from([9])),
            Err(GraphError::UnknownVertex(9))
        );
    }

    #[test]
    fn delete_ends_of_p63() {
        // P6^3 on 0..6 (v1..v6); removing v1, v6 leaves K4 on v2..v5.
        let mut g = Graph::empty(6);
        for i in 0..6u32 {
            for j in i + 1..6 {
                if j - i <= 3 {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        let r = g.induced_delete(&BTreeSet::from([0, 5])).unwrap();
        assert_eq!(r.vertex_count(), 4);
        assert_eq!(r.edge_count(), 6);
    }

    #[test]
    fn ids_survive_deletion() {
        let g = k4().induced_delete(&BTreeSet::from([1])).unwrap();
        assert_eq!(g.vertices().collect::<Vec<_>>(), vec![0, 2, 3]);
        assert!(g.has_edge(0, 3));
    }

    #[test]
    fn edge_errors() {
        let mut g = Graph::empty(3);
        assert_eq!(g.add_edge(1, 1), Err(GraphError::SelfLoop(1)));
        g.add_edge(0, 1).unwrap();
        assert_eq!(g.add_edge(1, 0), Err(GraphError::DuplicateEdge(0, 1)));
        assert_eq!(g.add_edge(0, 7), Err(GraphError::UnknownVertex(7)));
    }

    #[test]
    fn paths_on_c4() {
        let c4 = cycle4();
        assert!(verify_path(&c4, &VertexPath::new(vec![1, 2, 3])));
        assert_eq!(
            path_violation(&c4, &VertexPath::new(vec![1, 3])),
            Some(PathViolation::MissingEdge(1, 3))
        );
        assert_eq!(
            path_violation(&c4, &VertexPath::new(vec![1, 2, 1])),
            Some(PathViolation::RepeatedVertex(1))
        );
        assert_eq!(
            path_violation(&c4, &VertexPath::new(vec![1])),
            Some(PathViolation::TooShort)
        );
    }

    #[test]
    fn identity_certificate() {
        let cert = identity_k4_cert();
        assert_eq!(check_certificate(&k4(), &cert, None), Ok(()));
        assert_eq!(cert.edge_paths.len(), 6);
    }

    #[test]
    fn wheel_certificate() {
        let (w4, cert) = wheel_cert(vec![1, 4, 3]);
        assert_eq!(check_certificate(&w4, &cert, None), Ok(()));
        let (w4, bad) = wheel_cert(vec![1, 0, 3]);
        assert_eq!(
            check_certificate(&w4, &bad, None),
            Err(CertificateViolation::BranchUsedInternally(0))
        );
    }

    #[test]
    fn reason_codes() {
        let g = k4();
        let mut c = identity_k4_cert();
        c.branch_map.insert(1, 0);
        assert!(matches!(
            check_certificate(&g, &c, None),
            Err(CertificateViolation::BranchCollision(..))
        ));

        let mut c = identity_k4_cert();
        c.edge_paths.insert((0, 1), VertexPath::edge(0, 2));
        assert!(matches!(
            check_certificate(&g, &c, None),
            Err(CertificateViolation::EndpointMismatch { .. })
        ));

        let mut c = identity_k4_cert();
        c.edge_paths.remove(&(2, 3));
        assert_eq!(
            check_certificate(&g, &c, None),
            Err(CertificateViolation::MissingPath(2, 3))
        );

        let mut c = identity_k4_cert();
        c.pattern.terminals = vec![0, 1];
        assert_eq!(check_certificate(&g, &c, Some(&[0, 1])), Ok(()));
        assert!(matches!(
            check_certificate(&g, &c, Some(&[1, 0])),
            Err(CertificateViolation::TerminalMismatch { .. })
        ));
    }

    #[test]
    fn internal_overlap_detected() {
        // Two pattern edges routed through the same subdivision vertex 4.
        let g = Graph::from_edges(5, [(0, 4), (1, 4), (2, 4), (0, 1)]).unwrap();
        let h = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let cert = SubdivisionCertificate {
            pattern: PatternGraph::new(h),
            branch_map: [(0, 0), (1, 1), (2, 2)].into(),
            edge_paths: [
                ((0, 1), VertexPath::new(vec![0, 4, 1])),
                ((1, 2), VertexPath::new(vec![1, 4, 2])),
            ]
            .into(),
        };
        assert_eq!(
            check_certificate(&g, &cert, None),
            Err(CertificateViolation::InternalOverlap(4))
        );
    }
}
