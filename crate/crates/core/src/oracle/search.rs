//! Backtracking topological-minor search.
//!
//! Pattern vertices are placed one at a time; as soon as both ends of a pattern
//! edge are placed the edge is routed as a host path through unused vertices.
//! Two reductions keep the search complete while shrinking it:
//!
//! * shortcutting a chord of a path only frees vertices, so only induced paths
//!   are enumerated (in particular, adjacent branch vertices use the edge);
//! * interchangeable pattern vertices (true or false twins) are placed on
//!   increasing host ids.

use std::collections::{BTreeMap, VecDeque};
use std::time::Instant;

use crate::graph::{Graph, PatternGraph, SubdivisionCertificate, VertexId, VertexPath};

use super::{OracleError, SearchBudget};

struct Host {
    ids: Vec<VertexId>,
    adj: Vec<Vec<bool>>,
    nbrs: Vec<Vec<usize>>,
}

struct Pattern {
    ids: Vec<VertexId>,
    edges: Vec<(usize, usize)>,
    /// incident edge indices per vertex
    incident: Vec<Vec<usize>>,
    degree: Vec<usize>,
}

struct Search<'a> {
    host: &'a Host,
    pat: &'a Pattern,
    order: Vec<usize>,
    /// edges to route right after placing `order[i]`
    edges_after: Vec<Vec<usize>>,
    /// (u, v) with u placed on a smaller host id than v
    twin_pairs: Vec<(usize, usize)>,
    fixed: Vec<Option<usize>>,
    assign: Vec<Option<usize>>,
    used: Vec<bool>,
    routes: Vec<Option<Vec<usize>>>,
    nodes: u64,
    budget: SearchBudget,
    start: Instant,
    exhausted: bool,
}

enum Flow {
    Found,
    Continue,
    Abort,
}

pub(super) fn find(
    g: &Graph,
    h: &PatternGraph,
    fixed_branches: &BTreeMap<VertexId, VertexId>,
    budget: SearchBudget,
) -> Result<Option<SubdivisionCertificate>, OracleError> {
    let (hc, host_ids) = g.compacted();
    let n = host_ids.len();
    let host_index: BTreeMap<VertexId, usize> =
        host_ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj = vec![vec![false; n]; n];
    let mut nbrs = vec![Vec::new(); n];
    for (u, v) in hc.edges() {
        let (u, v) = (u as usize, v as usize);
        adj[u][v] = true;
        adj[v][u] = true;
        nbrs[u].push(v);
        nbrs[v].push(u);
    }
    let host = Host {
        ids: host_ids,
        adj,
        nbrs,
    };

    let pat_ids: Vec<VertexId> = h.graph.vertices().collect();
    let pat_index: BTreeMap<VertexId, usize> =
        pat_ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let k = pat_ids.len();
    let edges: Vec<(usize, usize)> = h
        .graph
        .edges()
        .map(|(a, b)| (pat_index[&a], pat_index[&b]))
        .collect();
    let mut incident = vec![Vec::new(); k];
    for (i, &(a, b)) in edges.iter().enumerate() {
        incident[a].push(i);
        incident[b].push(i);
    }
    let degree = incident.iter().map(Vec::len).collect();
    let pat = Pattern {
        ids: pat_ids,
        edges,
        incident,
        degree,
    };

    let mut fixed = vec![None; k];
    for (&p, &x) in fixed_branches {
        let pi = *pat_index
            .get(&p)
            .ok_or(OracleError::UnknownPatternVertex(p))?;
        let xi = *host_index
            .get(&x)
            .ok_or(OracleError::UnknownHostVertex(x))?;
        fixed[pi] = Some(xi);
    }
    if k > n {
        return Ok(None);
    }

    let order = placement_order(&pat, &fixed);
    let mut position = vec![0; k];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let edges_after = order
        .iter()
        .map(|&v| {
            let mut es: Vec<usize> = pat.incident[v]
                .iter()
                .copied()
                .filter(|&e| {
                    let (a, b) = pat.edges[e];
                    let other = if a == v { b } else { a };
                    position[other] < position[v]
                })
                .collect();
            // most constrained first: endpoints of high pattern degree
            es.sort_by_key(|&e| {
                let (a, b) = pat.edges[e];
                std::cmp::Reverse(pat.degree[a] + pat.degree[b])
            });
            es
        })
        .collect();

    let twin_pairs = twin_pairs(h, &pat, &fixed);

    let mut s = Search {
        host: &host,
        pat: &pat,
        order,
        edges_after,
        twin_pairs,
        fixed,
        assign: vec![None; k],
        used: vec![false; n],
        routes: vec![None; pat.edges.len()],
        nodes: 0,
        budget,
        start: Instant::now(),
        exhausted: false,
    };
    match s.place(0) {
        Flow::Found => Ok(Some(s.certificate(h))),
        Flow::Abort => Err(OracleError::BudgetExhausted { nodes: s.nodes }),
        Flow::Continue => {
            debug_assert!(!s.exhausted);
            Ok(None)
        }
    }
}

/// Fixed vertices first, then repeatedly the vertex with most placed
/// neighbours (ties: higher degree, lower index).
fn placement_order(pat: &Pattern, fixed: &[Option<usize>]) -> Vec<usize> {
    let k = pat.ids.len();
    let mut placed = vec![false; k];
    let mut order: Vec<usize> = (0..k).filter(|&v| fixed[v].is_some()).collect();
    for &v in &order {
        placed[v] = true;
    }
    let neighbours = |v: usize| {
        pat.incident[v].iter().map(move |&e| {
            let (a, b) = pat.edges[e];
            if a == v {
                b
            } else {
                a
            }
        })
    };
    while order.len() < k {
        let next = (0..k)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let linked = neighbours(v).filter(|&u| placed[u]).count();
                (linked, pat.degree[v], std::cmp::Reverse(v))
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    order
}

fn twin_pairs(h: &PatternGraph, pat: &Pattern, fixed: &[Option<usize>]) -> Vec<(usize, usize)> {
    let g = &h.graph;
    let k = pat.ids.len();
    let mut pairs = Vec::new();
    for u in 0..k {
        for v in u + 1..k {
            if fixed[u].is_some() || fixed[v].is_some() {
                continue;
            }
            let (a, b) = (pat.ids[u], pat.ids[v]);
            let mut na: Vec<VertexId> = g.neighbors(a).filter(|&x| x != b).collect();
            let mut nb: Vec<VertexId> = g.neighbors(b).filter(|&x| x != a).collect();
            na.sort_unstable();
            nb.sort_unstable();
            if na == nb {
                pairs.push((u, v));
            }
        }
    }
    pairs
}

impl Search<'_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        let timed_out =
            self.nodes.is_multiple_of(4096) && self.start.elapsed() > self.budget.time_limit;
        if self.nodes > self.budget.max_nodes || timed_out {
            self.exhausted = true;
        }
        !self.exhausted
    }

    fn place(&mut self, depth: usize) -> Flow {
        if depth == self.order.len() {
            return Flow::Found;
        }
        if !self.tick() {
            return Flow::Abort;
        }
        let v = self.order[depth];
        let need = self.pat.degree[v];
        let mut cands: Vec<usize> = match self.fixed[v] {
            Some(x) => vec![x],
            None => (0..self.host.ids.len()).collect(),
        };
        cands.retain(|&x| !self.used[x] && self.host.nbrs[x].len() >= need);
        cands.retain(|&x| self.twin_order_ok(v, x));
        // prefer hosts adjacent to the images of already placed neighbours
        let linked = |x: usize| {
            self.pat.incident[v]
                .iter()
                .filter_map(|&e| {
                    let (a, b) = self.pat.edges[e];
                    self.assign[if a == v { b } else { a }]
                })
                .filter(|&y| self.host.adj[x][y])
                .count()
        };
        cands.sort_by_key(|&x| {
            (
                std::cmp::Reverse(linked(x)),
                std::cmp::Reverse(self.host.nbrs[x].len()),
                x,
            )
        });
        for x in cands {
            self.assign[v] = Some(x);
            self.used[x] = true;
            if self.capacity_ok() {
                match self.route(depth, 0) {
                    Flow::Continue => {}
                    other => return other,
                }
            }
            self.used[x] = false;
            self.assign[v] = None;
        }
        Flow::Continue
    }

    fn twin_order_ok(&self, v: usize, x: usize) -> bool {
        self.twin_pairs.iter().all(|&(a, b)| {
            if a == v {
                self.assign[b].is_none_or(|y| x < y)
            } else if b == v {
                self.assign[a].is_none_or(|y| y < x)
            } else {
                true
            }
        })
    }

    /// Every placed branch vertex still has room for its unrouted edges.
    fn capacity_ok(&self) -> bool {
        for (p, &xa) in self.assign.iter().enumerate() {
            let Some(x) = xa else { continue };
            let pending: Vec<usize> = self.pat.incident[p]
                .iter()
                .copied()
                .filter(|&e| self.routes[e].is_none())
                .collect();
            if pending.is_empty() {
                continue;
            }
            // A free neighbour, or the branch vertex at the far end of a pending edge.
            let room = self.host.nbrs[x]
                .iter()
                .filter(|&&y| {
                    !self.used[y]
                        || pending.iter().any(|&e| {
                            let (a, b) = self.pat.edges[e];
                            let other = if a == p { b } else { a };
                            self.assign[other] == Some(y)
                        })
                })
                .count();
            if room < pending.len() {
                return false;
            }
        }
        true
    }

    fn route(&mut self, depth: usize, j: usize) -> Flow {
        let Some(&e) = self.edges_after[depth].get(j) else {
            return self.place(depth + 1);
        };
        let (a, b) = self.pat.edges[e];
        let s = self.assign[a].unwrap();
        let t = self.assign[b].unwrap();
        if self.host.adj[s][t] {
            self.routes[e] = Some(vec![s, t]);
            let flow = if self.capacity_ok() {
                self.route(depth, j + 1)
            } else {
                Flow::Continue
            };
            if !matches!(flow, Flow::Found) {
                self.routes[e] = None;
            }
            return flow;
        }
        let dist = self.distances_to(t);
        if dist[s] == usize::MAX {
            return Flow::Continue;
        }
        let mut path = vec![s];
        self.extend_path(depth, j, e, t, &dist, &mut path)
    }

    /// BFS distances to `t` through unused vertices.
    fn distances_to(&self, t: usize) -> Vec<usize> {
        let n = self.host.ids.len();
        let mut dist = vec![usize::MAX; n];
        dist[t] = 0;
        let mut q = VecDeque::from([t]);
        while let Some(x) = q.pop_front() {
            for &y in &self.host.nbrs[x] {
                if dist[y] != usize::MAX {
                    continue;
                }
                dist[y] = dist[x] + 1;
                // branch vertices (used) end a path but never continue one
                if !self.used[y] {
                    q.push_back(y);
                }
            }
        }
        dist
    }

    /// Whether `t` is reachable from `tip` through unused vertices that are
    /// not adjacent to the path behind the tip.
    fn reachable(&self, path: &[usize], t: usize) -> bool {
        let tip = *path.last().unwrap();
        let n = self.host.ids.len();
        let mut seen = vec![false; n];
        for &p in path {
            seen[p] = true;
        }
        let mut q = VecDeque::from([tip]);
        while let Some(x) = q.pop_front() {
            for &y in &self.host.nbrs[x] {
                if y == t {
                    return true;
                }
                if seen[y] || self.used[y] {
                    continue;
                }
                if path[..path.len() - 1].iter().any(|&p| self.host.adj[p][y]) {
                    continue;
                }
                seen[y] = true;
                q.push_back(y);
            }
        }
        false
    }

    fn extend_path(
        &mut self,
        depth: usize,
        j: usize,
        e: usize,
        t: usize,
        dist: &[usize],
        path: &mut Vec<usize>,
    ) -> Flow {
        if !self.tick() {
            return Flow::Abort;
        }
        let tip = *path.last().unwrap();
        if path.len() > 1 && self.host.adj[tip][t] {
            // an induced path must close here
            return self.close_path(depth, j, e, t, path);
        }
        let mut next: Vec<usize> = self.host.nbrs[tip]
            .iter()
            .copied()
            .filter(|&y| {
                !self.used[y]
                    && y != t
                    && !path.contains(&y)
                    && !path[..path.len() - 1].iter().any(|&p| self.host.adj[p][y])
            })
            .collect();
        next.sort_by_key(|&y| (dist[y], y));
        for y in next {
            if dist[y] == usize::MAX {
                continue;
            }
            path.push(y);
            if self.reachable(path, t) {
                match self.extend_path(depth, j, e, t, dist, path) {
                    Flow::Continue => {}
                    other => return other,
                }
            }
            path.pop();
        }
        Flow::Continue
    }

    fn close_path(&mut self, depth: usize, j: usize, e: usize, t: usize, path: &[usize]) -> Flow {
        let internal = &path[1..];
        for &x in internal {
            self.used[x] = true;
        }
        let mut full = path.to_vec();
        full.push(t);
        self.routes[e] = Some(full);
        let flow = if self.capacity_ok() {
            self.route(depth, j + 1)
        } else {
            Flow::Continue
        };
        if !matches!(flow, Flow::Found) {
            self.routes[e] = None;
            for &x in internal {
                self.used[x] = false;
            }
        }
        flow
    }

    fn certificate(&self, h: &PatternGraph) -> SubdivisionCertificate {
        let branch_map = (0..self.pat.ids.len())
            .map(|p| (self.pat.ids[p], self.host.ids[self.assign[p].unwrap()]))
            .collect();
        let edge_paths = self
            .pat
            .edges
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| {
                let mut route: Vec<VertexId> = self.routes[i]
                    .as_ref()
                    .unwrap()
                    .iter()
                    .map(|&x| self.host.ids[x])
                    .collect();
                // routes run from the later-placed endpoint's partner; orient a -> b
                if route[0] != self.host.ids[self.assign[a].unwrap()] {
                    route.reverse();
                }
                ((self.pat.ids[a], self.pat.ids[b]), VertexPath::new(route))
            })
            .collect();
        SubdivisionCertificate {
            pattern: h.clone(),
            branch_map,
            edge_paths,
        }
    }
}
