//! Builders and recognisers for the named pattern families, and enumeration
//! of small maximal 3-degenerate graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, PatternGraph, VertexId};
use crate::iso::{canonical_form, CanonicalForm};
use crate::oracle::{self, SearchBudget};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("parameter {value} out of range for {family} (needs {needs})")]
    OutOfRange {
        family: &'static str,
        value: usize,
        needs: &'static str,
    },
    #[error("unknown pattern name `{0}`")]
    UnknownName(String),
    #[error("planarity test was inconclusive within budget")]
    Inconclusive,
}

fn range_check(
    family: &'static str,
    value: usize,
    ok: bool,
    needs: &'static str,
) -> Result<(), PatternError> {
    if ok {
        Ok(())
    } else {
        Err(PatternError::OutOfRange {
            family,
            value,
            needs,
        })
    }
}

fn complete(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n as VertexId {
        for v in u + 1..n as VertexId {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

/// `P_n^3`: vertices `0..n`, with `i ~ j` iff `1 <= |i - j| <= 3`.
pub fn build_pn3(n: usize) -> Result<PatternGraph, PatternError> {
    range_check("pn3", n, n >= 2, "n >= 2")?;
    let mut g = Graph::empty(n);
    for i in 0..n as VertexId {
        for j in i + 1..(i + 4).min(n as VertexId) {
            g.add_edge(i, j).unwrap();
        }
    }
    Ok(PatternGraph::new(g))
}

/// Named pattern graphs understood by the builders and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedPattern {
    Complete(usize),
    K5Minus,
    /// `K_{2,d}`; the two vertices of the small side are the terminals.
    K2d(usize),
    /// `C_d` joined to a hub.
    Wheel(usize),
    Octahedron,
    CompleteBipartite(usize, usize),
    Cycle(usize),
    Pn3(usize),
    Petersen,
    Icosahedron,
}

impl NamedPattern {
    pub fn build(self) -> Result<PatternGraph, PatternError> {
        use NamedPattern::*;
        Ok(match self {
            Complete(n) => {
                range_check("complete", n, n >= 1, "n >= 1")?;
                PatternGraph::new(complete(n))
            }
            K5Minus => {
                let mut g = complete(5);
                g.remove_edge(3, 4);
                PatternGraph::new(g)
            }
            K2d(d) => {
                range_check("k2d", d, d >= 1, "d >= 1")?;
                let mut g = Graph::empty(d + 2);
                for b in 2..d as VertexId + 2 {
                    g.add_edge(0, b).unwrap();
                    g.add_edge(1, b).unwrap();
                }
                PatternGraph::with_terminals(g, vec![0, 1])
            }
            Wheel(d) => {
                range_check("wheel", d, d >= 3, "d >= 3")?;
                let mut g = Graph::empty(d + 1);
                for i in 1..=d as VertexId {
                    g.add_edge(0, i).unwrap();
                    g.add_edge(i, i % d as VertexId + 1).unwrap();
                }
                PatternGraph::new(g)
            }
            Octahedron => {
                let mut g = complete(6);
                for (u, v) in [(0, 1), (2, 3), (4, 5)] {
                    g.remove_edge(u, v);
                }
                PatternGraph::new(g)
            }
            CompleteBipartite(a, b) => {
                range_check(
                    "complete bipartite",
                    a.min(b),
                    a >= 1 && b >= 1,
                    "both sides >= 1",
                )?;
                let mut g = Graph::empty(a + b);
                for u in 0..a as VertexId {
                    for v in a as VertexId..(a + b) as VertexId {
                        g.add_edge(u, v).unwrap();
                    }
                }
                PatternGraph::new(g)
            }
            Cycle(n) => {
                range_check("cycle", n, n >= 3, "n >= 3")?;
                let mut g = Graph::empty(n);
                for i in 0..n as VertexId {
                    g.add_edge(i, (i + 1) % n as VertexId).unwrap();
                }
                PatternGraph::new(g)
            }
            Pn3(n) => build_pn3(n)?,
            Petersen => {
                let mut g = Graph::empty(10);
                for i in 0..5 {
                    g.add_edge(i, (i + 1) % 5).unwrap();
                    g.add_edge(i, i + 5).unwrap();
                    g.add_edge(i + 5, (i + 2) % 5 + 5).unwrap();
                }
                PatternGraph::new(g)
            }
            Icosahedron => {
                // 0 top, 1..=5 upper ring, 6..=10 lower ring, 11 bottom.
                let mut g = Graph::empty(12);
                for i in 0..5 {
                    let up = 1 + i;
                    let low = 6 + i;
                    g.add_edge(0, up).unwrap();
                    g.add_edge(11, low).unwrap();
                    g.add_edge(up, 1 + (i + 1) % 5).unwrap();
                    g.add_edge(low, 6 + (i + 1) % 5).unwrap();
                    g.add_edge(up, low).unwrap();
                    g.add_edge(up, 6 + (i + 1) % 5).unwrap();
                }
                PatternGraph::new(g)
            }
        })
    }
}

impl fmt::Display for NamedPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use NamedPattern::*;
        match *self {
            Complete(n) => write!(f, "k{n}"),
            K5Minus => write!(f, "k5minus"),
            K2d(d) => write!(f, "k2d:{d}"),
            Wheel(d) => write!(f, "wheel:{d}"),
            Octahedron => write!(f, "octahedron"),
            CompleteBipartite(a, b) => write!(f, "k{a},{b}"),
            Cycle(n) => write!(f, "cycle:{n}"),
            Pn3(n) => write!(f, "p{n}"),
            Petersen => write!(f, "petersen"),
            Icosahedron => write!(f, "icosahedron"),
        }
    }
}

/// Accepts `k4`, `k5minus`, `k33`, `k2,3`, `k2d:5`, `wheel:5`, `cycle:6`,
/// `p6`, `pn3:9`, `octahedron`, `petersen`, `icosahedron`, `complete:7`.
impl FromStr for NamedPattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use NamedPattern::*;
        let bad = || PatternError::UnknownName(s.to_string());
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        let lower = s.trim().to_ascii_lowercase();
        let s2 = lower.as_str();
        Ok(match s2 {
            "k5minus" | "k5-" => K5Minus,
            "octahedron" => Octahedron,
            "petersen" => Petersen,
            "icosahedron" => Icosahedron,
            "k33" => CompleteBipartite(3, 3),
            _ => {
                if let Some((name, arg)) = s2.split_once(':') {
                    let n = num(arg)?;
                    match name {
                        "k2d" => K2d(n),
                        "wheel" => Wheel(n),
                        "cycle" => Cycle(n),
                        "pn3" => Pn3(n),
                        "complete" => Complete(n),
                        _ => return Err(bad()),
                    }
                } else if let Some(rest) = s2.strip_prefix('k') {
                    if let Some((a, b)) = rest.split_once(',') {
                        CompleteBipartite(num(a)?, num(b)?)
                    } else {
                        Complete(num(rest)?)
                    }
                } else if let Some(rest) = s2.strip_prefix('p') {
                    Pn3(num(rest)?)
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

pub fn build_named(name: NamedPattern) -> Result<PatternGraph, PatternError> {
    name.build()
}

/// Construction order of a maximal 3-degenerate graph: the first three
/// vertices form a triangle and each later one has exactly three earlier
/// neighbours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationOrder {
    pub order: Vec<VertexId>,
    /// For `order[i]`, `i >= 3`: its three earlier neighbours.
    pub attachments: Vec<[VertexId; 3]>,
}

impl EliminationOrder {
    /// Re-checks the order against `g`.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let n = self.order.len();
        if n < 3 || n != g.vertex_count() || self.attachments.len() != n - 3 {
            return false;
        }
        let [a, b, c] = [self.order[0], self.order[1], self.order[2]];
        if !(g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c)) {
            return false;
        }
        let mut placed: BTreeSet<VertexId> = self.order[..3].iter().copied().collect();
        for (i, &v) in self.order.iter().enumerate().skip(3) {
            let earlier: BTreeSet<VertexId> =
                g.neighbors(v).filter(|u| placed.contains(u)).collect();
            let att: BTreeSet<VertexId> = self.attachments[i - 3].iter().copied().collect();
            if earlier != att || att.len() != 3 || !placed.insert(v) {
                return false;
            }
        }
        placed.len() == n
    }
}

/// Witnessing construction order if `g` is maximal 3-degenerate.
///
/// Such a graph has exactly `3n - 6` edges, and with that edge count a greedy
/// pass that always strips a minimum-degree vertex must strip degree exactly
/// 3 each time, ending at a triangle.
pub fn is_maximal_3_degenerate(g: &Graph) -> Option<EliminationOrder> {
    let n = g.vertex_count();
    if n < 3 || g.edge_count() != 3 * n - 6 {
        return None;
    }
    let mut work = g.clone();
    let mut removed = Vec::new();
    while work.vertex_count() > 3 {
        let (v, d) = work.min_degree()?;
        if d != 3 {
            return None;
        }
        let nb: Vec<VertexId> = work.neighbors(v).collect();
        removed.push((v, [nb[0], nb[1], nb[2]]));
        work.remove_vertex(v);
    }
    if work.edge_count() != 3 {
        return None;
    }
    let mut order: Vec<VertexId> = work.vertices().collect();
    let mut attachments = Vec::new();
    for (v, att) in removed.into_iter().rev() {
        order.push(v);
        attachments.push(att);
    }
    Some(EliminationOrder { order, attachments })
}

/// Smallest and largest orders accepted by [`enumerate_maximal_3_degenerate`].
pub const ENUMERATION_ORDERS: std::ops::RangeInclusive<usize> = 3..=8;

/// Every maximal 3-degenerate graph of order `n` up to isomorphism, grown
/// from `K_3` by attaching a new vertex to each 3-subset of every class of
/// the previous order. With `planar_only`, graphs containing a `K_5` or
/// `K_{3,3}` subdivision are discarded.
pub fn enumerate_maximal_3_degenerate(
    n: usize,
    planar_only: bool,
) -> Result<Vec<PatternGraph>, PatternError> {
    enumerate_with(n, planar_only, false)
}

/// Same as [`enumerate_maximal_3_degenerate`], visiting 3-subsets in reverse
/// order; used to check the result does not depend on iteration order.
pub fn enumerate_maximal_3_degenerate_reversed(
    n: usize,
    planar_only: bool,
) -> Result<Vec<PatternGraph>, PatternError> {
    enumerate_with(n, planar_only, true)
}

fn enumerate_with(
    n: usize,
    planar_only: bool,
    reversed: bool,
) -> Result<Vec<PatternGraph>, PatternError> {
    range_check(
        "maximal 3-degenerate enumeration",
        n,
        ENUMERATION_ORDERS.contains(&n),
        "3 <= n <= 8",
    )?;
    let mut level: BTreeMap<CanonicalForm, ()> = BTreeMap::new();
    level.insert(canonical_form(&complete(3)), ());
    for k in 3..n {
        let mut next = BTreeMap::new();
        for form in level.keys() {
            let g = form.to_graph();
            let mut triples = Vec::new();
            for a in 0..k as VertexId {
                for b in a + 1..k as VertexId {
                    for c in b + 1..k as VertexId {
                        triples.push([a, b, c]);
                    }
                }
            }
            if reversed {
                triples.reverse();
            }
            for t in triples {
                let mut h = g.clone();
                let v = k as VertexId;
                h.add_vertex(v);
                for u in t {
                    h.add_edge(u, v).unwrap();
                }
                next.insert(canonical_form(&h), ());
            }
        }
        level = next;
    }
    let mut out = Vec::new();
    for form in level.keys() {
        let g = form.to_graph();
        if planar_only {
            match oracle::is_planar_small(&g, SearchBudget::default()) {
                Ok(true) => {}
                Ok(false) => continue,
                Err(_) => return Err(PatternError::Inconclusive),
            }
        }
        out.push(PatternGraph::new(g));
    }
    Ok(out)
}
