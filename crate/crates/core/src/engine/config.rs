use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, PatternGraph, VertexId};
use crate::iso::are_isomorphic_fixing;

/// Configuration identifiers. Parameters follow the ranges in [`ConfigId::check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConfigId {
    /// `K_2`, both ends weight 1.
    CPath,
    /// `K_{2,d}` with the two size-2 side vertices as terminals of weight `d`.
    CMader(usize),
    C1(usize),
    C2(usize),
    C3(usize),
    C4(usize, usize),
    C5,
    C6,
    C7,
    C8,
    C9,
    C10(usize),
    C11(usize),
    C12(usize),
    C13(usize),
}

impl fmt::Display for ConfigId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigId::CPath => write!(f, "C_path"),
            ConfigId::CMader(d) => write!(f, "C({d})"),
            ConfigId::C1(d) => write!(f, "C1({d})"),
            ConfigId::C2(d) => write!(f, "C2({d})"),
            ConfigId::C3(d) => write!(f, "C3({d})"),
            ConfigId::C4(d, t) => write!(f, "C4({d},{t})"),
            ConfigId::C5 => write!(f, "C5"),
            ConfigId::C6 => write!(f, "C6"),
            ConfigId::C7 => write!(f, "C7"),
            ConfigId::C8 => write!(f, "C8"),
            ConfigId::C9 => write!(f, "C9"),
            ConfigId::C10(d) => write!(f, "C10({d})"),
            ConfigId::C11(d) => write!(f, "C11({d})"),
            ConfigId::C12(d) => write!(f, "C12({d})"),
            ConfigId::C13(d) => write!(f, "C13({d})"),
        }
    }
}

impl ConfigId {
    /// Whether the parameters are in range.
    pub fn check(self) -> bool {
        match self {
            ConfigId::CMader(d)
            | ConfigId::C1(d)
            | ConfigId::C2(d)
            | ConfigId::C3(d)
            | ConfigId::C10(d)
            | ConfigId::C11(d)
            | ConfigId::C12(d)
            | ConfigId::C13(d) => d >= 1,
            ConfigId::C4(_, t) => t >= 3,
            _ => true,
        }
    }

    /// Terminal weights, in terminal order.
    pub fn weights(self) -> Vec<usize> {
        match self {
            ConfigId::CPath => vec![1, 1],
            ConfigId::CMader(d) | ConfigId::C1(d) | ConfigId::C10(d) => vec![d, d],
            ConfigId::C2(d) | ConfigId::C11(d) | ConfigId::C13(d) => vec![d, d, d],
            ConfigId::C3(d) => vec![d + 1, d + 1, d],
            ConfigId::C4(d, t) => std::iter::once(d + t - 1)
                .chain((2..=t).map(|i| d + i - 1))
                .collect(),
            ConfigId::C5 => vec![4, 4],
            ConfigId::C6 => vec![3, 3, 3],
            ConfigId::C7 => vec![2, 2, 2],
            ConfigId::C8 => vec![3, 3, 2],
            ConfigId::C9 => vec![1, 1, 2, 2],
            ConfigId::C12(d) => vec![d + 1, d, d + 1],
        }
    }

    pub fn terminal_count(self) -> usize {
        self.weights().len()
    }
}

/// Members of a configuration. Pattern vertices `0..t` are the terminals in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Members {
    Explicit(Vec<PatternGraph>),
    /// Terminals with a fixed set of edges among them, plus `others` vertices
    /// each attached to exactly three earlier vertices. With `first_pair`, the
    /// first attached vertex sees only the two terminals.
    Attachment {
        terminals: usize,
        others: usize,
        terminal_edges: Vec<(VertexId, VertexId)>,
        first_pair: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub id: ConfigId,
    pub members: Members,
    pub weights: Vec<usize>,
}

fn pattern(n: usize, t: usize, edges: &[(VertexId, VertexId)]) -> PatternGraph {
    PatternGraph::with_terminals(
        Graph::from_edges(n, edges.iter().copied()).expect("static member"),
        (0..t as VertexId).collect(),
    )
}

// Labels: a_i = i - 1, then b_j follow the terminals.
const C5_MEMBERS: [[(VertexId, VertexId); 11]; 3] = [
    [
        (0, 2),
        (1, 2),
        (0, 3),
        (1, 3),
        (2, 3),
        (0, 4),
        (1, 4),
        (3, 4),
        (0, 5),
        (3, 5),
        (4, 5),
    ],
    [
        (0, 2),
        (1, 2),
        (0, 3),
        (1, 3),
        (2, 3),
        (0, 4),
        (2, 4),
        (3, 4),
        (2, 5),
        (3, 5),
        (4, 5),
    ],
    [
        (0, 2),
        (1, 2),
        (0, 3),
        (1, 3),
        (2, 3),
        (1, 4),
        (2, 4),
        (3, 4),
        (1, 5),
        (3, 5),
        (4, 5),
    ],
];
const C6_MEMBERS: [[(VertexId, VertexId); 9]; 3] = [
    [
        (0, 3),
        (1, 3),
        (2, 3),
        (0, 4),
        (1, 4),
        (3, 4),
        (0, 5),
        (3, 5),
        (4, 5),
    ],
    [
        (0, 3),
        (1, 3),
        (2, 3),
        (0, 4),
        (2, 4),
        (3, 4),
        (2, 5),
        (3, 5),
        (4, 5),
    ],
    [
        (0, 3),
        (1, 3),
        (2, 3),
        (1, 4),
        (2, 4),
        (3, 4),
        (1, 5),
        (3, 5),
        (4, 5),
    ],
];
const C7_EDGES: [(VertexId, VertexId); 6] = [(0, 3), (1, 3), (2, 3), (0, 4), (1, 4), (3, 4)];
const C8_EDGES: [(VertexId, VertexId); 7] =
    [(0, 1), (0, 3), (1, 3), (2, 3), (0, 4), (1, 4), (3, 4)];
const C9_MEMBERS: [&[(VertexId, VertexId)]; 2] = [
    &[(0, 4), (1, 4), (2, 4), (3, 4)],
    &[(0, 4), (1, 4), (2, 3), (2, 4)],
];

/// Materializes a configuration. `None` for out-of-range parameters.
pub fn config_members(id: ConfigId) -> Option<Configuration> {
    if !id.check() {
        return None;
    }
    let members = match id {
        ConfigId::CPath | ConfigId::C10(_) => Members::Explicit(vec![pattern(2, 2, &[(0, 1)])]),
        ConfigId::CMader(d) => {
            let edges: Vec<_> = (2..d as VertexId + 2)
                .flat_map(|b| [(0, b), (1, b)])
                .collect();
            Members::Explicit(vec![pattern(d + 2, 2, &edges)])
        }
        ConfigId::C1(d) => Members::Attachment {
            terminals: 2,
            others: d,
            terminal_edges: vec![],
            first_pair: true,
        },
        ConfigId::C2(d) => Members::Attachment {
            terminals: 3,
            others: d,
            terminal_edges: vec![],
            first_pair: false,
        },
        ConfigId::C3(d) => Members::Attachment {
            terminals: 3,
            others: d,
            terminal_edges: vec![(0, 1)],
            first_pair: false,
        },
        ConfigId::C4(d, t) => Members::Attachment {
            terminals: t,
            others: d,
            terminal_edges: (1..t as VertexId).map(|i| (0, i)).collect(),
            first_pair: false,
        },
        ConfigId::C5 => Members::Explicit(C5_MEMBERS.iter().map(|e| pattern(6, 2, e)).collect()),
        ConfigId::C6 => Members::Explicit(C6_MEMBERS.iter().map(|e| pattern(6, 3, e)).collect()),
        ConfigId::C7 => Members::Explicit(vec![pattern(5, 3, &C7_EDGES)]),
        ConfigId::C8 => Members::Explicit(vec![pattern(5, 3, &C8_EDGES)]),
        ConfigId::C9 => Members::Explicit(C9_MEMBERS.iter().map(|e| pattern(5, 4, e)).collect()),
        ConfigId::C11(_) => Members::Explicit(vec![pattern(3, 3, &[(0, 1), (0, 2), (1, 2)])]),
        ConfigId::C12(_) => Members::Explicit(vec![pattern(
            4,
            3,
            &[(0, 1), (1, 2), (0, 3), (1, 3), (2, 3)],
        )]),
        ConfigId::C13(_) => Members::Explicit(vec![pattern(
            4,
            3,
            &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)],
        )]),
    };
    Some(Configuration {
        id,
        members,
        weights: id.weights(),
    })
}

impl Configuration {
    /// Whether `h` (terminals in order) is a member up to isomorphism fixing
    /// the terminals.
    pub fn admits(&self, h: &PatternGraph) -> bool {
        if h.terminals.len() != self.weights.len() || !h.terminals_valid() {
            return false;
        }
        match &self.members {
            Members::Explicit(list) => list.iter().any(|m| {
                are_isomorphic_fixing(&m.graph, &m.terminals, &h.graph, &h.terminals)
                    .unwrap_or(false)
            }),
            Members::Attachment {
                terminals,
                others,
                terminal_edges,
                first_pair,
            } => admits_attachment(h, *terminals, *others, terminal_edges, *first_pair),
        }
    }
}

fn admits_attachment(
    h: &PatternGraph,
    t: usize,
    others: usize,
    terminal_edges: &[(VertexId, VertexId)],
    first_pair: bool,
) -> bool {
    let g = &h.graph;
    if g.vertex_count() != t + others || others > 20 {
        return false;
    }
    let term = &h.terminals;
    for i in 0..t {
        for j in i + 1..t {
            let want = terminal_edges.contains(&(i as VertexId, j as VertexId));
            if g.has_edge(term[i], term[j]) != want {
                return false;
            }
        }
    }
    let rest: Vec<VertexId> = g.vertices().filter(|v| !term.contains(v)).collect();
    // nbr_mask[i]: neighbours of rest[i] among rest; term_deg[i]: among terminals.
    let idx = |v: VertexId| rest.iter().position(|&r| r == v);
    let nbr_mask: Vec<u32> = rest
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .filter_map(idx)
                .fold(0u32, |m, j| m | (1 << j))
        })
        .collect();
    let term_deg: Vec<u32> = rest
        .iter()
        .map(|&v| g.neighbors(v).filter(|u| term.contains(u)).count() as u32)
        .collect();
    let full = (1u32 << others) - 1;
    let mut reach = vec![false; 1 << others];
    reach[0] = true;
    for placed in 0..=full {
        if !reach[placed as usize] {
            continue;
        }
        let need = if first_pair && placed == 0 { 2 } else { 3 };
        for i in 0..others {
            if placed & (1 << i) != 0 {
                continue;
            }
            if term_deg[i] + (nbr_mask[i] & placed).count_ones() == need {
                reach[(placed | (1 << i)) as usize] = true;
            }
        }
    }
    reach[full as usize]
}
