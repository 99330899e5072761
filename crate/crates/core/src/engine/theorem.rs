use std::fmt;
use std::str::FromStr;

use crate::graph::{check_certificate, Graph, SubdivisionCertificate, VertexId, VertexPath};
use crate::iso::are_isomorphic;
use crate::patterns::{build_pn3, is_maximal_3_degenerate};
use crate::reduction::run_trace;

use super::seed::check_min_degree;
use super::{
    extract, find_k4_seed, find_seed_edge, internal, ConfigId, EngineError, ExtractOptions,
};

/// What to extract from a graph of large minimum degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    /// Some maximal 3-degenerate graph on `d + 1` vertices.
    Auto3Deg(usize),
    K4,
    K5Minus,
    P6,
    P7,
    /// `K_2` joined to `d - 1` independent vertices (contains `K_{2,d-1}`).
    K2d(usize),
}

impl Target {
    /// Minimum degree the host must have.
    pub fn required_degree(self) -> usize {
        match self {
            Target::Auto3Deg(d) | Target::K2d(d) => d,
            Target::K4 => 3,
            Target::K5Minus => 4,
            Target::P6 => 5,
            Target::P7 => 6,
        }
    }

    /// Parses a target name; `auto3deg` and `k2d` take `d`.
    pub fn from_name(name: &str, d: Option<usize>) -> Result<Self, EngineError> {
        let need_d = || {
            d.ok_or_else(|| {
                EngineError::BadParameter(format!("target {name} needs a degree parameter"))
            })
        };
        Ok(match name {
            "auto3deg" => Target::Auto3Deg(need_d()?),
            "k2d" => Target::K2d(need_d()?),
            "k4" => Target::K4,
            "k5minus" => Target::K5Minus,
            "p6" => Target::P6,
            "p7" => Target::P7,
            _ => return Err(EngineError::BadParameter(format!("unknown target {name}"))),
        })
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Auto3Deg(d) => write!(f, "auto3deg({d})"),
            Target::K4 => write!(f, "k4"),
            Target::K5Minus => write!(f, "k5minus"),
            Target::P6 => write!(f, "p6"),
            Target::P7 => write!(f, "p7"),
            Target::K2d(d) => write!(f, "k2d({d})"),
        }
    }
}

impl FromStr for Target {
    type Err = EngineError;

    /// Accepts `k4`, `p6`, ... and `auto3deg(5)` / `k2d(5)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('(') {
            Some((name, rest)) => {
                let d = rest
                    .strip_suffix(')')
                    .and_then(|x| x.parse().ok())
                    .ok_or_else(|| EngineError::BadParameter(format!("bad target {s}")))?;
                Target::from_name(name, Some(d))
            }
            None => Target::from_name(s, None),
        }
    }
}

pub fn extract_theorem(g: &Graph, target: Target) -> Result<SubdivisionCertificate, EngineError> {
    extract_theorem_with(g, target, ExtractOptions::default())
}

/// Extracts `target` from `g` and verifies the result against `g`.
pub fn extract_theorem_with(
    g: &Graph,
    target: Target,
    opts: ExtractOptions,
) -> Result<SubdivisionCertificate, EngineError> {
    let d = target.required_degree();
    if d < 2 {
        return Err(EngineError::BadParameter(format!("{target} needs d >= 2")));
    }
    check_min_degree(g, d)?;
    let trace = run_trace(g)?;
    let cert = match target {
        Target::Auto3Deg(_) | Target::K4 | Target::K5Minus => {
            seeded(&trace, d, ConfigId::C1(d - 1), opts)?
        }
        Target::K2d(_) => seeded(&trace, d, ConfigId::CMader(d - 1), opts)?,
        Target::P6 => seeded(&trace, d, ConfigId::C5, opts)?,
        Target::P7 => {
            let k4 = find_k4_seed(&trace, 6)?;
            let c6 = extract(ConfigId::C6, &k4.join, &trace, opts)?;
            union(&k4.cert, &c6)
        }
    };
    check_certificate(g, &cert, None)?;
    check_shape(target, &cert.pattern.graph)?;
    Ok(cert)
}

/// Seed edge, extraction of `id` from its join, then the seed edge itself
/// as the pattern edge between the two terminals.
fn seeded(
    trace: &crate::reduction::ReductionTrace,
    d: usize,
    id: ConfigId,
    opts: ExtractOptions,
) -> Result<SubdivisionCertificate, EngineError> {
    let seed = find_seed_edge(trace, d)?;
    let mut cert = extract(id, &seed.witness, trace, opts)?;
    cert.pattern
        .graph
        .add_edge(0, 1)
        .map_err(|e| internal(format!("terminal edge: {e}")))?;
    cert.edge_paths
        .insert((0, 1), VertexPath::edge(seed.u1, seed.u2));
    Ok(cert)
}

/// Glues two certificates sharing their terminals `0..t` (same hosts); the
/// other pattern vertices of `b` are renumbered after those of `a`.
fn union(a: &SubdivisionCertificate, b: &SubdivisionCertificate) -> SubdivisionCertificate {
    let t = a.pattern.terminals.len() as VertexId;
    debug_assert_eq!(a.terminal_hosts(), b.terminal_hosts());
    let na = a.pattern.graph.vertex_count() as VertexId;
    let relabel = |v: VertexId| if v < t { v } else { v - t + na };
    let mut out = a.clone();
    for (&p, &h) in &b.branch_map {
        out.branch_map.insert(relabel(p), h);
        out.pattern.graph.add_vertex(relabel(p));
    }
    for (&(x, y), path) in &b.edge_paths {
        let (rx, ry) = (relabel(x), relabel(y));
        out.pattern
            .graph
            .add_edge(rx, ry)
            .expect("edge sets are disjoint");
        if rx < ry {
            out.edge_paths.insert((rx, ry), path.clone());
        } else {
            out.edge_paths.insert((ry, rx), path.reversed());
        }
    }
    out
}

fn check_shape(target: Target, h: &Graph) -> Result<(), EngineError> {
    let ok = match target {
        Target::Auto3Deg(d) | Target::K2d(d) if h.vertex_count() != d + 1 => false,
        Target::Auto3Deg(_) | Target::K4 | Target::K5Minus => is_maximal_3_degenerate(h).is_some(),
        Target::K2d(d) => h.edge_count() == 2 * d - 1,
        Target::P6 | Target::P7 => {
            let n = if target == Target::P6 { 6 } else { 7 };
            let pn = build_pn3(n).map_err(|e| internal(e.to_string()))?;
            are_isomorphic(h, &pn.graph).unwrap_or(false)
        }
    };
    if ok {
        Ok(())
    } else {
        Err(internal(format!(
            "{target} produced a pattern of the wrong shape"
        )))
    }
}
