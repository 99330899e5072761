//! Certificate files (JSON) and DOT rendering.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use subdiv_core::graph::{
    Graph, GraphError, PatternGraph, SubdivisionCertificate, VertexId, VertexPath,
};
use thiserror::Error;

pub const CERT_FORMAT: &str = "subdivision-certificate/1";

#[derive(Debug, Error)]
pub enum CertFileError {
    #[error("certificate is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported certificate format {0:?}")]
    Format(String),
    #[error("certificate pattern: {0}")]
    Pattern(#[from] GraphError),
    #[error("pattern edge {0}-{1} appears twice")]
    DuplicatePath(VertexId, VertexId),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PatternDoc {
    vertices: Vec<VertexId>,
    edges: Vec<[VertexId; 2]>,
    terminals: Vec<VertexId>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PathDoc {
    edge: [VertexId; 2],
    path: Vec<VertexId>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertDoc {
    format: String,
    pattern: PatternDoc,
    /// `[pattern vertex, host vertex]`, sorted by pattern vertex.
    branch_map: Vec<[VertexId; 2]>,
    paths: Vec<PathDoc>,
}

/// Canonical text form: every list sorted, pretty-printed, trailing newline.
pub fn emit_certificate(cert: &SubdivisionCertificate) -> String {
    let g = &cert.pattern.graph;
    let doc = CertDoc {
        format: CERT_FORMAT.to_string(),
        pattern: PatternDoc {
            vertices: g.vertices().collect(),
            edges: g.edges().map(|(a, b)| [a, b]).collect(),
            terminals: cert.pattern.terminals.clone(),
        },
        branch_map: cert.branch_map.iter().map(|(&p, &h)| [p, h]).collect(),
        paths: cert
            .edge_paths
            .iter()
            .map(|(&(a, b), p)| PathDoc {
                edge: [a, b],
                path: p.vertices().to_vec(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

/// Inverse of [`emit_certificate`]. Structural validity against a host is
/// left to `check_certificate`.
pub fn parse_certificate(text: &str) -> Result<SubdivisionCertificate, CertFileError> {
    let doc: CertDoc = serde_json::from_str(text)?;
    if doc.format != CERT_FORMAT {
        return Err(CertFileError::Format(doc.format));
    }
    let mut g = Graph::with_vertices(doc.pattern.vertices.iter().copied());
    for [a, b] in doc.pattern.edges {
        g.add_edge(a, b)?;
    }
    let mut edge_paths = BTreeMap::new();
    for PathDoc { edge: [a, b], path } in doc.paths {
        if edge_paths.insert((a, b), VertexPath::new(path)).is_some() {
            return Err(CertFileError::DuplicatePath(a, b));
        }
    }
    Ok(SubdivisionCertificate {
        pattern: PatternGraph::with_terminals(g, doc.pattern.terminals),
        branch_map: doc.branch_map.into_iter().map(|[p, h]| (p, h)).collect(),
        edge_paths,
    })
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

/// The host graph with branch vertices filled and each subdivided pattern
/// edge drawn in its own colour. Edges outside the subdivision are grey.
pub fn to_dot(host: &Graph, cert: &SubdivisionCertificate) -> String {
    let branch: BTreeMap<VertexId, VertexId> =
        cert.branch_map.iter().map(|(&p, &h)| (h, p)).collect();
    let mut colour: BTreeMap<(VertexId, VertexId), &str> = BTreeMap::new();
    let mut on_path = BTreeSet::new();
    for (i, p) in cert.edge_paths.values().enumerate() {
        for (a, b) in p.edges() {
            colour.insert((a.min(b), a.max(b)), PALETTE[i % PALETTE.len()]);
        }
        on_path.extend(p.internal().iter().copied());
    }
    let mut out = String::from("graph subdivision {\n  node [shape=circle, fontsize=10];\n");
    for v in host.vertices() {
        if let Some(p) = branch.get(&v) {
            writeln!(
                out,
                "  {v} [style=filled, fillcolor=\"#ffd54f\", xlabel=\"b{p}\"];"
            )
            .unwrap();
        } else if on_path.contains(&v) {
            writeln!(out, "  {v} [style=filled, fillcolor=\"#e0e0e0\"];").unwrap();
        } else {
            writeln!(out, "  {v} [color=\"#bdbdbd\", fontcolor=\"#9e9e9e\"];").unwrap();
        }
    }
    for (u, v) in host.edges() {
        match colour.get(&(u, v)) {
            Some(c) => writeln!(out, "  {u} -- {v} [color=\"{c}\", penwidth=2.5];").unwrap(),
            None => writeln!(out, "  {u} -- {v} [color=\"#e0e0e0\"];").unwrap(),
        }
    }
    out.push_str("}\n");
    out
}
