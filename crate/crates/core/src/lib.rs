//! Constructive extraction of subdivisions from graphs of large minimum
//! degree, with an exhaustive search to check the results.
//!
//! The pipeline: [`reduction::run_trace`] records a reduction of the host,
//! [`engine::find_seed_edge`] picks a joined edge near the end of it, and
//! [`engine::extract`] walks that join back to the start while assembling a
//! [`graph::SubdivisionCertificate`]. [`oracle`] searches independently.

pub mod engine;
pub mod graph;
pub mod iso;
pub mod joins;
pub mod oracle;
pub mod patterns;
pub mod reduction;

pub use engine::{extract, extract_theorem, EngineError, Target};
pub use graph::{
    check_certificate, verify_certificate, Graph, PatternGraph, SubdivisionCertificate, VertexId,
    VertexPath,
};
