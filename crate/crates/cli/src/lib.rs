//! File formats and commands behind the `subdiv` binary.

pub mod app;
pub mod certfile;
pub mod edgelist;
pub mod manifest;

pub use app::{execute, run, Cli, CliError, Command};
pub use certfile::{emit_certificate, parse_certificate, to_dot, CertFileError};
pub use edgelist::{parse_edge_list, write_edge_list, EdgeListError};
pub use manifest::RunManifest;
