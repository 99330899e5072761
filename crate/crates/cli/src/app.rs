use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use subdiv_core::engine::{extract_theorem, EngineError, Target};
use subdiv_core::graph::{check_certificate, Graph, PatternGraph};
use subdiv_core::oracle::{
    find_subdivision, probe_goodness, random_min_degree_graph, GenError, OracleError, ProbeConfig,
    SearchBudget,
};
use subdiv_core::patterns::{enumerate_maximal_3_degenerate, NamedPattern, PatternError};

use crate::certfile::{emit_certificate, parse_certificate, to_dot, CertFileError};
use crate::edgelist::{parse_edge_list, write_edge_list, EdgeListError};
use crate::manifest::RunManifest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_SELF_CHECK: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "subdiv",
    version,
    about = "Extract, verify and search for graph subdivisions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract a certified subdivision from a graph of large minimum degree.
    Extract {
        /// auto3deg, k4, k5minus, p6, p7 or k2d.
        #[arg(long)]
        target: String,
        /// Degree parameter for auto3deg and k2d.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Also write a DOT rendering of the host with the subdivision highlighted.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Check a certificate against a host graph.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Exhaustive search for a subdivision of a small pattern.
    Oracle {
        /// Pattern name (k4, p6, k2d:3, ...) or an edge-list file.
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        input: PathBuf,
        /// Search node limit.
        #[arg(long)]
        budget: Option<u64>,
        /// Where to write the certificate, if one is found.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Sample random graphs of minimum degree |H| - 1 looking for ones without H.
    Probe {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        budget: Option<u64>,
        /// Random edges added on top of the minimum-degree base.
        #[arg(long, default_value_t = 0)]
        extra: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Generate a random graph of given minimum degree.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        extra: usize,
        #[arg(long)]
        output: PathBuf,
    },
    /// List the maximal 3-degenerate graphs of one order.
    Enumerate {
        #[arg(long)]
        order: usize,
        #[arg(long)]
        planar: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Inconclusive(String),
    #[error("self-verification failed: {0}")]
    SelfCheck(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    EdgeList {
        path: PathBuf,
        source: EdgeListError,
    },
    #[error("{path}: {source}")]
    CertFile {
        path: PathBuf,
        source: CertFileError,
    },
    #[error("certificate rejected: {0}")]
    Rejected(String),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Precondition(_) => EXIT_PRECONDITION,
            CliError::Inconclusive(_) => EXIT_INCONCLUSIVE,
            CliError::SelfCheck(_) => EXIT_SELF_CHECK,
            _ => EXIT_OTHER,
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::DegreeTooLow { .. }
            | EngineError::EmptyGraph
            | EngineError::BadParameter(_) => CliError::Precondition(e.to_string()),
            EngineError::Certificate(_) | EngineError::NotMember(_) => {
                CliError::SelfCheck(e.to_string())
            }
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExhausted { .. } => CliError::Inconclusive(e.to_string()),
            OracleError::PatternTooLarge(_) => CliError::Precondition(e.to_string()),
            other => CliError::Other(other.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_manifest(m: &RunManifest, output: &Path) -> Result<(), CliError> {
    m.write_beside(output).map_err(|source| CliError::Io {
        path: RunManifest::path_for(output),
        source,
    })
}

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    parse_edge_list(&read(path)?).map_err(|source| CliError::EdgeList {
        path: path.to_path_buf(),
        source,
    })
}

/// A named pattern, or else an edge-list file holding one.
fn read_pattern(spec: &str) -> Result<PatternGraph, CliError> {
    match spec.parse::<NamedPattern>() {
        Ok(name) => Ok(name.build()?),
        Err(_) if Path::new(spec).exists() => Ok(PatternGraph::new(read_graph(Path::new(spec))?)),
        Err(e) => Err(e.into()),
    }
}

fn budget(nodes: Option<u64>) -> SearchBudget {
    nodes.map_or_else(SearchBudget::default, SearchBudget::nodes)
}

/// Parses `args` (program name first), runs the command, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_PRECONDITION
            } else {
                EXIT_OK
            };
        }
    };
    match execute(cli.command) {
        Ok(report) => {
            print!("{report}");
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs one command; the returned text goes to standard output.
pub fn execute(command: Command) -> Result<String, CliError> {
    match command {
        Command::Extract {
            target,
            d,
            input,
            output,
            dot,
        } => {
            let target = Target::from_name(&target, d)?;
            let g = read_graph(&input)?;
            let cert = extract_theorem(&g, target)?;
            // Independent of the engine's own check: re-verify what is about to be written.
            check_certificate(&g, &cert, None).map_err(|e| CliError::SelfCheck(e.to_string()))?;
            let text = emit_certificate(&cert);
            let reparsed =
                parse_certificate(&text).map_err(|e| CliError::SelfCheck(e.to_string()))?;
            if reparsed != cert {
                return Err(CliError::SelfCheck(
                    "certificate does not round-trip".into(),
                ));
            }
            write(&output, &text)?;
            let mut m = RunManifest::new("extract")
                .param("target", target)
                .input(&input)
                .output(&output);
            if let Some(dot) = &dot {
                write(dot, &to_dot(&g, &cert))?;
                m = m.output(dot);
            }
            write_manifest(&m, &output)?;
            let h = &cert.pattern.graph;
            Ok(format!(
                "{target}: pattern with {} vertices and {} edges, {} host vertices used\n",
                h.vertex_count(),
                h.edge_count(),
                cert.host_vertices().len()
            ))
        }
        Command::Verify { input, cert } => {
            let g = read_graph(&input)?;
            let c = parse_certificate(&read(&cert)?).map_err(|source| CliError::CertFile {
                path: cert.clone(),
                source,
            })?;
            check_certificate(&g, &c, None).map_err(|e| CliError::Rejected(e.to_string()))?;
            Ok(format!(
                "valid: {} pattern vertices, {} pattern edges\n",
                c.pattern.graph.vertex_count(),
                c.pattern.graph.edge_count()
            ))
        }
        Command::Oracle {
            pattern,
            input,
            budget: nodes,
            output,
        } => {
            let h = read_pattern(&pattern)?;
            let g = read_graph(&input)?;
            let found = find_subdivision(&g, &h, &BTreeMap::new(), budget(nodes))?;
            match found {
                None => Ok(format!(
                    "absent: no subdivision of {pattern} (search completed)\n"
                )),
                Some(cert) => {
                    check_certificate(&g, &cert, None)
                        .map_err(|e| CliError::SelfCheck(e.to_string()))?;
                    if let Some(out) = &output {
                        write(out, &emit_certificate(&cert))?;
                        let mut m = RunManifest::new("oracle")
                            .param("pattern", &pattern)
                            .input(&input)
                            .output(out);
                        if let Some(n) = nodes {
                            m.budgets.insert("nodes".into(), n);
                        }
                        write_manifest(&m, out)?;
                    }
                    Ok(format!("found: subdivision of {pattern}\n"))
                }
            }
        }
        Command::Probe {
            pattern,
            nmax,
            samples,
            seed,
            budget: nodes,
            extra,
            output,
        } => {
            let h = read_pattern(&pattern)?;
            let cfg = ProbeConfig {
                n_max: nmax,
                samples,
                seed,
                budget: nodes.map_or(ProbeConfig::default().budget, SearchBudget::nodes),
                extra_edges: extra,
                threads: None,
            };
            let report = probe_goodness(&h, &cfg)?;
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            if let Some(out) = &output {
                write(out, &text)?;
                let mut m = RunManifest::new("probe")
                    .param("pattern", &pattern)
                    .param("nmax", nmax)
                    .param("samples", samples)
                    .param("extra", extra)
                    .output(out);
                m.seed = Some(seed);
                m.budgets.insert("nodes".into(), cfg.budget.max_nodes);
                write_manifest(&m, out)?;
            }
            Ok(text)
        }
        Command::Gen {
            n,
            d,
            seed,
            extra,
            output,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_min_degree_graph(n, d, extra, &mut rng).map_err(|e| match e {
                GenError::Infeasible { .. } => CliError::Precondition(e.to_string()),
            })?;
            write(&output, &write_edge_list(&g))?;
            let mut m = RunManifest::new("gen")
                .param("n", n)
                .param("d", d)
                .param("extra", extra)
                .output(&output);
            m.seed = Some(seed);
            write_manifest(&m, &output)?;
            Ok(format!(
                "{} vertices, {} edges, minimum degree {}\n",
                g.vertex_count(),
                g.edge_count(),
                g.min_degree().map_or(0, |(_, k)| k)
            ))
        }
        Command::Enumerate {
            order,
            planar,
            output,
        } => {
            let graphs = enumerate_maximal_3_degenerate(order, planar).map_err(|e| match e {
                PatternError::OutOfRange { .. } => CliError::Precondition(e.to_string()),
                other => CliError::Pattern(other),
            })?;
            let mut text = format!("{} graphs\n", graphs.len());
            for h in &graphs {
                writeln!(text).unwrap();
                text.push_str(&write_edge_list(&h.graph));
            }
            if let Some(out) = &output {
                write(out, &text)?;
                let m = RunManifest::new("enumerate")
                    .param("order", order)
                    .param("planar", planar)
                    .output(out);
                write_manifest(&m, out)?;
            }
            Ok(text)
        }
    }
}
