use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{find_subdivision, random_min_degree_graph, OracleError, SearchBudget};
use crate::graph::{Graph, PatternGraph};

/// Sampled falsification search for goodness of a small pattern.
#[derive(Debug, Clone)]
pub struct ProbeConfig {
    pub n_max: usize,
    pub samples: usize,
    pub seed: u64,
    pub budget: SearchBudget,
    /// Random edges added on top of the minimum-degree base per sample.
    pub extra_edges: usize,
    /// Worker threads; `None` reads `SUBDIV_THREADS`, falling back to rayon's default.
    pub threads: Option<usize>,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            n_max: 12,
            samples: 20,
            seed: 0,
            budget: SearchBudget::nodes(2_000_000),
            extra_edges: 0,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleOutcome {
    Contains,
    Absent,
    Exhausted,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct OrderStats {
    pub samples: usize,
    pub contains: usize,
    pub absent: usize,
    pub exhausted: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeVerdict {
    /// A completed search found a graph of the required minimum degree with
    /// no subdivision: the pattern is not good.
    Counterexample,
    /// No counterexample among the samples. Says nothing definite.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub pattern_order: usize,
    pub min_degree: usize,
    pub seed: u64,
    pub verdict: ProbeVerdict,
    pub per_order: BTreeMap<usize, OrderStats>,
    /// (order, sample index, graph) for each completed search that found nothing.
    pub counterexamples: Vec<(usize, usize, Graph)>,
    pub note: &'static str,
}

const EVIDENCE_NOTE: &str =
    "sampled evidence only; absence of counterexamples does not establish goodness";

fn sample_seed(seed: u64, n: usize, i: usize) -> u64 {
    seed ^ ((n as u64) << 32) ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn thread_count(cfg: &ProbeConfig) -> Option<usize> {
    cfg.threads.or_else(|| {
        std::env::var("SUBDIV_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
            .filter(|&t| t > 0)
    })
}

/// Samples graphs of minimum degree `|h| - 1` for every order from `|h|` to
/// `n_max` and searches each for a subdivision of `h`.
///
/// Results are merged by (order, sample index), so the report does not depend
/// on the thread count.
pub fn probe_goodness(h: &PatternGraph, cfg: &ProbeConfig) -> Result<ProbeReport, OracleError> {
    let k = h.graph.vertex_count();
    let d = k.saturating_sub(1);
    let jobs: Vec<(usize, usize)> = (k.max(2)..=cfg.n_max)
        .flat_map(|n| (0..cfg.samples).map(move |i| (n, i)))
        .collect();
    let run =
        |&(n, i): &(usize, usize)| -> Result<(usize, usize, SampleOutcome, Graph), OracleError> {
            let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(cfg.seed, n, i));
            let g =
                random_min_degree_graph(n, d, cfg.extra_edges, &mut rng).expect("n >= |h| = d + 1");
            let outcome = match find_subdivision(&g, h, &BTreeMap::new(), cfg.budget) {
                Ok(Some(_)) => SampleOutcome::Contains,
                Ok(None) => SampleOutcome::Absent,
                Err(OracleError::BudgetExhausted { .. }) => SampleOutcome::Exhausted,
                Err(e) => return Err(e),
            };
            Ok((n, i, outcome, g))
        };
    let results: Vec<_> = match thread_count(cfg) {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .expect("thread pool")
            .install(|| jobs.par_iter().map(run).collect::<Result<Vec<_>, _>>())?,
        None => jobs.par_iter().map(run).collect::<Result<Vec<_>, _>>()?,
    };

    let mut per_order: BTreeMap<usize, OrderStats> = BTreeMap::new();
    let mut counterexamples = Vec::new();
    for (n, i, outcome, g) in results {
        let s = per_order.entry(n).or_default();
        s.samples += 1;
        match outcome {
            SampleOutcome::Contains => s.contains += 1,
            SampleOutcome::Exhausted => s.exhausted += 1,
            SampleOutcome::Absent => {
                s.absent += 1;
                counterexamples.push((n, i, g));
            }
        }
    }
    let verdict = if counterexamples.is_empty() {
        ProbeVerdict::Inconclusive
    } else {
        ProbeVerdict::Counterexample
    };
    Ok(ProbeReport {
        pattern_order: k,
        min_degree: d,
        seed: cfg.seed,
        verdict,
        per_order,
        counterexamples,
        note: EVIDENCE_NOTE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::{build_pn3, NamedPattern};

    #[test]
    fn k4_is_never_refuted() {
        let h = NamedPattern::Complete(4).build().unwrap();
        let cfg = ProbeConfig {
            n_max: 9,
            samples: 4,
            seed: 11,
            threads: Some(2),
            ..ProbeConfig::default()
        };
        let r = probe_goodness(&h, &cfg).unwrap();
        assert_eq!(r.verdict, ProbeVerdict::Inconclusive);
        assert!(r.counterexamples.is_empty());
        assert_eq!(r.per_order.len(), 6);
        assert!(r.per_order.values().all(|s| s.samples == 4));
        assert!(r.note.contains("evidence only"));
    }

    #[test]
    fn report_is_independent_of_thread_count() {
        let h = build_pn3(5).unwrap();
        let base = ProbeConfig {
            n_max: 8,
            samples: 3,
            seed: 5,
            ..ProbeConfig::default()
        };
        let a = probe_goodness(
            &h,
            &ProbeConfig {
                threads: Some(1),
                ..base.clone()
            },
        )
        .unwrap();
        let b = probe_goodness(
            &h,
            &ProbeConfig {
                threads: Some(3),
                ..base
            },
        )
        .unwrap();
        assert_eq!(a.per_order, b.per_order);
        assert_eq!(a.verdict, b.verdict);
    }
}
