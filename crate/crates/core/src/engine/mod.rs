//! Extraction of subdivisions from joined witnesses.
//!
//! [`extract`] walks a witness down the reduction trace. Delete steps, and
//! adds hit by at most one path, are crossed by lifting the witness in place;
//! an add hit by two or more paths is resolved by the case table in [`dispatch`],
//! which names a smaller configuration to recurse into and how to glue the
//! detached paths onto whatever comes back.

mod config;
pub mod dispatch;
mod seed;
mod theorem;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::{
    check_certificate, CertificateViolation, Graph, PatternGraph, SubdivisionCertificate, VertexId,
    VertexPath,
};
use crate::joins::{
    detach, lift_through_add_single, lift_through_delete, restrict, validate_at, Detached,
    JoinError, JoinWitness,
};
use crate::reduction::{ReductionError, ReductionStep, ReductionTrace};

pub use config::{config_members, ConfigId, Configuration, Members};
pub use dispatch::{plan, Part, Plan, TermRef};
pub use seed::{find_k4_seed, find_seed_edge, ContainmentWitness, SeedEdge};
pub use theorem::{extract_theorem, extract_theorem_with, Target};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("minimum degree {degree} < {required} at vertex {vertex}")]
    DegreeTooLow {
        vertex: VertexId,
        degree: usize,
        required: usize,
    },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("{id} is a containment configuration and cannot be extracted")]
    NotExtractable { id: ConfigId },
    #[error("witness weights {found:?} do not match {id} weights {expected:?}")]
    WeightMismatch {
        id: ConfigId,
        expected: Vec<usize>,
        found: Vec<usize>,
    },
    #[error(transparent)]
    Join(#[from] JoinError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error("certificate rejected: {0}")]
    Certificate(#[from] CertificateViolation),
    #[error("extracted pattern is not a member of {0}")]
    NotMember(ConfigId),
    #[error("internal error: {0}")]
    Internal(String),
}

fn internal(msg: impl Into<String>) -> EngineError {
    EngineError::Internal(msg.into())
}

/// Checks performed during extraction beyond the ones that are always on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExtractOptions {
    /// Replay the trace and validate the witness at every level visited.
    pub validate_each_level: bool,
    /// Check each configuration's output against its member list.
    pub check_membership: bool,
}

impl ExtractOptions {
    pub fn thorough() -> Self {
        ExtractOptions {
            validate_each_level: true,
            check_membership: true,
        }
    }
}

/// Something that happened while walking a witness down the trace.
#[derive(Debug)]
pub enum LiftEvent<'a> {
    Delete {
        before: &'a JoinWitness,
        after: &'a JoinWitness,
    },
    AddSingle {
        added: VertexId,
        before: &'a JoinWitness,
        after: &'a JoinWitness,
    },
    Detach {
        added: VertexId,
        before: &'a JoinWitness,
        result: &'a Detached,
    },
    Dispatch {
        id: ConfigId,
        level: usize,
        child: Option<ConfigId>,
    },
}

/// Branch vertices (terminals first) and pattern edges as host paths.
/// Branch vertices are identified by their host ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Realization {
    pub branches: Vec<VertexId>,
    /// `(a, b, path)` with the path running from `a` to `b`.
    pub edges: Vec<(VertexId, VertexId, VertexPath)>,
}

impl Realization {
    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.branches
            .iter()
            .copied()
            .chain(
                self.edges
                    .iter()
                    .flat_map(|(_, _, p)| p.vertices().iter().copied()),
            )
            .collect()
    }

    fn add_edge(&mut self, a: VertexId, b: VertexId, path: VertexPath) {
        debug_assert_eq!(path.endpoints(), (a, b));
        self.edges.push((a, b, path));
    }

    /// Removes the edge between `a` and `b` and returns its path oriented `a -> b`.
    pub fn take_edge(&mut self, a: VertexId, b: VertexId) -> Option<VertexPath> {
        let i = self
            .edges
            .iter()
            .position(|(x, y, _)| (*x, *y) == (a, b) || (*x, *y) == (b, a))?;
        let (x, _, p) = self.edges.remove(i);
        Some(if x == a { p } else { p.reversed() })
    }

    /// Puts `terminals` first, in order, keeping the other branches in place.
    fn with_terminals_first(mut self, terminals: &[VertexId]) -> Self {
        let rest: Vec<VertexId> = self
            .branches
            .iter()
            .copied()
            .filter(|b| !terminals.contains(b))
            .collect();
        self.branches = terminals.iter().copied().chain(rest).collect();
        self
    }

    /// Pattern on `0..k` in branch order; the first `t` branches become terminals.
    pub fn to_certificate(&self, t: usize) -> SubdivisionCertificate {
        let label: BTreeMap<VertexId, VertexId> = self
            .branches
            .iter()
            .enumerate()
            .map(|(i, &b)| (b, i as VertexId))
            .collect();
        let mut g = Graph::empty(self.branches.len());
        let mut edge_paths = BTreeMap::new();
        for (a, b, p) in &self.edges {
            let (la, lb) = (label[a], label[b]);
            g.add_edge(la, lb).expect("distinct pattern edges");
            if la < lb {
                edge_paths.insert((la, lb), p.clone());
            } else {
                edge_paths.insert((lb, la), p.reversed());
            }
        }
        SubdivisionCertificate {
            pattern: PatternGraph::with_terminals(g, (0..t as VertexId).collect()),
            branch_map: label.iter().map(|(&h, &p)| (p, h)).collect(),
            edge_paths,
        }
    }
}

/// Extracts a member of configuration `id` whose terminals are the witness
/// terminals, in order, living in the initial graph minus `w.removed`.
pub fn extract(
    id: ConfigId,
    w: &JoinWitness,
    trace: &ReductionTrace,
    opts: ExtractOptions,
) -> Result<SubdivisionCertificate, EngineError> {
    extract_observed(id, w, trace, opts, &mut |_| {})
}

/// [`extract`] reporting every lift, detach and dispatch to `observer`.
pub fn extract_observed(
    id: ConfigId,
    w: &JoinWitness,
    trace: &ReductionTrace,
    opts: ExtractOptions,
    observer: &mut dyn FnMut(&LiftEvent<'_>),
) -> Result<SubdivisionCertificate, EngineError> {
    check_entry(id, w)?;
    validate_at(trace, w)?;
    let real = Extractor {
        trace,
        opts,
        observer,
    }
    .run(id, w.clone())?;
    let cert = real.to_certificate(id.terminal_count());
    let host = trace
        .initial
        .induced_delete(&w.removed)
        .map_err(|e| internal(e.to_string()))?;
    check_certificate(&host, &cert, Some(&w.terminal_ids()))?;
    Ok(cert)
}

fn check_entry(id: ConfigId, w: &JoinWitness) -> Result<(), EngineError> {
    if !id.check() {
        return Err(EngineError::BadParameter(format!(
            "{id} has parameters out of range"
        )));
    }
    if matches!(
        id,
        ConfigId::C10(_) | ConfigId::C11(_) | ConfigId::C12(_) | ConfigId::C13(_)
    ) {
        return Err(EngineError::NotExtractable { id });
    }
    if w.weights() != id.weights() {
        return Err(EngineError::WeightMismatch {
            id,
            expected: id.weights(),
            found: w.weights(),
        });
    }
    Ok(())
}

/// Outcome of walking a witness down until some add is hit by two or more paths.
pub(crate) struct Hit {
    pub added: VertexId,
    pub detached: Detached,
    /// Parent terminal indices of the detached paths, ascending.
    pub hit: Vec<usize>,
}

/// Lifts `w` level by level until an add step catches at least two paths.
pub(crate) fn descend(
    trace: &ReductionTrace,
    mut w: JoinWitness,
    validate: bool,
    observer: &mut dyn FnMut(&LiftEvent<'_>),
) -> Result<Hit, EngineError> {
    loop {
        if validate {
            validate_at(trace, &w)?;
        }
        let level = w.level;
        let step = trace
            .step_into(level)
            .ok_or_else(|| internal("witness reached level 0"))?;
        let pre = trace.clique_at(level - 1);
        let next = match step {
            ReductionStep::Delete { .. } => {
                let after = lift_through_delete(&w, step, &pre)?;
                observer(&LiftEvent::Delete {
                    before: &w,
                    after: &after,
                });
                after
            }
            &ReductionStep::Add(added) => {
                if w.ending_at(added).len() >= 2 {
                    let detached = detach(&w, added, &pre)?;
                    observer(&LiftEvent::Detach {
                        added,
                        before: &w,
                        result: &detached,
                    });
                    let hit = detached
                        .u_prime
                        .iter()
                        .map(|u| w.terminals.iter().position(|&(x, _)| x == *u).unwrap())
                        .collect();
                    return Ok(Hit {
                        added,
                        detached,
                        hit,
                    });
                }
                let after = lift_through_add_single(&w, added, &pre)?;
                observer(&LiftEvent::AddSingle {
                    added,
                    before: &w,
                    after: &after,
                });
                after
            }
        };
        if next.level >= level {
            return Err(internal("witness level did not decrease"));
        }
        w = next;
    }
}

struct Extractor<'a, 'o> {
    trace: &'a ReductionTrace,
    opts: ExtractOptions,
    observer: &'o mut dyn FnMut(&LiftEvent<'_>),
}

impl Extractor<'_, '_> {
    fn run(&mut self, id: ConfigId, w: JoinWitness) -> Result<Realization, EngineError> {
        let terminals = w.terminal_ids();
        let entry_level = w.level;
        let Hit {
            added,
            detached,
            hit,
        } = descend(self.trace, w, self.opts.validate_each_level, self.observer)?;
        let plan = plan(id, &hit)
            .ok_or_else(|| internal(format!("{id}: no case for paths from terminals {hit:?}")))?;
        (self.observer)(&LiftEvent::Dispatch {
            id,
            level: detached.witness.level + 1,
            child: plan.child.as_ref().map(|(c, _)| *c),
        });
        let spoke = |i: usize| -> Result<&VertexPath, EngineError> {
            let u = terminals[i];
            detached
                .detached
                .iter()
                .find(|p| p.first() == u)
                .ok_or_else(|| internal(format!("{id}: terminal {u} has no detached path")))
        };

        let mut real = match &plan.child {
            None => Realization::default(),
            Some((child_id, refs)) => {
                let child_terms: Vec<VertexId> = refs
                    .iter()
                    .map(|r| match *r {
                        TermRef::U(i) => terminals[i],
                        TermRef::W => added,
                    })
                    .collect();
                let wanted: Vec<(VertexId, usize)> = child_terms
                    .iter()
                    .copied()
                    .zip(child_id.weights())
                    .collect();
                let mut cw = restrict(&detached.witness, &wanted)?;
                if !child_terms.contains(&added) {
                    cw.removed.insert(added);
                }
                cw.removed
                    .extend(terminals.iter().filter(|u| !child_terms.contains(u)));
                debug_assert!(cw.level < entry_level);
                let sub = self.run(*child_id, cw)?;
                if self.opts.check_membership {
                    self.check_member(*child_id, &sub)?;
                }
                sub
            }
        };

        let before = real.vertices();
        let mut fresh: Vec<&VertexPath> = Vec::new();
        for part in &plan.parts {
            match part {
                Part::AddW(spokes) => {
                    real.branches.push(added);
                    for &i in spokes {
                        let p = spoke(i)?;
                        fresh.push(p);
                        real.add_edge(terminals[i], added, p.clone());
                    }
                }
                Part::Spokes(spokes) => {
                    for &i in spokes {
                        let p = spoke(i)?;
                        fresh.push(p);
                        real.add_edge(terminals[i], added, p.clone());
                    }
                }
                &Part::Concat(i, j) => {
                    let (pi, pj) = (spoke(i)?, spoke(j)?);
                    fresh.extend([pi, pj]);
                    real.add_edge(terminals[i], terminals[j], pi.concat(&pj.reversed()));
                }
                &Part::ExtendSpoke(i) => {
                    let u0 = terminals[0];
                    let to_w = real
                        .take_edge(u0, added)
                        .ok_or_else(|| internal(format!("{id}: child has no {u0}-{added} edge")))?;
                    let p = spoke(i)?;
                    fresh.push(p);
                    real.branches.retain(|&b| b != added);
                    real.add_edge(u0, terminals[i], to_w.concat(&p.reversed()));
                }
            }
        }
        // Reattached paths only meet the child realization at their ends.
        for p in fresh {
            if let Some(&x) = p.internal().iter().find(|x| before.contains(x)) {
                return Err(internal(format!(
                    "{id}: detached path interior vertex {x} is used by the child"
                )));
            }
        }
        Ok(real.with_terminals_first(&terminals))
    }

    fn check_member(&self, id: ConfigId, real: &Realization) -> Result<(), EngineError> {
        let cert = real.to_certificate(id.terminal_count());
        let conf = config_members(id).ok_or_else(|| {
            EngineError::BadParameter(format!("{id} has parameters out of range"))
        })?;
        if conf.admits(&cert.pattern) {
            Ok(())
        } else {
            Err(EngineError::NotMember(id))
        }
    }
}
