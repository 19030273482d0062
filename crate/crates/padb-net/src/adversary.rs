//! Random node-compromise simulation and resilience metrics.
//!
//! Compromising a node hands the adversary every key in its ring. The
//! surviving communication graph therefore keeps an edge iff both endpoints
//! survive *and* at least one key they share is still unknown to the
//! adversary. For pairwise-key schemes (`padb`, `cps`) the second condition
//! is vacuous — a link's only key lives in exactly the two endpoint rings —
//! so removal is exactly node-induced there, while pool- and design-based
//! schemes (`eg`, `ls`) also lose links between uncompromised nodes.
//!
//! Reported metrics, all with the full network size `n` as reference:
//! * `V` — fraction of surviving nodes left with no usable link;
//! * `E` — fraction of original non-loop edges removed;
//! * `C` — fraction of nodes in the largest surviving component;
//! * `P` — average path length of the surviving graph over mutually
//!   reachable pairs.

use std::collections::HashSet;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Graph, APL_EXACT_MAX_NODES, APL_SAMPLE_SOURCES};
use crate::kpd::{KeyAssignment, SchemeConfig, SchemeError, SchemeTag};
use crate::seeds::{derive_seed, rng_from_seed, sub_seed, ATTACK_STREAM, SCHEME_STREAM};

#[derive(Debug, Error, PartialEq)]
pub enum AdversaryError {
    #[error("cannot compromise {s} of {n} nodes")]
    TooManyVictims { s: usize, n: usize },
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("fs grid must be nonempty, within [0, 1] and strictly increasing")]
    InvalidGrid,
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

/// How to evaluate the average path length of surviving graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AplMode {
    /// Exact up to [`APL_EXACT_MAX_NODES`] nodes, sampled above.
    #[default]
    Auto,
    Exact,
    /// BFS from [`APL_SAMPLE_SOURCES`] sampled sources.
    Sampled,
}

impl AplMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            AplMode::Auto => "auto",
            AplMode::Exact => "exact",
            AplMode::Sampled => "sampled",
        }
    }

    fn use_sampling(&self, node_count: usize) -> bool {
        match self {
            AplMode::Exact => false,
            AplMode::Sampled => true,
            AplMode::Auto => node_count > APL_EXACT_MAX_NODES,
        }
    }
}

/// Metrics of one compromise event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompromiseOutcome {
    /// Number of compromised nodes.
    pub s: usize,
    /// Compromised fraction `s / n`.
    pub fs: f64,
    /// V: isolated surviving nodes over total `n`.
    pub isolated_fraction: f64,
    /// E: removed edges over original non-loop edges.
    pub removed_edge_fraction: f64,
    /// C: largest surviving component over total `n`.
    pub largest_component_fraction: f64,
    /// P: average path length of the surviving graph.
    pub average_path_length: f64,
    /// BFS sources used when P was sampled rather than exact.
    pub apl_sources: Option<usize>,
}

/// Compromise `s` uniformly chosen nodes.
pub fn compromise<R: Rng + ?Sized>(
    assignment: &KeyAssignment,
    s: usize,
    rng: &mut R,
) -> Result<CompromiseOutcome, AdversaryError> {
    compromise_with_mode(assignment, s, rng, AplMode::Auto)
}

pub fn compromise_with_mode<R: Rng + ?Sized>(
    assignment: &KeyAssignment,
    s: usize,
    rng: &mut R,
    mode: AplMode,
) -> Result<CompromiseOutcome, AdversaryError> {
    let n = assignment.node_count();
    if s > n {
        return Err(AdversaryError::TooManyVictims { s, n });
    }
    let victims: Vec<usize> = rand::seq::index::sample(rng, n, s).into_iter().collect();
    Ok(compromise_victims(assignment, &victims, rng, mode))
}

/// Compromise an explicit victim set (ids must be in range and distinct).
pub fn compromise_victims<R: Rng + ?Sized>(
    assignment: &KeyAssignment,
    victims: &[usize],
    rng: &mut R,
    mode: AplMode,
) -> CompromiseOutcome {
    let n = assignment.node_count();
    let s = victims.len();
    let mut removed = vec![false; n];
    for &v in victims {
        assert!(v < n, "victim id {v} out of range for {n} nodes");
        assert!(!removed[v], "duplicate victim id {v}");
        removed[v] = true;
    }
    let mut revealed: HashSet<u64> = HashSet::new();
    for &v in victims {
        revealed.extend(assignment.rings[v].iter().copied());
    }

    // survivor ids remapped contiguously, ascending
    let mut old_to_new = vec![u32::MAX; n];
    let mut survivors = 0u32;
    for v in 0..n {
        if !removed[v] {
            old_to_new[v] = survivors;
            survivors += 1;
        }
    }
    let mut surviving = Graph::new(survivors as usize);
    let mut kept_edges = 0usize;
    for (u, v) in assignment.key_graph.edges() {
        if u == v || removed[u] || removed[v] {
            continue;
        }
        if has_unrevealed_shared_key(&assignment.rings[u], &assignment.rings[v], &revealed) {
            surviving.push_edge(old_to_new[u], old_to_new[v]);
            kept_edges += 1;
        }
    }

    let original_edges = assignment.key_graph.non_loop_edge_count();
    let removed_edge_fraction = if original_edges == 0 {
        0.0
    } else {
        (original_edges - kept_edges) as f64 / original_edges as f64
    };
    let isolated_fraction = if n == 0 {
        0.0
    } else {
        surviving.isolated_count() as f64 / n as f64
    };
    let largest_component_fraction = surviving.components().largest_fraction(n);
    let (average_path_length, apl_sources) = if mode.use_sampling(surviving.node_count())
        && APL_SAMPLE_SOURCES < surviving.node_count()
    {
        (
            surviving.average_path_length_sampled(APL_SAMPLE_SOURCES, rng),
            Some(APL_SAMPLE_SOURCES),
        )
    } else {
        (surviving.average_path_length(), None)
    };
    CompromiseOutcome {
        s,
        fs: if n == 0 { 0.0 } else { s as f64 / n as f64 },
        isolated_fraction,
        removed_edge_fraction,
        largest_component_fraction,
        average_path_length,
        apl_sources,
    }
}

fn has_unrevealed_shared_key(a: &[u64], b: &[u64], revealed: &HashSet<u64>) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if !revealed.contains(&a[i]) {
                    return true;
                }
                i += 1;
                j += 1;
            }
        }
    }
    false
}

/// One raw Monte-Carlo cell.
#[derive(Debug, Clone, Copy)]
pub struct RawOutcome {
    pub scheme: SchemeTag,
    pub fs: f64,
    pub trial: usize,
    /// Cell seed the scheme and attack streams were derived from.
    pub seed: u64,
    pub outcome: CompromiseOutcome,
}

/// Mean/standard deviation pair (sample sd, 0 for a single trial).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub mean: f64,
    pub sd: f64,
}

fn stat(values: impl Iterator<Item = f64> + Clone) -> Stat {
    let n = values.clone().count();
    if n == 0 {
        return Stat { mean: 0.0, sd: 0.0 };
    }
    let mean = values.clone().sum::<f64>() / n as f64;
    let sd = if n < 2 {
        0.0
    } else {
        let ss: f64 = values.map(|x| (x - mean) * (x - mean)).sum();
        (ss / (n - 1) as f64).sqrt()
    };
    Stat { mean, sd }
}

/// Aggregated metrics at one grid point.
#[derive(Debug, Clone, Copy)]
pub struct FsCell {
    pub fs: f64,
    pub s: usize,
    pub isolated: Stat,
    pub removed_edges: Stat,
    pub largest_component: Stat,
    pub path_length: Stat,
}

/// Per-fs aggregates for one scheme.
#[derive(Debug, Clone)]
pub struct ResilienceCurve {
    pub scheme: SchemeTag,
    pub cells: Vec<FsCell>,
    pub trials: usize,
    pub base_seed: u64,
}

/// Curve plus the raw per-trial outcomes behind it.
#[derive(Debug, Clone)]
pub struct ResilienceRun {
    pub curve: ResilienceCurve,
    pub raw: Vec<RawOutcome>,
}

/// Monte-Carlo resilience curve: for every grid fraction, `trials`
/// independent (scheme instantiation, compromise) pairs. Each cell's seed is
/// `derive_seed(base_seed, fs_index, trial_index)`, so any parallel schedule
/// of the cells yields the identical curve.
pub fn resilience_curve(
    cfg: &SchemeConfig,
    fs_grid: &[f64],
    trials: usize,
    base_seed: u64,
    mode: AplMode,
) -> Result<ResilienceRun, AdversaryError> {
    if trials == 0 {
        return Err(AdversaryError::NoTrials);
    }
    if fs_grid.is_empty()
        || fs_grid.iter().any(|fs| !(0.0..=1.0).contains(fs) || fs.is_nan())
        || fs_grid.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(AdversaryError::InvalidGrid);
    }
    cfg.validate()?;
    let n = cfg.n();
    let cells: Vec<(usize, usize)> = (0..fs_grid.len())
        .flat_map(|fi| (0..trials).map(move |ti| (fi, ti)))
        .collect();
    let raw: Vec<RawOutcome> = cells
        .into_par_iter()
        .map(|(fi, ti)| -> Result<RawOutcome, AdversaryError> {
            let seed = derive_seed(base_seed, fi as u64, ti as u64);
            let assignment = cfg.build(sub_seed(seed, SCHEME_STREAM))?;
            let mut rng = rng_from_seed(sub_seed(seed, ATTACK_STREAM));
            let s = (fs_grid[fi] * n as f64).round() as usize;
            let outcome = compromise_with_mode(&assignment, s, &mut rng, mode)?;
            Ok(RawOutcome {
                scheme: cfg.tag(),
                fs: outcome.fs,
                trial: ti,
                seed,
                outcome,
            })
        })
        .collect::<Result<_, _>>()?;
    let cells = (0..fs_grid.len())
        .map(|fi| {
            let slice = &raw[fi * trials..(fi + 1) * trials];
            FsCell {
                fs: slice[0].outcome.fs,
                s: slice[0].outcome.s,
                isolated: stat(slice.iter().map(|r| r.outcome.isolated_fraction)),
                removed_edges: stat(slice.iter().map(|r| r.outcome.removed_edge_fraction)),
                largest_component: stat(slice.iter().map(|r| r.outcome.largest_component_fraction)),
                path_length: stat(slice.iter().map(|r| r.outcome.average_path_length)),
            }
        })
        .collect();
    Ok(ResilienceRun {
        curve: ResilienceCurve {
            scheme: cfg.tag(),
            cells,
            trials,
            base_seed,
        },
        raw,
    })
}
