//! Growth-model graph generators.
//!
//! Both models grow a graph one vertex at a time starting from `k` seed
//! nodes that carry one self-loop each (the loop gives every seed node a
//! nonzero sampling weight). Each arriving vertex flips a single coin `r`:
//! with probability `p` its `k` distinct targets are chosen uniformly at
//! random, otherwise proportionally to current degree. The bounded variant
//! additionally restricts the candidate set to vertices of degree at most
//! `d_max - 1`, which caps every degree at `d_max`.
//!
//! Eligibility is snapshotted when a vertex arrives: all `k` picks are made
//! without replacement against the pre-arrival degrees, and degrees are
//! updated only after the whole batch.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::sampling::WeightedIndex;
use crate::seeds::rng_from_seed;
use rand::Rng;

#[derive(Debug, Error, PartialEq)]
pub enum GenParamsError {
    #[error("k must be at least 1 (got {0})")]
    KTooSmall(usize),
    #[error("n must be at least k (n = {n}, k = {k})")]
    NTooSmall { n: usize, k: usize },
    #[error("p must lie in [0, 1] (got {0})")]
    POutOfRange(f64),
    #[error("d_max must be at least k (d_max = {d_max}, k = {k})")]
    DMaxTooSmall { d_max: usize, k: usize },
    #[error("the unbounded model takes no d_max")]
    UnexpectedDMax,
    #[error("the bounded model requires d_max")]
    MissingDMax,
    #[error("the power-law exponent is undefined at p = 1")]
    AlphaUndefined,
}

/// Parameters of one generation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenParams {
    /// Final node count.
    pub n: usize,
    /// Probability of the uniform branch for each new vertex.
    pub p: f64,
    /// Edges attached to every new vertex.
    pub k: usize,
    /// Degree bound; `None` for the unbounded model.
    pub d_max: Option<usize>,
    pub seed: u64,
}

impl GenParams {
    pub fn validate(&self) -> Result<(), GenParamsError> {
        if self.k < 1 {
            return Err(GenParamsError::KTooSmall(self.k));
        }
        if self.n < self.k {
            return Err(GenParamsError::NTooSmall { n: self.n, k: self.k });
        }
        if !(0.0..=1.0).contains(&self.p) || self.p.is_nan() {
            return Err(GenParamsError::POutOfRange(self.p));
        }
        if let Some(d_max) = self.d_max {
            if d_max < self.k {
                return Err(GenParamsError::DMaxTooSmall { d_max, k: self.k });
            }
        }
        Ok(())
    }
}

/// Metadata recorded with every generated graph.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GenMeta {
    pub params: GenParams,
    /// Set when some vertex found fewer than `k` eligible targets.
    pub degenerate: bool,
}

/// Unbounded growth model; `params.d_max` must be `None`.
pub fn generate_pa(params: &GenParams) -> Result<(Graph, GenMeta), GenParamsError> {
    params.validate()?;
    if params.d_max.is_some() {
        return Err(GenParamsError::UnexpectedDMax);
    }
    Ok(grow(params))
}

/// Degree-bounded growth model; `params.d_max` must be set and at least `k`.
pub fn generate_padb(params: &GenParams) -> Result<(Graph, GenMeta), GenParamsError> {
    params.validate()?;
    let d_max = params.d_max.ok_or(GenParamsError::MissingDMax)?;
    if d_max < 2 * params.k {
        // mean degree approaches 2k, so most of the graph will saturate
        log::warn!(
            "d_max = {} is below 2k = {}; expect saturated candidate sets",
            d_max,
            2 * params.k
        );
    }
    Ok(grow(params))
}

fn grow(params: &GenParams) -> (Graph, GenMeta) {
    let GenParams { n, p, k, d_max, seed } = *params;
    let cap = d_max.unwrap_or(usize::MAX);
    let mut rng = rng_from_seed(seed);
    let mut graph = Graph::new(n);
    // preferential weights are current degrees, uniform weights are 0/1;
    // saturated vertices (degree > cap - 1) carry weight 0 in both
    let mut pref = WeightedIndex::new();
    let mut unif = WeightedIndex::new();
    let eligible = |deg: usize| deg < cap; // i.e. deg <= cap - 1
    for v in 0..k {
        graph.push_edge(v as u32, v as u32);
        pref.push(if eligible(1) { 1 } else { 0 });
        unif.push(if eligible(1) { 1 } else { 0 });
    }
    let mut degenerate = false;
    for t in k..n {
        let r: f64 = rng.gen();
        let picks = if r <= p {
            unif.sample_distinct(k, &mut rng)
        } else {
            pref.sample_distinct(k, &mut rng)
        };
        if picks.len() < k {
            degenerate = true;
        }
        for &u in &picks {
            graph.push_edge(t as u32, u as u32);
        }
        for &u in &picks {
            let deg = graph.degree(u);
            if eligible(deg) {
                pref.set_weight(u, deg as u64);
            } else {
                pref.set_weight(u, 0);
                unif.set_weight(u, 0);
            }
        }
        let deg_t = graph.degree(t);
        if eligible(deg_t) {
            pref.push(deg_t as u64);
            unif.push(1);
        } else {
            pref.push(0);
            unif.push(0);
        }
    }
    let meta = GenMeta {
        params: *params,
        degenerate,
    };
    (graph, meta)
}

/// Degree distribution with an optional log-log least-squares exponent fit.
#[derive(Debug, Clone)]
pub struct DegreeHistogram {
    /// degree -> node count
    pub counts: BTreeMap<usize, usize>,
}

impl DegreeHistogram {
    pub fn node_count(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn max_degree(&self) -> usize {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    pub fn count(&self, degree: usize) -> usize {
        self.counts.get(&degree).copied().unwrap_or(0)
    }

    /// Merge another histogram into this one (for pooling over seeds).
    pub fn merge(&mut self, other: &DegreeHistogram) {
        for (&d, &c) in &other.counts {
            *self.counts.entry(d).or_insert(0) += c;
        }
    }

    /// Power-law exponent estimated by least squares on (ln d, ln count)
    /// over degrees d >= 1 with count >= 5. Diagnostic only; `None` when
    /// fewer than two such support points exist.
    pub fn fitted_alpha(&self) -> Option<f64> {
        let points: Vec<(f64, f64)> = self
            .counts
            .iter()
            .filter(|&(&d, &c)| d >= 1 && c >= 5)
            .map(|(&d, &c)| ((d as f64).ln(), (c as f64).ln()))
            .collect();
        if points.len() < 2 {
            return None;
        }
        let n = points.len() as f64;
        let sx: f64 = points.iter().map(|p| p.0).sum();
        let sy: f64 = points.iter().map(|p| p.1).sum();
        let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
        let denom = n * sxx - sx * sx;
        if denom == 0.0 {
            return None;
        }
        let slope = (n * sxy - sx * sy) / denom;
        Some(-slope)
    }
}

pub fn degree_histogram(g: &Graph) -> DegreeHistogram {
    DegreeHistogram {
        counts: crate::graph::degree_counts(g),
    }
}

/// Power-law exponent `1 + 1/(1 - p)` of the unbounded model's degree law.
pub fn theoretical_alpha(p: f64) -> Result<f64, GenParamsError> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(GenParamsError::POutOfRange(p));
    }
    if p == 1.0 {
        return Err(GenParamsError::AlphaUndefined);
    }
    Ok(1.0 + 1.0 / (1.0 - p))
}
