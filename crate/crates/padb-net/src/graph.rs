//! Undirected multigraph with contiguous integer node ids and the
//! structural metrics used throughout the crate: shortest-path statistics,
//! connected components, isolation counts and induced subgraphs after
//! node removal.
//!
//! Conventions:
//! * a self-loop is stored once and contributes exactly 1 to the degree;
//! * parallel edges are allowed, but distances treat them as one;
//! * average path length is the mean shortest-path distance over all
//!   mutually reachable unordered pairs of distinct nodes (0 when no such
//!   pair exists).

use std::collections::BTreeMap;
use std::io::{self, Write};

use rand::Rng;
use thiserror::Error;

/// Exact all-sources path metrics are used up to this many nodes; larger
/// graphs fall back to [`APL_SAMPLE_SOURCES`] sampled BFS sources.
pub const APL_EXACT_MAX_NODES: usize = 2000;
/// Number of BFS sources drawn when estimating the average path length.
pub const APL_SAMPLE_SOURCES: usize = 1000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("node id {id} out of range for graph with {node_count} nodes")]
    NodeOutOfRange { id: usize, node_count: usize },
}

/// Undirected multigraph. Immutable once construction is finished; shared
/// read-only access from multiple threads is safe.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    adjacency: Vec<Vec<u32>>,
    edges: Vec<(u32, u32)>,
    loop_count: usize,
}

impl Graph {
    /// Graph with `n` nodes and no edges.
    pub fn new(n: usize) -> Self {
        assert!(n <= u32::MAX as usize, "node count {n} exceeds u32 range");
        Graph {
            adjacency: vec![Vec::new(); n],
            edges: Vec::new(),
            loop_count: 0,
        }
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of edges including self-loops and parallel edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of edges whose endpoints differ.
    pub fn non_loop_edge_count(&self) -> usize {
        self.edges.len() - self.loop_count
    }

    /// Degree of `v`; a self-loop counts 1.
    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Adjacency list of `v`. A self-loop appears once, as `v` itself.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().map(|&u| u as usize)
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(u, v)| (u as usize, v as usize))
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.node_count();
        for id in [u, v] {
            if id >= n {
                return Err(GraphError::NodeOutOfRange { id, node_count: n });
            }
        }
        self.push_edge(u as u32, v as u32);
        Ok(())
    }

    /// Internal unchecked insertion for generators that own their ids.
    pub(crate) fn push_edge(&mut self, u: u32, v: u32) {
        if u == v {
            self.adjacency[u as usize].push(u);
            self.loop_count += 1;
        } else {
            self.adjacency[u as usize].push(v);
            self.adjacency[v as usize].push(u);
        }
        self.edges.push((u, v));
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Nodes with no neighbor other than themselves (a node carrying only a
    /// self-loop counts as isolated).
    pub fn isolated_count(&self) -> usize {
        self.adjacency
            .iter()
            .enumerate()
            .filter(|(v, adj)| adj.iter().all(|&u| u as usize == *v))
            .count()
    }

    /// BFS from `src`, accumulating on the fly. Returns the sum of finite
    /// distances, the number of reached nodes (including `src`) and the
    /// eccentricity of `src` within its component.
    fn bfs_accumulate(&self, src: u32, dist: &mut [u32], queue: &mut Vec<u32>) -> (u64, usize, u32) {
        dist[src as usize] = 0;
        queue.clear();
        queue.push(src);
        let mut head = 0;
        let mut sum = 0u64;
        let mut reached = 1usize;
        let mut max_d = 0u32;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            let d = dist[v as usize];
            for &w in &self.adjacency[v as usize] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = d + 1;
                    sum += (d + 1) as u64;
                    reached += 1;
                    max_d = max_d.max(d + 1);
                    queue.push(w);
                }
            }
        }
        (sum, reached, max_d)
    }

    fn clear_marks(dist: &mut [u32], queue: &[u32]) {
        for &v in queue {
            dist[v as usize] = u32::MAX;
        }
    }

    /// Exact average path length and diameter in one all-sources pass.
    pub fn path_metrics(&self) -> PathMetrics {
        let n = self.node_count();
        let mut dist = vec![u32::MAX; n];
        let mut queue = Vec::with_capacity(n);
        let mut sum = 0u64;
        let mut pairs = 0u64;
        let mut diameter = 0u32;
        for src in 0..n as u32 {
            let (s, reached, ecc) = self.bfs_accumulate(src, &mut dist, &mut queue);
            sum += s;
            pairs += (reached - 1) as u64;
            diameter = diameter.max(ecc);
            Self::clear_marks(&mut dist, &queue);
        }
        // ordered-pair mean equals the unordered-pair mean by symmetry
        let apl = if pairs == 0 { 0.0 } else { sum as f64 / pairs as f64 };
        PathMetrics {
            average_path_length: apl,
            diameter: diameter as usize,
        }
    }

    /// Mean shortest-path distance over mutually reachable unordered pairs.
    pub fn average_path_length(&self) -> f64 {
        self.path_metrics().average_path_length
    }

    /// Maximum finite shortest-path distance; 0 when no pair is reachable.
    pub fn diameter(&self) -> usize {
        self.path_metrics().diameter
    }

    /// Average path length estimated from `sources` uniformly sampled BFS
    /// roots. Falls back to the exact computation when `sources` covers the
    /// whole graph.
    pub fn average_path_length_sampled<R: Rng + ?Sized>(&self, sources: usize, rng: &mut R) -> f64 {
        let n = self.node_count();
        if sources >= n {
            return self.average_path_length();
        }
        let mut dist = vec![u32::MAX; n];
        let mut queue = Vec::with_capacity(n);
        let mut sum = 0u64;
        let mut pairs = 0u64;
        for src in rand::seq::index::sample(rng, n, sources) {
            let (s, reached, _) = self.bfs_accumulate(src as u32, &mut dist, &mut queue);
            sum += s;
            pairs += (reached - 1) as u64;
            Self::clear_marks(&mut dist, &queue);
        }
        if pairs == 0 {
            0.0
        } else {
            sum as f64 / pairs as f64
        }
    }

    /// Connected components (self-loops and edge multiplicity are irrelevant).
    pub fn components(&self) -> Components {
        let n = self.node_count();
        let mut labels = vec![usize::MAX; n];
        let mut sizes = Vec::new();
        let mut queue = Vec::new();
        for start in 0..n {
            if labels[start] != usize::MAX {
                continue;
            }
            let label = sizes.len();
            let mut size = 0usize;
            labels[start] = label;
            queue.clear();
            queue.push(start as u32);
            while let Some(v) = queue.pop() {
                size += 1;
                for &w in &self.adjacency[v as usize] {
                    if labels[w as usize] == usize::MAX {
                        labels[w as usize] = label;
                        queue.push(w);
                    }
                }
            }
            sizes.push(size);
        }
        Components { labels, sizes }
    }

    /// Induced subgraph on the complement of `victims`. Survivor ids are
    /// remapped contiguously in ascending order of their old ids; edges keep
    /// their insertion order. Panics if a victim id is out of range.
    pub fn remove_nodes(&self, victims: &[usize]) -> NodeRemoval {
        let n = self.node_count();
        let mut removed = vec![false; n];
        for &v in victims {
            assert!(v < n, "victim id {v} out of range for {n} nodes");
            removed[v] = true;
        }
        let mut old_to_new = vec![None; n];
        let mut next = 0u32;
        for v in 0..n {
            if !removed[v] {
                old_to_new[v] = Some(next as usize);
                next += 1;
            }
        }
        let mut graph = Graph::new(next as usize);
        for &(u, v) in &self.edges {
            if let (Some(nu), Some(nv)) = (old_to_new[u as usize], old_to_new[v as usize]) {
                graph.push_edge(nu as u32, nv as u32);
            }
        }
        NodeRemoval { graph, old_to_new }
    }

    /// Structural summary; exact path metrics, so intended for graphs within
    /// [`APL_EXACT_MAX_NODES`].
    pub fn metric_report(&self) -> MetricReport {
        let n = self.node_count();
        let PathMetrics {
            average_path_length,
            diameter,
        } = self.path_metrics();
        let components = self.components();
        MetricReport {
            average_path_length,
            diameter,
            largest_component_fraction: components.largest_fraction(n),
            isolated_fraction: if n == 0 {
                0.0
            } else {
                self.isolated_count() as f64 / n as f64
            },
            component_sizes: components.sorted_sizes(),
        }
    }

    /// Line-oriented dump: `n m` on the first line, then one `u v` pair per
    /// edge in insertion order. Identical seeds produce byte-identical dumps.
    pub fn write_dump<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{} {}", self.node_count(), self.edge_count())?;
        for &(u, v) in &self.edges {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }

    pub fn dump_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_dump(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("dump is ASCII")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathMetrics {
    pub average_path_length: f64,
    pub diameter: usize,
}

#[derive(Debug, Clone)]
pub struct Components {
    /// Component label per node, labels are 0-based and dense.
    pub labels: Vec<usize>,
    /// Size of each component, indexed by label.
    pub sizes: Vec<usize>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn largest(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    /// Largest component size over `total` nodes; 0 for an empty graph.
    pub fn largest_fraction(&self, total: usize) -> f64 {
        if total == 0 {
            0.0
        } else {
            self.largest() as f64 / total as f64
        }
    }

    /// Sizes in descending order.
    pub fn sorted_sizes(&self) -> Vec<usize> {
        let mut sizes = self.sizes.clone();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}

#[derive(Debug, Clone)]
pub struct NodeRemoval {
    pub graph: Graph,
    /// Old node id -> new id for survivors, `None` for removed nodes.
    pub old_to_new: Vec<Option<usize>>,
}

#[derive(Debug, Clone)]
pub struct MetricReport {
    pub average_path_length: f64,
    pub diameter: usize,
    pub largest_component_fraction: f64,
    pub isolated_fraction: f64,
    /// Component sizes in descending order.
    pub component_sizes: Vec<usize>,
}

/// Degree -> node count map over all nodes of a graph.
pub fn degree_counts(g: &Graph) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for v in 0..g.node_count() {
        *counts.entry(g.degree(v)).or_insert(0) += 1;
    }
    counts
}
