//! Brute-force oracles shared by the integration suites. Everything here
//! works from a plain (node count, edge list) view so it stays independent
//! of the library's BFS/adjacency implementation.
#![allow(dead_code)] // each test binary uses a different subset
#![allow(clippy::needless_range_loop)] // indexed loops mirror the textbook algorithm

use rand::Rng;

pub const INF: u32 = u32::MAX;

/// All-pairs shortest paths, Floyd-Warshall style. Self-loops and parallel
/// edges collapse to unit adjacency.
pub fn all_pairs_distances(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<u32>> {
    let mut dist = vec![vec![INF; n]; n];
    for (v, row) in dist.iter_mut().enumerate() {
        row[v] = 0;
    }
    for &(u, v) in edges {
        if u != v {
            dist[u][v] = 1;
            dist[v][u] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if dist[i][k] == INF {
                continue;
            }
            for j in 0..n {
                if dist[k][j] == INF {
                    continue;
                }
                let through = dist[i][k] + dist[k][j];
                if through < dist[i][j] {
                    dist[i][j] = through;
                }
            }
        }
    }
    dist
}

pub struct OracleMetrics {
    pub average_path_length: f64,
    pub diameter: usize,
    /// Component sizes in descending order.
    pub component_sizes: Vec<usize>,
    pub isolated: usize,
}

pub fn oracle_metrics(n: usize, edges: &[(usize, usize)]) -> OracleMetrics {
    let dist = all_pairs_distances(n, edges);
    let mut sum = 0u64;
    let mut pairs = 0u64;
    let mut diameter = 0u32;
    for i in 0..n {
        for j in (i + 1)..n {
            if dist[i][j] != INF {
                sum += dist[i][j] as u64;
                pairs += 1;
                diameter = diameter.max(dist[i][j]);
            }
        }
    }
    // components from the reachability relation
    let mut label = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    for i in 0..n {
        if label[i] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        let mut size = 0;
        for j in 0..n {
            if dist[i][j] != INF {
                label[j] = id;
                size += 1;
            }
        }
        sizes.push(size);
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let isolated = (0..n)
        .filter(|&v| edges.iter().all(|&(a, b)| a == b || (a != v && b != v)))
        .count();
    OracleMetrics {
        average_path_length: if pairs == 0 { 0.0 } else { sum as f64 / pairs as f64 },
        diameter: diameter as usize,
        component_sizes: sizes,
        isolated,
    }
}

/// Random small multigraph: up to `max_n` nodes, random edge count, with
/// occasional self-loops and parallel edges.
pub fn random_edge_list<R: Rng>(rng: &mut R, max_n: usize) -> (usize, Vec<(usize, usize)>) {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(0..=(3 * n));
    let edges = (0..m)
        .map(|_| {
            if rng.gen_bool(0.05) {
                let v = rng.gen_range(0..n);
                (v, v)
            } else {
                (rng.gen_range(0..n), rng.gen_range(0..n))
            }
        })
        .collect();
    (n, edges)
}

pub fn build_graph(n: usize, edges: &[(usize, usize)]) -> padb_net::Graph {
    let mut g = padb_net::Graph::new(n);
    for &(u, v) in edges {
        g.add_edge(u, v).expect("edge ids in range");
    }
    g
}
