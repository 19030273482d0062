//! Key predistribution schemes and the key graphs they induce.
//!
//! A scheme assigns each node a ring of opaque 64-bit key ids; the key graph
//! connects two distinct nodes iff their rings intersect. Four schemes are
//! implemented:
//!
//! * `padb` — one fresh pairwise key per edge of a degree-bounded growth
//!   graph, so a node stores at most `d_max` keys;
//! * `eg` — every ring is an independent uniform `ring_size`-subset of a
//!   shared key pool;
//! * `cps` — every node picks `k` random partners and shares a fresh
//!   pairwise key with each (a k-out graph);
//! * `ls` — the transversal-design construction: node `(a, b)` over `Z_q`
//!   holds keys `(x, a*x + b mod q)` for `x < k`.
//!
//! Key ids are counters (or pool/design coordinates), not cryptographic
//! material: the crate measures structure, not ciphers.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use thiserror::Error;

use crate::graph::Graph;
use crate::seeds::rng_from_seed;

pub type KeyId = u64;

/// Key-graph construction switches from per-pair ring merges to a per-key
/// inverted index above this node count.
pub const EG_INVERTED_INDEX_THRESHOLD: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeTag {
    Padb,
    Eg,
    Cps,
    Ls,
}

impl SchemeTag {
    pub const ALL: [SchemeTag; 4] = [SchemeTag::Padb, SchemeTag::Eg, SchemeTag::Cps, SchemeTag::Ls];

    pub fn as_str(&self) -> &'static str {
        match self {
            SchemeTag::Padb => "padb",
            SchemeTag::Eg => "eg",
            SchemeTag::Cps => "cps",
            SchemeTag::Ls => "ls",
        }
    }
}

impl fmt::Display for SchemeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeTag {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, SchemeError> {
        match s.to_ascii_lowercase().as_str() {
            "padb" => Ok(SchemeTag::Padb),
            "eg" => Ok(SchemeTag::Eg),
            "cps" => Ok(SchemeTag::Cps),
            "ls" => Ok(SchemeTag::Ls),
            other => Err(SchemeError::UnknownScheme(other.to_string())),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SchemeError {
    #[error("unknown scheme `{0}` (expected padb, eg, cps or ls)")]
    UnknownScheme(String),
    #[error("ring_size must not exceed pool_size (ring_size = {ring_size}, pool_size = {pool_size})")]
    RingLargerThanPool { ring_size: usize, pool_size: usize },
    #[error("cps k must satisfy 1 <= k < n (k = {k}, n = {n})")]
    CpsKOutOfRange { k: usize, n: usize },
    #[error("ls q must be prime (q = {0})")]
    NonPrimeQ(usize),
    #[error("ls k must satisfy 1 <= k <= q (k = {k}, q = {q})")]
    LsKOutOfRange { k: usize, q: usize },
    #[error("ls supports at most q^2 nodes (n = {n}, q = {q})")]
    LsTooManyNodes { n: usize, q: usize },
    #[error(transparent)]
    Gen(#[from] crate::generators::GenParamsError),
}

/// Per-node key rings plus the induced key graph.
#[derive(Debug, Clone)]
pub struct KeyAssignment {
    pub scheme: SchemeTag,
    /// Sorted ascending ring per node.
    pub rings: Vec<Vec<KeyId>>,
    /// Simple graph: one edge per node pair sharing at least one key.
    pub key_graph: Graph,
}

impl KeyAssignment {
    pub fn node_count(&self) -> usize {
        self.rings.len()
    }

    pub fn max_ring_size(&self) -> usize {
        self.rings.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Keys shared by `u` and `v` (sorted). Panics on out-of-range ids.
    pub fn shared_keys(&self, u: usize, v: usize) -> Vec<KeyId> {
        sorted_intersection(&self.rings[u], &self.rings[v])
    }

    /// One line per node: `node_id: k1 k2 ...` with keys ascending.
    pub fn write_ring_dump<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (v, ring) in self.rings.iter().enumerate() {
            write!(w, "{v}:")?;
            for key in ring {
                write!(w, " {key}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn ring_dump_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_ring_dump(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("dump is ASCII")
    }
}

pub(crate) fn sorted_intersection(a: &[KeyId], b: &[KeyId]) -> Vec<KeyId> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn rings_intersect(a: &[KeyId], b: &[KeyId]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Pairwise keys on a generated graph: one fresh key per non-loop edge,
/// stored in both endpoint rings. Parallel edges are merged; the key graph
/// is the input graph without loops and multiplicities.
pub fn assign_padb_keys(g: &Graph) -> KeyAssignment {
    let n = g.node_count();
    let mut rings = vec![Vec::new(); n];
    let mut key_graph = Graph::new(n);
    let mut seen = HashSet::new();
    let mut next_key: KeyId = 0;
    for (u, v) in g.edges() {
        if u == v {
            continue;
        }
        let pair = (u.min(v), u.max(v));
        if !seen.insert(pair) {
            continue;
        }
        rings[u].push(next_key);
        rings[v].push(next_key);
        next_key += 1;
        key_graph.push_edge(u as u32, v as u32);
    }
    // counters are handed out in edge order, so every ring is sorted
    debug_assert!(rings.iter().all(|r| r.windows(2).all(|w| w[0] < w[1])));
    KeyAssignment {
        scheme: SchemeTag::Padb,
        rings,
        key_graph,
    }
}

/// Random pool scheme: each ring is a uniform `ring_size`-subset of a
/// `pool_size` key pool, drawn independently per node.
pub fn generate_eg(
    n: usize,
    pool_size: usize,
    ring_size: usize,
    seed: u64,
) -> Result<KeyAssignment, SchemeError> {
    if ring_size > pool_size {
        return Err(SchemeError::RingLargerThanPool { ring_size, pool_size });
    }
    let mut rng = rng_from_seed(seed);
    let mut rings: Vec<Vec<KeyId>> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut ring: Vec<KeyId> = rand::seq::index::sample(&mut rng, pool_size, ring_size)
            .into_iter()
            .map(|k| k as KeyId)
            .collect();
        ring.sort_unstable();
        rings.push(ring);
    }
    let key_graph = if n <= EG_INVERTED_INDEX_THRESHOLD {
        eg_key_graph_by_merge(&rings)
    } else {
        eg_key_graph_by_index(&rings, pool_size)
    };
    Ok(KeyAssignment {
        scheme: SchemeTag::Eg,
        rings,
        key_graph,
    })
}

fn eg_key_graph_by_merge(rings: &[Vec<KeyId>]) -> Graph {
    let n = rings.len();
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            if rings_intersect(&rings[u], &rings[v]) {
                g.push_edge(u as u32, v as u32);
            }
        }
    }
    g
}

pub(crate) fn eg_key_graph_by_index(rings: &[Vec<KeyId>], pool_size: usize) -> Graph {
    let n = rings.len();
    let mut holders: Vec<Vec<u32>> = vec![Vec::new(); pool_size];
    for (v, ring) in rings.iter().enumerate() {
        for &key in ring {
            holders[key as usize].push(v as u32);
        }
    }
    let mut pairs = BTreeSet::new();
    for hs in &holders {
        for (i, &u) in hs.iter().enumerate() {
            for &v in &hs[i + 1..] {
                pairs.insert((u.min(v), u.max(v)));
            }
        }
    }
    let mut g = Graph::new(n);
    for (u, v) in pairs {
        g.push_edge(u, v);
    }
    g
}

/// k-out scheme: every node picks `k` distinct partners uniformly at random
/// and shares one fresh pairwise key with each; reciprocal picks are merged
/// into a single key and edge.
pub fn generate_cps(n: usize, k: usize, seed: u64) -> Result<KeyAssignment, SchemeError> {
    if k < 1 || k >= n {
        return Err(SchemeError::CpsKOutOfRange { k, n });
    }
    let mut rng = rng_from_seed(seed);
    let mut pairs = BTreeSet::new();
    for u in 0..n {
        for j in rand::seq::index::sample(&mut rng, n - 1, k) {
            let v = if j >= u { j + 1 } else { j };
            pairs.insert((u.min(v), u.max(v)));
        }
    }
    let mut rings = vec![Vec::new(); n];
    let mut key_graph = Graph::new(n);
    for (next_key, &(u, v)) in pairs.iter().enumerate() {
        rings[u].push(next_key as KeyId);
        rings[v].push(next_key as KeyId);
        key_graph.push_edge(u as u32, v as u32);
    }
    Ok(KeyAssignment {
        scheme: SchemeTag::Cps,
        rings,
        key_graph,
    })
}

/// Transversal-design scheme over `Z_q x Z_q`, truncated to `n` nodes in
/// row-major order. Node `(a, b)` holds keys `(x, a*x + b mod q)` for
/// `x < k`; nodes with distinct `a` share exactly one key when
/// `(b2 - b1) * (a1 - a2)^-1 mod q` lands in `[0, k)`, nodes in the same
/// row share none. Construction is deterministic.
pub fn generate_ls(n: usize, k: usize, q: usize) -> Result<KeyAssignment, SchemeError> {
    if !is_prime(q) {
        return Err(SchemeError::NonPrimeQ(q));
    }
    if k < 1 || k > q {
        return Err(SchemeError::LsKOutOfRange { k, q });
    }
    if n > q * q {
        return Err(SchemeError::LsTooManyNodes { n, q });
    }
    let key_id = |x: usize, y: usize| (x * q + y) as KeyId;
    let mut rings = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = (i / q, i % q);
        let ring: Vec<KeyId> = (0..k).map(|x| key_id(x, (a * x + b) % q)).collect();
        debug_assert!(ring.windows(2).all(|w| w[0] < w[1]));
        rings.push(ring);
    }
    let inv = inverse_table(q);
    let mut key_graph = Graph::new(n);
    for u in 0..n {
        let (a1, b1) = (u / q, u % q);
        for v in (u + 1)..n {
            let (a2, b2) = (v / q, v % q);
            if a1 == a2 {
                continue;
            }
            let x = (b2 + q - b1) * inv[(a1 + q - a2) % q] % q;
            if x < k {
                key_graph.push_edge(u as u32, v as u32);
            }
        }
    }
    Ok(KeyAssignment {
        scheme: SchemeTag::Ls,
        rings,
        key_graph,
    })
}

fn is_prime(q: usize) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime `q` with `q * q >= n`.
pub fn smallest_prime_q(n: usize) -> usize {
    let mut q = ((n as f64).sqrt() as usize).max(2);
    while q * q < n {
        q += 1;
    }
    while !is_prime(q) {
        q += 1;
    }
    q
}

fn inverse_table(q: usize) -> Vec<usize> {
    // inv[a] = a^(q-2) mod q for prime q; inv[0] unused
    (0..q)
        .map(|a| if a == 0 { 0 } else { mod_pow(a, q - 2, q) })
        .collect()
}

fn mod_pow(mut base: usize, mut exp: usize, modulus: usize) -> usize {
    let mut result = 1usize;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    result
}

/// Parameters of one scheme instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeConfig {
    Padb { n: usize, p: f64, k: usize, d_max: usize },
    Eg { n: usize, pool_size: usize, ring_size: usize },
    Cps { n: usize, k: usize },
    Ls { n: usize, k: usize, q: usize },
}

impl SchemeConfig {
    pub fn tag(&self) -> SchemeTag {
        match self {
            SchemeConfig::Padb { .. } => SchemeTag::Padb,
            SchemeConfig::Eg { .. } => SchemeTag::Eg,
            SchemeConfig::Cps { .. } => SchemeTag::Cps,
            SchemeConfig::Ls { .. } => SchemeTag::Ls,
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            SchemeConfig::Padb { n, .. }
            | SchemeConfig::Eg { n, .. }
            | SchemeConfig::Cps { n, .. }
            | SchemeConfig::Ls { n, .. } => n,
        }
    }

    fn gen_params(n: usize, p: f64, k: usize, d_max: usize, seed: u64) -> crate::generators::GenParams {
        crate::generators::GenParams {
            n,
            p,
            k,
            d_max: Some(d_max),
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), SchemeError> {
        match *self {
            SchemeConfig::Padb { n, p, k, d_max } => {
                Self::gen_params(n, p, k, d_max, 0).validate()?;
                Ok(())
            }
            SchemeConfig::Eg { pool_size, ring_size, .. } => {
                if ring_size > pool_size {
                    Err(SchemeError::RingLargerThanPool { ring_size, pool_size })
                } else {
                    Ok(())
                }
            }
            SchemeConfig::Cps { n, k } => {
                if k < 1 || k >= n {
                    Err(SchemeError::CpsKOutOfRange { k, n })
                } else {
                    Ok(())
                }
            }
            SchemeConfig::Ls { n, k, q } => {
                if !is_prime(q) {
                    Err(SchemeError::NonPrimeQ(q))
                } else if k < 1 || k > q {
                    Err(SchemeError::LsKOutOfRange { k, q })
                } else if n > q * q {
                    Err(SchemeError::LsTooManyNodes { n, q })
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Instantiate the scheme. Deterministic in (config, seed); the `ls`
    /// construction ignores the seed entirely.
    pub fn build(&self, seed: u64) -> Result<KeyAssignment, SchemeError> {
        match *self {
            SchemeConfig::Padb { n, p, k, d_max } => {
                let params = Self::gen_params(n, p, k, d_max, seed);
                let (graph, _) = crate::generators::generate_padb(&params)?;
                Ok(assign_padb_keys(&graph))
            }
            SchemeConfig::Eg { n, pool_size, ring_size } => generate_eg(n, pool_size, ring_size, seed),
            SchemeConfig::Cps { n, k } => generate_cps(n, k, seed),
            SchemeConfig::Ls { n, k, q } => generate_ls(n, k, q),
        }
    }
}
