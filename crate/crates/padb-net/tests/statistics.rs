//! Distributional checks of the generators against independent oracles.

use std::collections::BTreeMap;

use padb_net::generators::{degree_histogram, generate_pa, DegreeHistogram, GenParams};
use padb_net::seeds::rng_from_seed;
use padb_net::{generate_cps, theoretical_alpha};

/// Plain uniform-attachment simulator used as an oracle: k distinct targets
/// drawn uniformly from the existing nodes, no weight bookkeeping involved.
fn uniform_attachment_oracle(n: usize, k: usize, seed: u64) -> BTreeMap<usize, usize> {
    let mut rng = rng_from_seed(seed);
    let mut degree = vec![1usize; k]; // seed nodes carry one self-loop
    for t in k..n {
        let picks = rand::seq::index::sample(&mut rng, t, k);
        for u in picks {
            degree[u] += 1;
        }
        degree.push(k);
    }
    let mut counts = BTreeMap::new();
    for d in degree {
        *counts.entry(d).or_insert(0usize) += 1;
    }
    counts
}

fn pooled_counts<F: FnMut(u64) -> BTreeMap<usize, usize>>(seeds: u64, mut f: F) -> BTreeMap<usize, usize> {
    let mut pooled = BTreeMap::new();
    for seed in 0..seeds {
        for (d, c) in f(seed) {
            *pooled.entry(d).or_insert(0usize) += c;
        }
    }
    pooled
}

/// Two-sample chi-square statistic over shared bins, tail-merged so every
/// bin holds at least 5 observations in each sample.
fn two_sample_chi_square(a: &BTreeMap<usize, usize>, b: &BTreeMap<usize, usize>) -> (f64, usize) {
    let max_d = *a.keys().chain(b.keys()).max().unwrap();
    let mut bins: Vec<(u64, u64)> = Vec::new();
    let (mut acc_a, mut acc_b) = (0u64, 0u64);
    for d in 0..=max_d {
        acc_a += a.get(&d).copied().unwrap_or(0) as u64;
        acc_b += b.get(&d).copied().unwrap_or(0) as u64;
        if acc_a >= 5 && acc_b >= 5 {
            bins.push((acc_a, acc_b));
            acc_a = 0;
            acc_b = 0;
        }
    }
    if acc_a > 0 || acc_b > 0 {
        if let Some(last) = bins.last_mut() {
            last.0 += acc_a;
            last.1 += acc_b;
        }
    }
    let total_a: u64 = bins.iter().map(|x| x.0).sum();
    let total_b: u64 = bins.iter().map(|x| x.1).sum();
    let (ka, kb) = (
        (total_b as f64 / total_a as f64).sqrt(),
        (total_a as f64 / total_b as f64).sqrt(),
    );
    let stat = bins
        .iter()
        .map(|&(x, y)| {
            let diff = ka * x as f64 - kb * y as f64;
            diff * diff / (x + y) as f64
        })
        .sum();
    (stat, bins.len().saturating_sub(1))
}

/// Wilson-Hilferty approximation of the chi-square quantile.
fn chi_square_quantile(dof: usize, z: f64) -> f64 {
    let k = dof as f64;
    let t = 1.0 - 2.0 / (9.0 * k) + z * (2.0 / (9.0 * k)).sqrt();
    k * t * t * t
}

#[test]
fn p_one_generation_matches_uniform_attachment_oracle() {
    let (n, k, seeds) = (1000usize, 4usize, 30u64);
    let generated = pooled_counts(seeds, |seed| {
        let params = GenParams {
            n,
            p: 1.0,
            k,
            d_max: None,
            seed: seed ^ 0xF00D,
        };
        let (graph, _) = generate_pa(&params).unwrap();
        degree_histogram(&graph).counts
    });
    let oracle = pooled_counts(seeds, |seed| uniform_attachment_oracle(n, k, seed ^ 0xBEEF));
    let (stat, dof) = two_sample_chi_square(&generated, &oracle);
    let critical = chi_square_quantile(dof, 3.0902); // 99.9% quantile
    assert!(
        stat < critical,
        "chi-square {stat:.2} with {dof} dof exceeds the 99.9% critical value {critical:.2}"
    );
}

#[test]
fn unbounded_tail_slope_is_near_theory() {
    let mut pooled = DegreeHistogram {
        counts: Default::default(),
    };
    for seed in 0..30u64 {
        let params = GenParams {
            n: 1000,
            p: 0.4,
            k: 4,
            d_max: None,
            seed: seed.wrapping_mul(0x9E37) ^ 0x51,
        };
        let (graph, _) = generate_pa(&params).unwrap();
        pooled.merge(&degree_histogram(&graph));
    }
    let fitted = pooled.fitted_alpha().expect("enough support points");
    let theory = theoretical_alpha(0.4).unwrap();
    assert!(
        (fitted - theory).abs() <= 0.5,
        "fitted exponent {fitted:.3} deviates from {theory:.3} by more than 0.5"
    );
}

#[test]
fn cps_mean_degree_is_close_to_two_k() {
    let assignment = generate_cps(10_000, 7, 31).unwrap();
    let mean_degree =
        2.0 * assignment.key_graph.non_loop_edge_count() as f64 / 10_000f64;
    assert!(
        (7.0..=14.0).contains(&mean_degree),
        "mean degree {mean_degree}"
    );
    // merged reciprocal picks keep it strictly below 2k
    assert!(mean_degree > 13.5 && mean_degree < 14.0);
}

#[test]
fn compromise_is_deterministic_given_the_stream() {
    // same attack stream, same victims, same metrics
    let assignment = generate_cps(400, 5, 77).unwrap();
    let (mut r1, mut r2) = (rng_from_seed(123), rng_from_seed(123));
    let a = padb_net::compromise(&assignment, 120, &mut r1).unwrap();
    let b = padb_net::compromise(&assignment, 120, &mut r2).unwrap();
    assert_eq!(a, b);
    let mut r3 = rng_from_seed(124);
    let c = padb_net::compromise(&assignment, 120, &mut r3).unwrap();
    // different stream, almost surely different victim set
    assert!(a != c || a.s == 0);
}
