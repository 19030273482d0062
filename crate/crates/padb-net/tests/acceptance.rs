//! Acceptance suite: one test per release criterion, each printing a
//! `PASS`/`FAIL` line (visible with `cargo test --test acceptance --
//! --nocapture`). Tolerances and thresholds are pinned here.

#[path = "support/mod.rs"]
mod support;

use padb_net::adversary::{compromise_victims, resilience_curve, AplMode};
use padb_net::config::{ExperimentConfig, DEFAULT_BASE_SEED};
use padb_net::generators::{degree_histogram, generate_padb, DegreeHistogram, GenParams};
use padb_net::kpd::{SchemeConfig, SchemeTag};
use padb_net::presets::{run_preset_resilience, run_preset_table1};
use padb_net::seeds::{derive_seed, rng_from_seed};
use rand::Rng;

fn padb_params(n: usize, p: f64, k: usize, d_max: usize, seed: u64) -> GenParams {
    GenParams {
        n,
        p,
        k,
        d_max: Some(d_max),
        seed,
    }
}

/// Mean path length within +-0.20 and modal diameter within +-1 of the
/// reference table for both growth models, 30 seeds, n=1000, p=0.4, k=4.
#[test]
fn table1_reference_values() {
    let seeds: Vec<u64> = (0..30).map(|i| derive_seed(DEFAULT_BASE_SEED, 0, i)).collect();
    let dir = tempfile::tempdir().unwrap();
    let report = run_preset_table1(&seeds, dir.path()).unwrap();
    for row in &report.rows {
        println!("{}", row.status_line());
    }
    println!(
        "{} table1 reference values",
        if report.all_pass() { "PASS" } else { "FAIL" }
    );
    assert!(report.all_pass(), "some table rows missed their tolerance");
}

/// The bounded generator never exceeds d_max, over randomized valid
/// parameter sets.
#[test]
fn degree_bound_always_holds() {
    let mut rng = rng_from_seed(0xACCE_0002);
    for case in 0..100 {
        let k = rng.gen_range(1..=8usize);
        let d_max = rng.gen_range(k..=k + 30);
        let n = rng.gen_range(k.max(10)..=2000);
        let p: f64 = rng.gen();
        let params = padb_params(n, p, k, d_max, rng.gen());
        let (graph, _) = generate_padb(&params).unwrap();
        assert!(
            graph.max_degree() <= d_max,
            "case {case}: max degree {} exceeds bound {d_max} ({params:?})",
            graph.max_degree()
        );
    }
    println!("PASS degree bound holds on 100 randomized parameter sets");
}

/// k=4 with d_max >= 15 never saturates: no degeneracy flag and a connected
/// graph at n in {100, 1000, 10000}, 20 seeds each.
#[test]
fn bounded_generation_stays_connected() {
    for d_max in [15, 25] {
        for n in [100usize, 1000, 10_000] {
            for trial in 0..20u64 {
                let seed = derive_seed(DEFAULT_BASE_SEED, d_max as u64, trial ^ ((n as u64) << 32));
                let (graph, meta) = generate_padb(&padb_params(n, 0.4, 4, d_max, seed)).unwrap();
                assert!(!meta.degenerate, "degeneracy at n={n}, d_max={d_max}, trial={trial}");
                assert_eq!(
                    graph.components().count(),
                    1,
                    "disconnected at n={n}, d_max={d_max}, trial={trial}"
                );
            }
        }
    }
    println!("PASS bounded generation connected for d_max in {{15,25}}, n in {{100,1000,10000}}");
}

/// Pooled over 30 seeds, the degree histogram of the bounded model spikes at
/// the cap: count(d_max) > count(d_max - 1).
#[test]
fn degree_spike_at_cap() {
    let mut pooled = DegreeHistogram {
        counts: Default::default(),
    };
    for trial in 0..30u64 {
        let seed = derive_seed(DEFAULT_BASE_SEED, 4, trial);
        let (graph, _) = generate_padb(&padb_params(1000, 0.4, 4, 15, seed)).unwrap();
        pooled.merge(&degree_histogram(&graph));
    }
    let at_cap = pooled.count(15);
    let below_cap = pooled.count(14);
    println!(
        "{} degree spike at cap: count(15) = {at_cap} vs count(14) = {below_cap}",
        if at_cap > below_cap { "PASS" } else { "FAIL" }
    );
    assert!(at_cap > below_cap);
}

fn desk_schemes(n: usize) -> [SchemeConfig; 4] {
    [
        SchemeConfig::Padb { n, p: 0.4, k: 4, d_max: 25 },
        SchemeConfig::Cps { n, k: 7 },
        SchemeConfig::Eg { n, pool_size: 50 * n, ring_size: 25 },
        SchemeConfig::Ls {
            n,
            k: 25,
            q: padb_net::kpd::smallest_prime_q(n.max(25 * 25)),
        },
    ]
}

/// Node removal is exact on every scheme's key graph: the surviving edge
/// multiset equals the original edges with both endpoints surviving. For the
/// pairwise-key schemes the adversary removes exactly those edges as well
/// (full security).
#[test]
fn node_removal_keeps_exactly_surviving_edges() {
    let n = 700;
    let mut rng = rng_from_seed(0xACCE_0005);
    for cfg in desk_schemes(n) {
        let assignment = cfg.build(rng.gen()).unwrap();
        let graph = &assignment.key_graph;
        for _ in 0..50 {
            let s = rng.gen_range(0..=n);
            let victims: Vec<usize> = rand::seq::index::sample(&mut rng, n, s).into_iter().collect();
            let removal = graph.remove_nodes(&victims);
            let expected: Vec<(usize, usize)> = graph
                .edges()
                .filter_map(|(u, v)| {
                    match (removal.old_to_new[u], removal.old_to_new[v]) {
                        (Some(nu), Some(nv)) => Some((nu, nv)),
                        _ => None,
                    }
                })
                .collect();
            let got: Vec<(usize, usize)> = removal.graph.edges().collect();
            assert_eq!(got, expected, "scheme {}", cfg.tag());

            if matches!(cfg.tag(), SchemeTag::Padb | SchemeTag::Cps) {
                let out = compromise_victims(&assignment, &victims, &mut rng, AplMode::Auto);
                let kept = graph.non_loop_edge_count()
                    - (out.removed_edge_fraction * graph.non_loop_edge_count() as f64).round()
                        as usize;
                assert_eq!(
                    kept,
                    removal.graph.edge_count(),
                    "full security violated for {}",
                    cfg.tag()
                );
            }
        }
    }
    println!("PASS node removal keeps exactly the surviving edges (50 sets x 4 schemes)");
}

/// Comparative orderings of the four schemes at n=2000, fs=0.3, 20 trials.
#[test]
fn resilience_orderings_at_desk_scale() {
    let n = 2000;
    let trials = 20;
    let configs = [
        SchemeConfig::Padb { n, p: 0.4, k: 4, d_max: 25 },
        SchemeConfig::Cps { n, k: 7 },
        SchemeConfig::Eg { n, pool_size: 100_000, ring_size: 25 },
        SchemeConfig::Ls { n, k: 25, q: 47 },
    ];
    let mut means = std::collections::HashMap::new();
    for cfg in &configs {
        let run = resilience_curve(cfg, &[0.3], trials, DEFAULT_BASE_SEED, AplMode::Auto).unwrap();
        let cell = run.curve.cells[0];
        means.insert(cfg.tag(), cell);
    }
    let v = |t: SchemeTag| means[&t].isolated.mean;
    let e = |t: SchemeTag| means[&t].removed_edges.mean;
    let c = |t: SchemeTag| means[&t].largest_component.mean;
    let p = |t: SchemeTag| means[&t].path_length.mean;
    use SchemeTag::*;
    for tag in [Padb, Cps, Eg, Ls] {
        println!(
            "  {tag}: V={:.6} E={:.6} C={:.6} P={:.6}",
            v(tag),
            e(tag),
            c(tag),
            p(tag)
        );
    }

    let clauses: Vec<(&str, bool)> = vec![
        ("V: padb < cps", v(Padb) < v(Cps)),
        ("V: cps <= eg", v(Cps) <= v(Eg)),
        ("V: eg < ls", v(Eg) < v(Ls)),
        ("E: padb < cps (strictly smallest)", e(Padb) < e(Cps)),
        ("E: padb < eg (strictly smallest)", e(Padb) < e(Eg)),
        ("E: padb < ls (strictly smallest)", e(Padb) < e(Ls)),
        ("E: ls >= 0.9", e(Ls) >= 0.9),
        ("C: padb > cps (strictly largest)", c(Padb) > c(Cps)),
        ("C: padb > eg (strictly largest)", c(Padb) > c(Eg)),
        ("C: padb > ls (strictly largest)", c(Padb) > c(Ls)),
        ("C: ls < 0.05", c(Ls) < 0.05),
        ("P: padb < cps", p(Padb) < p(Cps)),
        ("P: cps < eg", p(Cps) < p(Eg)),
    ];
    let mut failed = Vec::new();
    for (name, ok) in &clauses {
        println!("  {} {}", if *ok { "pass:" } else { "FAIL:" }, name);
        if !ok {
            failed.push(*name);
        }
    }
    println!(
        "{} resilience orderings at desk scale ({}/{} clauses)",
        if failed.is_empty() { "PASS" } else { "FAIL" },
        clauses.len() - failed.len(),
        clauses.len()
    );
    assert!(failed.is_empty(), "failed clauses: {failed:?}");
}

/// Path metrics and components agree with an all-pairs brute-force oracle on
/// 200 random graphs with up to 50 nodes.
#[test]
fn metrics_match_brute_force_oracle() {
    let mut rng = rng_from_seed(0xACCE_0007);
    for case in 0..200 {
        let (n, edges) = support::random_edge_list(&mut rng, 50);
        let graph = support::build_graph(n, &edges);
        let oracle = support::oracle_metrics(n, &edges);
        let metrics = graph.path_metrics();
        assert!(
            (metrics.average_path_length - oracle.average_path_length).abs() < 1e-12,
            "case {case}: apl {} vs oracle {}",
            metrics.average_path_length,
            oracle.average_path_length
        );
        assert_eq!(metrics.diameter, oracle.diameter, "case {case}: diameter");
        assert_eq!(
            graph.components().sorted_sizes(),
            oracle.component_sizes,
            "case {case}: components"
        );
        assert_eq!(graph.isolated_count(), oracle.isolated, "case {case}: isolated");
    }
    println!("PASS metrics match the brute-force oracle on 200 random graphs");
}

/// Empirical mean key-graph degree of the pool scheme at n=10000,
/// pool=500000, ring=25 is within 3 sigma of the hypergeometric prediction
/// (n-1) * (1 - C(P-k,k)/C(P,k)), computed with log-gamma arithmetic.
#[test]
fn eg_key_graph_degree_matches_hypergeometric() {
    let (n, pool, ring) = (10_000usize, 500_000usize, 25usize);
    let ln_choose = |a: usize, b: usize| -> f64 {
        use statrs::function::gamma::ln_gamma;
        ln_gamma(a as f64 + 1.0) - ln_gamma(b as f64 + 1.0) - ln_gamma((a - b) as f64 + 1.0)
    };
    let miss = (ln_choose(pool - ring, ring) - ln_choose(pool, ring)).exp();
    // cross-check the log-gamma route against the plain product formula
    let miss_product: f64 = (0..ring)
        .map(|i| (pool - ring - i) as f64 / (pool - i) as f64)
        .product();
    assert!((miss - miss_product).abs() < 1e-9);

    let share = 1.0 - miss;
    let expected_degree = (n - 1) as f64 * share;
    // pair indicators are pairwise independent, so Var(m) = N q (1-q)
    let pairs = (n * (n - 1) / 2) as f64;
    let sigma = 2.0 / n as f64 * (pairs * share * (1.0 - share)).sqrt();

    let assignment = padb_net::generate_eg(n, pool, ring, DEFAULT_BASE_SEED).unwrap();
    let mean_degree =
        2.0 * assignment.key_graph.non_loop_edge_count() as f64 / n as f64;
    let deviation = (mean_degree - expected_degree).abs();
    println!(
        "{} eg degree vs hypergeometric: empirical {mean_degree:.4}, expected {expected_degree:.4}, |diff| {deviation:.4} <= 3 sigma {:.4}",
        if deviation <= 3.0 * sigma { "PASS" } else { "FAIL" },
        3.0 * sigma
    );
    assert!(deviation <= 3.0 * sigma);
}

/// Identical configuration and seeds produce byte-identical report files.
#[test]
fn reruns_are_byte_identical() {
    // table preset
    let seeds: Vec<u64> = (0..10).map(|i| derive_seed(7, 0, i)).collect();
    let (dir_a, dir_b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let a = run_preset_table1(&seeds, dir_a.path()).unwrap();
    let b = run_preset_table1(&seeds, dir_b.path()).unwrap();
    assert_eq!(
        std::fs::read(&a.per_seed_path).unwrap(),
        std::fs::read(&b.per_seed_path).unwrap()
    );
    assert_eq!(
        std::fs::read(&a.aggregate_path).unwrap(),
        std::fs::read(&b.aggregate_path).unwrap()
    );

    // resilience preset
    let cfg = ExperimentConfig {
        n: 300,
        trials: 3,
        fs_grid: vec![0.0, 0.3],
        schemes: vec![SchemeTag::Padb, SchemeTag::Cps, SchemeTag::Eg, SchemeTag::Ls],
        ls_k: 15,
        ..ExperimentConfig::default()
    };
    let (dir_a, dir_b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let ra = run_preset_resilience(&cfg, dir_a.path()).unwrap();
    let rb = run_preset_resilience(&cfg, dir_b.path()).unwrap();
    for (fa, fb) in ra.files.iter().zip(&rb.files) {
        assert_eq!(fa.file_name(), fb.file_name());
        assert_eq!(
            std::fs::read(fa).unwrap(),
            std::fs::read(fb).unwrap(),
            "file {:?} differs between reruns",
            fa.file_name()
        );
    }

    // graph dumps
    let params = padb_params(500, 0.4, 4, 20, 99);
    let (ga, _) = generate_padb(&params).unwrap();
    let (gb, _) = generate_padb(&params).unwrap();
    assert_eq!(ga.dump_string(), gb.dump_string());
    println!("PASS reruns are byte-identical across presets and dumps");
}
