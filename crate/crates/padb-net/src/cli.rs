//! Command-line interface.
//!
//! Exit codes: 0 on success, 2 on configuration errors (including flag and
//! config-file problems), 1 on runtime errors. `PADB_NET_THREADS` caps the
//! worker pool used for independent Monte-Carlo cells.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{self, ExperimentConfig, DEFAULT_BASE_SEED};
use crate::generators::{degree_histogram, generate_pa, generate_padb, GenParams};
use crate::graph::{APL_EXACT_MAX_NODES, APL_SAMPLE_SOURCES};
use crate::presets::{run_preset_resilience, run_preset_table1, RunError};
use crate::seeds::{derive_seed, rng_from_seed, sub_seed, ATTACK_STREAM};

pub const THREADS_ENV_VAR: &str = "PADB_NET_THREADS";

#[derive(Debug, Parser)]
#[command(name = "padb-net", version, about = "Degree-bounded growth graphs and key predistribution resilience experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reproduce the reference table: mean average path length and modal
    /// diameter of both growth models (n=1000, p=0.4, k=4, d_max in
    /// {15,20,25,30}) over many seeds, with per-seed and aggregate CSVs.
    Table1 {
        /// Number of seeds to average over (at least 10)
        #[arg(long, default_value_t = 30)]
        seeds: usize,
        /// Base seed the per-run seeds are derived from
        #[arg(long, default_value_t = DEFAULT_BASE_SEED)]
        base_seed: u64,
        /// Output directory for the report files
        #[arg(long, default_value = "out/table1")]
        out: PathBuf,
    },
    /// Compare schemes under random node compromise over an fs grid and
    /// write raw/aggregate CSVs plus V/E/C/P plot data.
    Resilience {
        /// Network size (nodes per scheme instance)
        #[arg(long)]
        n: Option<usize>,
        /// Monte-Carlo trials per grid point
        #[arg(long)]
        trials: Option<usize>,
        /// Comma-separated compromised fractions, e.g. 0,0.1,0.3
        #[arg(long)]
        fs: Option<String>,
        /// Comma-separated scheme list out of padb,eg,cps,ls
        #[arg(long)]
        schemes: Option<String>,
        /// Config file with key = value lines (flags override it)
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory for the report files
        #[arg(long, default_value = "out/resilience")]
        out: PathBuf,
        /// Base seed for the trial seed derivation
        #[arg(long)]
        base_seed: Option<u64>,
        /// Path-length evaluation: auto, exact or sampled
        #[arg(long)]
        apl_mode: Option<String>,
        /// Edges per new vertex for the padb scheme
        #[arg(long)]
        padb_k: Option<usize>,
    },
    /// Generate a single growth-model graph, print its metrics and
    /// optionally dump the edge list plus a JSON metadata sidecar.
    Generate {
        /// Growth model
        #[arg(long, value_enum)]
        model: GenModel,
        /// Node count
        #[arg(long)]
        n: usize,
        /// Uniform-branch probability in [0, 1]
        #[arg(long)]
        p: f64,
        /// Edges attached to every new vertex
        #[arg(long)]
        k: usize,
        /// Degree bound (padb only)
        #[arg(long)]
        dmax: Option<usize>,
        /// RNG seed
        #[arg(long)]
        seed: u64,
        /// Write the edge list here (first line `n m`, then `u v` lines)
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenModel {
    Pa,
    Padb,
}

/// Apply `PADB_NET_THREADS` to the global worker pool. Call once at startup.
pub fn init_threads_from_env() -> Result<(), RunError> {
    let Ok(raw) = std::env::var(THREADS_ENV_VAR) else {
        return Ok(());
    };
    let threads: usize = raw
        .parse()
        .ok()
        .filter(|&t| t >= 1)
        .ok_or_else(|| RunError::Config(format!("{THREADS_ENV_VAR} must be a positive integer (got `{raw}`)")))?;
    // ignore "already initialized" so tests can call this repeatedly
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

pub fn run(cli: Cli) -> Result<(), RunError> {
    match cli.command {
        Command::Table1 { seeds, base_seed, out } => {
            let seed_list: Vec<u64> = (0..seeds).map(|i| derive_seed(base_seed, 0, i as u64)).collect();
            let report = run_preset_table1(&seed_list, &out)?;
            for row in &report.rows {
                println!("{}", row.status_line());
            }
            println!(
                "table1: wrote {} and {}",
                report.per_seed_path.display(),
                report.aggregate_path.display()
            );
            Ok(())
        }
        Command::Resilience {
            n,
            trials,
            fs,
            schemes,
            config: config_path,
            out,
            base_seed,
            apl_mode,
            padb_k,
        } => {
            let mut cfg = ExperimentConfig::default();
            if let Some(path) = config_path {
                cfg.apply_file(&path)?;
            }
            if let Some(n) = n {
                cfg.n = n;
            }
            if let Some(trials) = trials {
                cfg.trials = trials;
            }
            if let Some(fs) = fs {
                cfg.fs_grid = config::parse_fs_grid(&fs)
                    .map_err(|msg| RunError::Config(format!("invalid --fs: {msg}")))?;
            }
            if let Some(schemes) = schemes {
                cfg.schemes = config::parse_schemes(&schemes)
                    .map_err(|msg| RunError::Config(format!("invalid --schemes: {msg}")))?;
            }
            if let Some(base_seed) = base_seed {
                cfg.base_seed = base_seed;
            }
            if let Some(apl_mode) = apl_mode {
                cfg.apl_mode = config::parse_apl_mode(&apl_mode)
                    .map_err(|msg| RunError::Config(format!("invalid --apl-mode: {msg}")))?;
            }
            if let Some(padb_k) = padb_k {
                cfg.k = padb_k;
            }
            let report = run_preset_resilience(&cfg, &out)?;
            for file in &report.files {
                println!("resilience: wrote {}", file.display());
            }
            Ok(())
        }
        Command::Generate {
            model,
            n,
            p,
            k,
            dmax,
            seed,
            dump,
        } => {
            let params = GenParams {
                n,
                p,
                k,
                d_max: dmax,
                seed,
            };
            let (graph, meta) = match model {
                GenModel::Pa => generate_pa(&params),
                GenModel::Padb => generate_padb(&params),
            }
            .map_err(|e| RunError::Config(e.to_string()))?;

            // write files before any stdout chatter so a closed pipe
            // cannot truncate the dump
            let mut dump_note = None;
            if let Some(path) = dump {
                let mut buf = Vec::new();
                graph.write_dump(&mut buf).expect("write to Vec cannot fail");
                std::fs::write(&path, &buf).map_err(|e| RunError::Io {
                    path: path.display().to_string(),
                    source: e,
                })?;
                let meta_path = PathBuf::from(format!("{}.meta.json", path.display()));
                let meta_json = serde_json::to_string_pretty(&meta).expect("metadata serializes");
                std::fs::write(&meta_path, meta_json).map_err(|e| RunError::Io {
                    path: meta_path.display().to_string(),
                    source: e,
                })?;
                dump_note = Some((path, meta_path));
            }

            println!("model: {}", if meta.params.d_max.is_some() { "padb" } else { "pa" });
            println!("nodes: {}", graph.node_count());
            println!("edges: {}", graph.edge_count());
            println!("max_degree: {}", graph.max_degree());
            println!("degenerate: {}", meta.degenerate);
            let histogram = degree_histogram(&graph);
            if let Some(alpha) = histogram.fitted_alpha() {
                println!("fitted_alpha: {alpha:.3}");
            }
            if graph.node_count() <= APL_EXACT_MAX_NODES {
                let metrics = graph.path_metrics();
                println!("apl: {:.6} (exact)", metrics.average_path_length);
                println!("diameter: {}", metrics.diameter);
            } else {
                let mut rng = rng_from_seed(sub_seed(seed, ATTACK_STREAM));
                let apl = graph.average_path_length_sampled(APL_SAMPLE_SOURCES, &mut rng);
                println!("apl: {apl:.6} (sampled, {APL_SAMPLE_SOURCES} sources)");
            }
            let components = graph.components();
            println!("components: {}", components.count());
            println!("isolated: {}", graph.isolated_count());
            if let Some((path, meta_path)) = dump_note {
                println!("dump: {}", path.display());
                println!("meta: {}", meta_path.display());
            }
            Ok(())
        }
    }
}
