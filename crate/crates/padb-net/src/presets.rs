//! Experiment presets and their report files.
//!
//! Every emitted file starts with `#` provenance comments (tool version,
//! resolved configuration, seeds) and uses LF line endings with 6 fractional
//! digits for real values, so reruns with identical configuration are
//! byte-identical.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::adversary::{resilience_curve, AplMode, ResilienceRun};
use crate::config::{ConfigError, ExperimentConfig};
use crate::generators::{generate_pa, generate_padb, GenParams};
use crate::graph::APL_EXACT_MAX_NODES;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Runtime(String),
}

impl RunError {
    /// Process exit code: 2 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            _ => 1,
        }
    }

    fn io(path: &Path, source: std::io::Error) -> Self {
        RunError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e.to_string())
    }
}

impl From<crate::adversary::AdversaryError> for RunError {
    fn from(e: crate::adversary::AdversaryError) -> Self {
        RunError::Runtime(e.to_string())
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), RunError> {
    std::fs::write(path, contents).map_err(|e| RunError::io(path, e))
}

fn provenance(preset: &str, details: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# padb-net {TOOL_VERSION}");
    let _ = writeln!(s, "# preset: {preset}");
    for line in details.lines() {
        let _ = writeln!(s, "# {line}");
    }
    let _ = writeln!(
        s,
        "# seed derivation: cell_seed = base_seed XOR splitmix64(splitmix64(lane) + index); \
         sub-streams: scheme = 1, attack = 2"
    );
    s
}

fn fmt6(x: f64) -> String {
    format!("{x:.6}")
}

// ---------------------------------------------------------------------------
// table1 preset: path length and diameter of the two growth models
// ---------------------------------------------------------------------------

pub const TABLE1_N: usize = 1000;
pub const TABLE1_P: f64 = 0.4;
pub const TABLE1_K: usize = 4;
pub const TABLE1_D_MAX: [usize; 4] = [15, 20, 25, 30];
pub const TABLE1_MIN_SEEDS: usize = 10;
/// Reference values: (label, d_max, mean APL, modal diameter).
pub const TABLE1_TARGETS: [(&str, Option<usize>, f64, usize); 5] = [
    ("pa", None, 3.36, 5),
    ("padb", Some(15), 3.70, 7),
    ("padb", Some(20), 3.61, 6),
    ("padb", Some(25), 3.55, 6),
    ("padb", Some(30), 3.46, 6),
];
pub const TABLE1_APL_TOLERANCE: f64 = 0.20;
pub const TABLE1_DIAMETER_TOLERANCE: usize = 1;

#[derive(Debug, Clone)]
pub struct Table1Row {
    pub model: &'static str,
    pub d_max: Option<usize>,
    pub apl_mean: f64,
    pub apl_sd: f64,
    pub diameter_mode: usize,
    pub diameter_min: usize,
    pub diameter_max: usize,
    pub apl_target: f64,
    pub diameter_target: usize,
    pub pass: bool,
}

impl Table1Row {
    pub fn status_line(&self) -> String {
        let label = match self.d_max {
            Some(d) => format!("{} d_max={}", self.model, d),
            None => self.model.to_string(),
        };
        format!(
            "{}: apl {:.3} (target {:.2} +-{}), diameter mode {} (target {} +-{}) -> {}",
            label,
            self.apl_mean,
            self.apl_target,
            TABLE1_APL_TOLERANCE,
            self.diameter_mode,
            self.diameter_target,
            TABLE1_DIAMETER_TOLERANCE,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Debug, Clone)]
pub struct Table1Report {
    pub rows: Vec<Table1Row>,
    pub per_seed_path: PathBuf,
    pub aggregate_path: PathBuf,
}

impl Table1Report {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

fn diameter_mode(values: &[usize]) -> usize {
    let mut counts = std::collections::BTreeMap::new();
    for &v in values {
        *counts.entry(v).or_insert(0usize) += 1;
    }
    // most frequent value; ties resolved toward the smaller diameter
    counts
        .into_iter()
        .max_by_key(|&(v, c)| (c, std::cmp::Reverse(v)))
        .map(|(v, _)| v)
        .unwrap_or(0)
}

/// Generate both growth models over the given seeds and report mean average
/// path length and modal diameter per model, checked against the reference
/// tolerances.
pub fn run_preset_table1(seeds: &[u64], out_dir: &Path) -> Result<Table1Report, RunError> {
    if seeds.len() < TABLE1_MIN_SEEDS {
        return Err(RunError::Config(format!(
            "table1 needs at least {TABLE1_MIN_SEEDS} seeds (got {})",
            seeds.len()
        )));
    }
    std::fs::create_dir_all(out_dir).map_err(|e| RunError::io(out_dir, e))?;

    let cells: Vec<(usize, usize)> = (0..TABLE1_TARGETS.len())
        .flat_map(|m| (0..seeds.len()).map(move |s| (m, s)))
        .collect();
    let per_seed: Vec<(usize, u64, f64, usize)> = cells
        .into_par_iter()
        .map(|(m, si)| {
            let (_, d_max, _, _) = TABLE1_TARGETS[m];
            let params = GenParams {
                n: TABLE1_N,
                p: TABLE1_P,
                k: TABLE1_K,
                d_max,
                seed: seeds[si],
            };
            let (graph, _) = match d_max {
                Some(_) => generate_padb(&params),
                None => generate_pa(&params),
            }
            .expect("table1 parameters are valid");
            let metrics = graph.path_metrics();
            (m, seeds[si], metrics.average_path_length, metrics.diameter)
        })
        .collect();

    let mut rows = Vec::new();
    for (m, &(model, d_max, apl_target, diameter_target)) in TABLE1_TARGETS.iter().enumerate() {
        let apls: Vec<f64> = per_seed
            .iter()
            .filter(|c| c.0 == m)
            .map(|c| c.2)
            .collect();
        let diameters: Vec<usize> = per_seed
            .iter()
            .filter(|c| c.0 == m)
            .map(|c| c.3)
            .collect();
        let mean = apls.iter().sum::<f64>() / apls.len() as f64;
        let sd = if apls.len() < 2 {
            0.0
        } else {
            (apls.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (apls.len() - 1) as f64)
                .sqrt()
        };
        let mode = diameter_mode(&diameters);
        let pass = (mean - apl_target).abs() <= TABLE1_APL_TOLERANCE
            && mode.abs_diff(diameter_target) <= TABLE1_DIAMETER_TOLERANCE;
        rows.push(Table1Row {
            model,
            d_max,
            apl_mean: mean,
            apl_sd: sd,
            diameter_mode: mode,
            diameter_min: diameters.iter().copied().min().unwrap_or(0),
            diameter_max: diameters.iter().copied().max().unwrap_or(0),
            apl_target,
            diameter_target,
            pass,
        });
    }

    let seed_list: Vec<String> = seeds.iter().map(u64::to_string).collect();
    let details = format!(
        "n = {TABLE1_N}\np = {TABLE1_P}\nk = {TABLE1_K}\nd_max values = 15,20,25,30 (pa unbounded)\nseeds = {}",
        seed_list.join(",")
    );

    let mut per_seed_csv = provenance("table1", &details);
    per_seed_csv.push_str("model,d_max,seed,apl,diameter\n");
    for &(m, seed, apl, diameter) in &per_seed {
        let (model, d_max, _, _) = TABLE1_TARGETS[m];
        let d = d_max.map(|d| d.to_string()).unwrap_or_default();
        let _ = writeln!(per_seed_csv, "{model},{d},{seed},{},{diameter}", fmt6(apl));
    }

    let mut aggregate_csv = provenance("table1", &details);
    for row in &rows {
        let _ = writeln!(aggregate_csv, "# {}", row.status_line());
    }
    let headers: Vec<String> = rows
        .iter()
        .map(|r| match r.d_max {
            Some(d) => format!("{}_dmax{}", r.model, d),
            None => r.model.to_string(),
        })
        .collect();
    let _ = writeln!(aggregate_csv, "metric,{}", headers.join(","));
    let apl_means: Vec<String> = rows.iter().map(|r| fmt6(r.apl_mean)).collect();
    let _ = writeln!(aggregate_csv, "average_path_length_mean,{}", apl_means.join(","));
    let apl_sds: Vec<String> = rows.iter().map(|r| fmt6(r.apl_sd)).collect();
    let _ = writeln!(aggregate_csv, "average_path_length_sd,{}", apl_sds.join(","));
    let modes: Vec<String> = rows.iter().map(|r| r.diameter_mode.to_string()).collect();
    let _ = writeln!(aggregate_csv, "diameter_mode,{}", modes.join(","));
    let mins: Vec<String> = rows.iter().map(|r| r.diameter_min.to_string()).collect();
    let _ = writeln!(aggregate_csv, "diameter_min,{}", mins.join(","));
    let maxs: Vec<String> = rows.iter().map(|r| r.diameter_max.to_string()).collect();
    let _ = writeln!(aggregate_csv, "diameter_max,{}", maxs.join(","));

    let per_seed_path = out_dir.join("table1_per_seed.csv");
    let aggregate_path = out_dir.join("table1_aggregate.csv");
    write_file(&per_seed_path, &per_seed_csv)?;
    write_file(&aggregate_path, &aggregate_csv)?;
    Ok(Table1Report {
        rows,
        per_seed_path,
        aggregate_path,
    })
}

// ---------------------------------------------------------------------------
// resilience preset: scheme comparison under random node compromise
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct ResilienceReport {
    pub runs: Vec<ResilienceRun>,
    pub files: Vec<PathBuf>,
}

/// Run every configured scheme over the fs grid and write the raw CSV, the
/// aggregate CSV and one plot-data file per metric (`V.dat`, `E.dat`,
/// `C.dat`, `P.dat`: column one is fs, then one mean column per scheme).
pub fn run_preset_resilience(
    cfg: &ExperimentConfig,
    out_dir: &Path,
) -> Result<ResilienceReport, RunError> {
    cfg.validate()?;
    std::fs::create_dir_all(out_dir).map_err(|e| RunError::io(out_dir, e))?;

    let runs: Vec<ResilienceRun> = cfg
        .schemes
        .iter()
        .map(|tag| {
            resilience_curve(
                &cfg.scheme_config(*tag),
                &cfg.fs_grid,
                cfg.trials,
                cfg.base_seed,
                cfg.apl_mode,
            )
        })
        .collect::<Result<_, _>>()?;

    let apl_note = match cfg.apl_mode {
        AplMode::Auto => format!(
            "apl resolution = auto (exact up to {APL_EXACT_MAX_NODES} surviving nodes, else {} sampled sources)",
            crate::graph::APL_SAMPLE_SOURCES
        ),
        AplMode::Exact => "apl resolution = exact".to_string(),
        AplMode::Sampled => format!(
            "apl resolution = {} sampled sources",
            crate::graph::APL_SAMPLE_SOURCES
        ),
    };
    let details = format!(
        "{}\n{}\nlargest_component_only = false",
        cfg.describe(),
        apl_note
    );

    let mut files = Vec::new();

    let mut raw = provenance("resilience", &details);
    raw.push_str("scheme,fs,trial,seed,V,E,C,P\n");
    for run in &runs {
        for r in &run.raw {
            let _ = writeln!(
                raw,
                "{},{},{},{},{},{},{},{}",
                r.scheme,
                fmt6(r.fs),
                r.trial,
                r.seed,
                fmt6(r.outcome.isolated_fraction),
                fmt6(r.outcome.removed_edge_fraction),
                fmt6(r.outcome.largest_component_fraction),
                fmt6(r.outcome.average_path_length),
            );
        }
    }
    let raw_path = out_dir.join("raw.csv");
    write_file(&raw_path, &raw)?;
    files.push(raw_path);

    let mut aggregate = provenance("resilience", &details);
    aggregate.push_str("scheme,fs,V_mean,V_sd,E_mean,E_sd,C_mean,C_sd,P_mean,P_sd,trials\n");
    for run in &runs {
        for cell in &run.curve.cells {
            let _ = writeln!(
                aggregate,
                "{},{},{},{},{},{},{},{},{},{},{}",
                run.curve.scheme,
                fmt6(cell.fs),
                fmt6(cell.isolated.mean),
                fmt6(cell.isolated.sd),
                fmt6(cell.removed_edges.mean),
                fmt6(cell.removed_edges.sd),
                fmt6(cell.largest_component.mean),
                fmt6(cell.largest_component.sd),
                fmt6(cell.path_length.mean),
                fmt6(cell.path_length.sd),
                run.curve.trials,
            );
        }
    }
    let aggregate_path = out_dir.join("aggregate.csv");
    write_file(&aggregate_path, &aggregate)?;
    files.push(aggregate_path);

    type CellMean = fn(&crate::adversary::FsCell) -> f64;
    let metrics: [(&str, CellMean); 4] = [
        ("V", |c| c.isolated.mean),
        ("E", |c| c.removed_edges.mean),
        ("C", |c| c.largest_component.mean),
        ("P", |c| c.path_length.mean),
    ];
    for (name, extract) in metrics {
        let mut dat = provenance("resilience", &details);
        let scheme_names: Vec<&str> = runs.iter().map(|r| r.curve.scheme.as_str()).collect();
        let _ = writeln!(dat, "# fs {}", scheme_names.join(" "));
        for (i, _) in cfg.fs_grid.iter().enumerate() {
            let mut line = fmt6(runs[0].curve.cells[i].fs);
            for run in &runs {
                line.push(' ');
                line.push_str(&fmt6(extract(&run.curve.cells[i])));
            }
            let _ = writeln!(dat, "{line}");
        }
        let path = out_dir.join(format!("{name}.dat"));
        write_file(&path, &dat)?;
        files.push(path);
    }

    Ok(ResilienceReport { runs, files })
}
