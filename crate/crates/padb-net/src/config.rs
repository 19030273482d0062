//! Experiment configuration: defaults, a line-oriented `key = value` config
//! file format with `#` comments, and validation. Precedence is
//! defaults < config file < command-line flags.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::adversary::AplMode;
use crate::kpd::{smallest_prime_q, SchemeConfig, SchemeTag};

pub const DEFAULT_BASE_SEED: u64 = 42;
pub const DEFAULT_N: usize = 10_000;
pub const DEFAULT_TRIALS: usize = 20;
pub const DEFAULT_FS_GRID: [f64; 6] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5];
/// Pool size scales with the network: 50 keys of pool per node.
pub const EG_POOL_PER_NODE: usize = 50;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unknown key `{key}` (line {line})")]
    UnknownKey { key: String, line: usize },
    #[error("invalid value for `{key}` (line {line}): {msg}")]
    InvalidValue { key: String, line: usize, msg: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Fully resolved experiment parameters for the resilience preset.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub trials: usize,
    pub base_seed: u64,
    pub fs_grid: Vec<f64>,
    pub schemes: Vec<SchemeTag>,
    pub apl_mode: AplMode,
    /// Uniform-branch probability of the bounded growth model.
    pub p: f64,
    /// Edges per new vertex of the bounded growth model.
    pub k: usize,
    pub d_max: usize,
    pub cps_k: usize,
    /// Explicit pool size; default is [`EG_POOL_PER_NODE`] * n.
    pub eg_pool: Option<usize>,
    pub eg_ring: usize,
    pub ls_k: usize,
    /// Explicit design prime; default is the smallest prime q with q^2 >= n.
    pub ls_q: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            n: DEFAULT_N,
            trials: DEFAULT_TRIALS,
            base_seed: DEFAULT_BASE_SEED,
            fs_grid: DEFAULT_FS_GRID.to_vec(),
            schemes: SchemeTag::ALL.to_vec(),
            apl_mode: AplMode::Auto,
            p: 0.4,
            k: 4,
            d_max: 25,
            cps_k: 7,
            eg_pool: None,
            eg_ring: 25,
            ls_k: 25,
            ls_q: None,
        }
    }
}

impl ExperimentConfig {
    pub fn resolved_eg_pool(&self) -> usize {
        self.eg_pool.unwrap_or(EG_POOL_PER_NODE * self.n)
    }

    pub fn resolved_ls_q(&self) -> usize {
        self.ls_q.unwrap_or_else(|| smallest_prime_q(self.n))
    }

    pub fn scheme_config(&self, tag: SchemeTag) -> SchemeConfig {
        match tag {
            SchemeTag::Padb => SchemeConfig::Padb {
                n: self.n,
                p: self.p,
                k: self.k,
                d_max: self.d_max,
            },
            SchemeTag::Eg => SchemeConfig::Eg {
                n: self.n,
                pool_size: self.resolved_eg_pool(),
                ring_size: self.eg_ring,
            },
            SchemeTag::Cps => SchemeConfig::Cps { n: self.n, k: self.cps_k },
            SchemeTag::Ls => SchemeConfig::Ls {
                n: self.n,
                k: self.ls_k,
                q: self.resolved_ls_q(),
            },
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials == 0 {
            return Err(ConfigError::Invalid("trials must be at least 1".into()));
        }
        if self.fs_grid.is_empty() {
            return Err(ConfigError::Invalid("fs_grid must be nonempty".into()));
        }
        if self
            .fs_grid
            .iter()
            .any(|fs| !(0.0..=1.0).contains(fs) || fs.is_nan())
        {
            return Err(ConfigError::Invalid("fs_grid values must lie in [0, 1]".into()));
        }
        if self.fs_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ConfigError::Invalid("fs_grid must be strictly increasing".into()));
        }
        if self.schemes.is_empty() {
            return Err(ConfigError::Invalid("schemes must be nonempty".into()));
        }
        for tag in &self.schemes {
            self.scheme_config(*tag)
                .validate()
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        Ok(())
    }

    /// Parse a config file and overlay it on these values.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.apply_text(&text)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            if line.trim().is_empty() {
                continue;
            }
            let eq = line.find('=').ok_or_else(|| ConfigError::Parse {
                line: line_no,
                col: first_non_ws(line) + line.trim().len(),
                msg: "expected `key = value`".into(),
            })?;
            let key = line[..eq].trim();
            let value = line[eq + 1..].trim();
            if key.is_empty() {
                return Err(ConfigError::Parse {
                    line: line_no,
                    col: first_non_ws(line) + 1,
                    msg: "missing key before `=`".into(),
                });
            }
            if value.is_empty() {
                return Err(ConfigError::Parse {
                    line: line_no,
                    col: eq + 2,
                    msg: format!("missing value for `{key}`"),
                });
            }
            self.set(key, value, line_no)?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str, line: usize) -> Result<(), ConfigError> {
        let invalid = |msg: String| ConfigError::InvalidValue {
            key: key.to_string(),
            line,
            msg,
        };
        match key {
            "n" => self.n = parse_num(value).map_err(invalid)?,
            "trials" => self.trials = parse_num(value).map_err(invalid)?,
            "base_seed" => self.base_seed = parse_num(value).map_err(invalid)?,
            "fs_grid" => self.fs_grid = parse_fs_grid(value).map_err(invalid)?,
            "schemes" => self.schemes = parse_schemes(value).map_err(invalid)?,
            "apl_mode" => self.apl_mode = parse_apl_mode(value).map_err(invalid)?,
            "p" => self.p = parse_num(value).map_err(invalid)?,
            "k" => self.k = parse_num(value).map_err(invalid)?,
            "d_max" => self.d_max = parse_num(value).map_err(invalid)?,
            "cps_k" => self.cps_k = parse_num(value).map_err(invalid)?,
            "eg_pool" => self.eg_pool = Some(parse_num(value).map_err(invalid)?),
            "eg_ring" => self.eg_ring = parse_num(value).map_err(invalid)?,
            "ls_k" => self.ls_k = parse_num(value).map_err(invalid)?,
            "ls_q" => self.ls_q = Some(parse_num(value).map_err(invalid)?),
            _ => {
                return Err(ConfigError::UnknownKey {
                    key: key.to_string(),
                    line,
                })
            }
        }
        Ok(())
    }

    /// Key = value rendering of the fully resolved config, for provenance
    /// headers. Deterministic.
    pub fn describe(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n = {}", self.n);
        let _ = writeln!(out, "trials = {}", self.trials);
        let _ = writeln!(out, "base_seed = {}", self.base_seed);
        let grid: Vec<String> = self.fs_grid.iter().map(|fs| format!("{fs}")).collect();
        let _ = writeln!(out, "fs_grid = {}", grid.join(","));
        let schemes: Vec<&str> = self.schemes.iter().map(SchemeTag::as_str).collect();
        let _ = writeln!(out, "schemes = {}", schemes.join(","));
        let _ = writeln!(out, "apl_mode = {}", self.apl_mode.as_str());
        let _ = writeln!(out, "p = {}", self.p);
        let _ = writeln!(out, "k = {}", self.k);
        let _ = writeln!(out, "d_max = {}", self.d_max);
        let _ = writeln!(out, "cps_k = {}", self.cps_k);
        let _ = writeln!(out, "eg_pool = {}", self.resolved_eg_pool());
        let _ = writeln!(out, "eg_ring = {}", self.eg_ring);
        let _ = writeln!(out, "ls_k = {}", self.ls_k);
        let _ = write!(out, "ls_q = {}", self.resolved_ls_q());
        out
    }
}

fn first_non_ws(line: &str) -> usize {
    line.find(|c: char| !c.is_whitespace()).unwrap_or(0)
}

fn parse_num<T: std::str::FromStr>(value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| format!("`{value}`: {e}"))
}

pub fn parse_fs_grid(value: &str) -> Result<Vec<f64>, String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().map_err(|e| format!("`{s}`: {e}")))
        .collect::<Result<Vec<_>, _>>()
        .and_then(|grid| {
            if grid.is_empty() {
                Err("expected at least one fraction".into())
            } else {
                Ok(grid)
            }
        })
}

pub fn parse_schemes(value: &str) -> Result<Vec<SchemeTag>, String> {
    let tags = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<SchemeTag>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    if tags.is_empty() {
        return Err("expected at least one scheme".into());
    }
    Ok(tags)
}

pub fn parse_apl_mode(value: &str) -> Result<AplMode, String> {
    match value.to_ascii_lowercase().as_str() {
        "auto" => Ok(AplMode::Auto),
        "exact" => Ok(AplMode::Exact),
        "sampled" => Ok(AplMode::Sampled),
        other => Err(format!("`{other}` is not one of auto, exact, sampled")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_keeps_defaults() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_text("").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        cfg.apply_text("# only a comment\n\n").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
    }

    #[test]
    fn values_and_comments_parse() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_text("n = 2000\ntrials=10 # desk scale\nfs_grid = 0,0.1,0.3\nschemes = padb, ls\n")
            .unwrap();
        assert_eq!(cfg.n, 2000);
        assert_eq!(cfg.trials, 10);
        assert_eq!(cfg.fs_grid, vec![0.0, 0.1, 0.3]);
        assert_eq!(cfg.schemes, vec![SchemeTag::Padb, SchemeTag::Ls]);
    }

    #[test]
    fn unknown_key_reports_line() {
        let mut cfg = ExperimentConfig::default();
        let err = cfg.apply_text("n = 100\nbogus = 3\n").unwrap_err();
        match err {
            ConfigError::UnknownKey { key, line } => {
                assert_eq!(key, "bogus");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn missing_equals_reports_position() {
        let mut cfg = ExperimentConfig::default();
        let err = cfg.apply_text("trials 10\n").unwrap_err();
        match err {
            ConfigError::Parse { line, col, .. } => {
                assert_eq!(line, 1);
                assert!(col > 0);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn bad_value_names_key_and_line() {
        let mut cfg = ExperimentConfig::default();
        let err = cfg.apply_text("\ntrials = soon\n").unwrap_err();
        match err {
            ConfigError::InvalidValue { key, line, .. } => {
                assert_eq!(key, "trials");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn remaining_keys_parse() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_text(
            "base_seed = 7\napl_mode = exact\np = 0.5\nk = 5\nd_max = 30\ncps_k = 9\neg_pool = 777\neg_ring = 11\nls_k = 13\nls_q = 101\n",
        )
        .unwrap();
        assert_eq!(cfg.base_seed, 7);
        assert_eq!(cfg.apl_mode, AplMode::Exact);
        assert_eq!(cfg.p, 0.5);
        assert_eq!(cfg.k, 5);
        assert_eq!(cfg.d_max, 30);
        assert_eq!(cfg.cps_k, 9);
        assert_eq!(cfg.eg_pool, Some(777));
        assert_eq!(cfg.eg_ring, 11);
        assert_eq!(cfg.ls_k, 13);
        assert_eq!(cfg.ls_q, Some(101));
        assert!(parse_apl_mode("sampled").is_ok());
        assert!(parse_apl_mode("fast").is_err());
    }

    #[test]
    fn d_max_below_k_fails_validation() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply_text("d_max = 3\nk = 4\n").unwrap();
        let err = cfg.validate().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("d_max"), "message was: {msg}");
    }

    #[test]
    fn grid_must_increase() {
        let mut cfg = ExperimentConfig {
            fs_grid: vec![0.0, 0.3, 0.2],
            ..ExperimentConfig::default()
        };
        assert!(cfg.validate().is_err());
        cfg.fs_grid = vec![0.0, 1.5];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn derived_parameters_scale_with_n() {
        let mut cfg = ExperimentConfig::default();
        assert_eq!(cfg.resolved_eg_pool(), 500_000);
        assert_eq!(cfg.resolved_ls_q(), 101);
        cfg.n = 2000;
        assert_eq!(cfg.resolved_eg_pool(), 100_000);
        assert_eq!(cfg.resolved_ls_q(), 47);
        cfg.eg_pool = Some(12_345);
        assert_eq!(cfg.resolved_eg_pool(), 12_345);
    }

    #[test]
    fn default_config_is_valid() {
        ExperimentConfig::default().validate().unwrap();
    }
}
