//! Run configuration and its `key = value` file form with `[section]` headers.
//!
//! Comments are whole lines starting with `#`. Floats are written with Rust's shortest round-trip formatting, so
//! `parse(&emit(c)) == c` holds exactly.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?} (json or csv)")),
        }
    }
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub weights: Vec<u32>,
    pub sigmas: Vec<f64>,
    pub ts: Vec<f64>,
    pub ells: Vec<u64>,
    /// Mollifier length M.
    pub length: f64,
    /// Nominal exponent with M = k^θ; recorded only.
    pub theta: f64,
    pub c_max: u64,
    pub n_max: u64,
    pub voronoi_n_max: u64,
    pub p_max: u64,
    /// Largest q-expansion length an eigenform table may need.
    pub length_budget: u64,
    pub synthetic_configs: usize,
    pub threads: usize,
    pub seed: u64,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            weights: vec![12],
            sigmas: vec![0.2],
            ts: vec![1.0],
            ells: vec![1],
            length: 50.0,
            theta: 0.1,
            c_max: 50,
            n_max: 1000,
            voronoi_n_max: 2000,
            p_max: 10_000,
            length_budget: lfam_core::eigenforms::DEFAULT_LENGTH_BUDGET,
            synthetic_configs: 50,
            threads: 1,
            seed: 0,
            format: Format::Json,
            cache_dir: None,
        }
    }
}

/// A config problem, naming the offending key.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config key `{}`: {}", self.key, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        key: key.to_string(),
        message: message.into(),
    }
}

fn list<T: ToString>(v: &[T]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn parse_one<T: FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.trim()
        .parse()
        .map_err(|_| err(key, format!("cannot parse {v:?}")))
}

fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>, ConfigError> {
    v.split(',').map(|x| parse_one(key, x)).collect()
}

impl RunConfig {
    pub fn emit(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "[run]");
        let _ = writeln!(s, "weights = {}", list(&self.weights));
        let _ = writeln!(s, "threads = {}", self.threads);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "\n[grids]");
        let _ = writeln!(s, "sigma = {}", list(&self.sigmas));
        let _ = writeln!(s, "t = {}", list(&self.ts));
        let _ = writeln!(s, "ell = {}", list(&self.ells));
        let _ = writeln!(s, "\n[mollifier]");
        let _ = writeln!(s, "length = {}", self.length);
        let _ = writeln!(s, "theta = {}", self.theta);
        let _ = writeln!(s, "\n[budgets]");
        let _ = writeln!(s, "c_max = {}", self.c_max);
        let _ = writeln!(s, "n_max = {}", self.n_max);
        let _ = writeln!(s, "voronoi_n_max = {}", self.voronoi_n_max);
        let _ = writeln!(s, "p_max = {}", self.p_max);
        let _ = writeln!(s, "length_budget = {}", self.length_budget);
        let _ = writeln!(s, "synthetic_configs = {}", self.synthetic_configs);
        let _ = writeln!(s, "\n[output]");
        let _ = writeln!(s, "format = {}", self.format.as_str());
        if let Some(dir) = &self.cache_dir {
            let _ = writeln!(s, "cache_dir = {}", dir.display());
        }
        s
    }

    /// Parse a config file; keys not mentioned keep their defaults.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut c = RunConfig::default();
        let mut section = String::new();
        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(line, "expected `key = value`"))?;
            let key = key.trim();
            let value = value.trim();
            let full = format!("{section}.{key}");
            match full.as_str() {
                "run.weights" => c.weights = parse_list(&full, value)?,
                "run.threads" => c.threads = parse_one(&full, value)?,
                "run.seed" => c.seed = parse_one(&full, value)?,
                "grids.sigma" => c.sigmas = parse_list(&full, value)?,
                "grids.t" => c.ts = parse_list(&full, value)?,
                "grids.ell" => c.ells = parse_list(&full, value)?,
                "mollifier.length" => c.length = parse_one(&full, value)?,
                "mollifier.theta" => c.theta = parse_one(&full, value)?,
                "budgets.c_max" => c.c_max = parse_one(&full, value)?,
                "budgets.n_max" => c.n_max = parse_one(&full, value)?,
                "budgets.voronoi_n_max" => c.voronoi_n_max = parse_one(&full, value)?,
                "budgets.p_max" => c.p_max = parse_one(&full, value)?,
                "budgets.length_budget" => c.length_budget = parse_one(&full, value)?,
                "budgets.synthetic_configs" => c.synthetic_configs = parse_one(&full, value)?,
                "output.format" => c.format = value.parse().map_err(|m: String| err(&full, m))?,
                "output.cache_dir" => c.cache_dir = Some(PathBuf::from(value)),
                _ => return Err(err(&full, "unknown key")),
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.weights.is_empty() {
            return Err(err("run.weights", "grid is empty"));
        }
        if let Some(k) = self.weights.iter().find(|&&k| k < 12 || k % 2 == 1) {
            return Err(err(
                "run.weights",
                format!("weight {k} is not an even integer >= 12"),
            ));
        }
        for (key, empty) in [
            ("grids.sigma", self.sigmas.is_empty()),
            ("grids.t", self.ts.is_empty()),
            ("grids.ell", self.ells.is_empty()),
        ] {
            if empty {
                return Err(err(key, "grid is empty"));
            }
        }
        if self.sigmas.iter().chain(&self.ts).any(|v| !v.is_finite()) {
            return Err(err("grids", "values must be finite"));
        }
        if self.ells.contains(&0) {
            return Err(err("grids.ell", "ell must be positive"));
        }
        if !(self.length >= 1.0) || !self.length.is_finite() {
            return Err(err("mollifier.length", "must be a finite number >= 1"));
        }
        for (key, v) in [
            ("budgets.c_max", self.c_max),
            ("budgets.n_max", self.n_max),
            ("budgets.voronoi_n_max", self.voronoi_n_max),
            ("budgets.p_max", self.p_max),
            ("budgets.length_budget", self.length_budget),
            ("budgets.synthetic_configs", self.synthetic_configs as u64),
            ("run.threads", self.threads as u64),
        ] {
            if v == 0 {
                return Err(err(key, "must be positive"));
            }
        }
        if let Some(dir) = &self.cache_dir {
            let text = dir.to_string_lossy();
            if text.is_empty() || text.trim() != text || text.contains('\n') {
                return Err(err(
                    "output.cache_dir",
                    "must be non-empty, on one line, without surrounding spaces",
                ));
            }
        }
        if self.n_max < 2 {
            return Err(err("budgets.n_max", "must be at least 2"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::default();
        assert_eq!(RunConfig::parse(&c.emit()).unwrap(), c);
    }

    #[test]
    fn awkward_floats_round_trip() {
        let c = RunConfig {
            weights: vec![12, 24, 40],
            sigmas: vec![0.1, 1.0 / 3.0, 2.5e-7],
            ts: vec![-1.0, 0.7, 1e10],
            ells: vec![1, 2, 6],
            length: 1000.0 / 7.0,
            theta: 0.1 + 0.2,
            cache_dir: Some(PathBuf::from("/tmp/lfam cache")),
            format: Format::Csv,
            ..RunConfig::default()
        };
        assert_eq!(RunConfig::parse(&c.emit()).unwrap(), c);
    }

    #[test]
    fn errors_name_the_key() {
        let e = RunConfig::parse("[budgets]\nc_max = 0\n").unwrap_err();
        assert_eq!(e.key, "budgets.c_max");
        let e = RunConfig::parse("[grids]\nsigma = 0.1, x\n").unwrap_err();
        assert_eq!(e.key, "grids.sigma");
        let e = RunConfig::parse("[run]\ncolour = red\n").unwrap_err();
        assert_eq!(e.key, "run.colour");
        let e = RunConfig::parse("[run]\nweights = 10\n").unwrap_err();
        assert_eq!(e.key, "run.weights");
    }

    #[test]
    fn comments_and_blank_lines() {
        let c = RunConfig::parse("# header\n\n[run]\n  # two weights\nweights = 16, 20\n").unwrap();
        assert_eq!(c.weights, vec![16, 20]);
        let c = RunConfig::parse("[output]\ncache_dir = /tmp/a#b\n").unwrap();
        assert_eq!(c.cache_dir, Some(PathBuf::from("/tmp/a#b")));
    }
}
