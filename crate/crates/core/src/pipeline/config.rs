//! Experiment configuration, read from a flat TOML document.
//!
//! ```toml
//! dataset = "reddit.jsonl"   # omit to generate synthetic data
//! colors = 4                 # needed for timestamped input
//! metric = "angular"
//! quota = "uniform:2"        # or "ramp:2", "2,4,6,8", [2, 4, 6, 8]
//! measures = ["sum_pairwise", "sum_nn"]
//! approach = "exhaustive"
//! use_coresets = true
//! seed = 7
//! out = "report.csv"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::dataset::Quota;
use crate::error::{Error, Result};
use crate::fdm_nn::BallApproach;
use crate::metric::{Measure, Metric};
use crate::pipeline::ingest::Format;
use crate::pipeline::synth::SyntheticSpec;
use crate::solvers::DEFAULT_EPS;

/// A quota, possibly given as a shorthand that depends on the number of colors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuotaSpec {
    Explicit(Quota),
    /// The same count for every color.
    Uniform(usize),
    /// `step, 2·step, ..., m·step`.
    Ramp(usize),
}

impl QuotaSpec {
    pub fn resolve(&self, m: usize) -> Result<Quota> {
        let q = match self {
            QuotaSpec::Explicit(q) => q.clone(),
            QuotaSpec::Uniform(c) => Quota::uniform(m, *c),
            QuotaSpec::Ramp(s) => Quota::ramp(m, *s),
        };
        if q.len() != m {
            return Err(Error::input(format!("quota {q} has {} entries for {m} colors", q.len())));
        }
        Ok(q)
    }
}

impl FromStr for QuotaSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::input(format!("bad quota shorthand `{s}`")))
        };
        if let Some(rest) = s.strip_prefix("uniform:") {
            return Ok(QuotaSpec::Uniform(num(rest)?));
        }
        if let Some(rest) = s.strip_prefix("ramp:") {
            return Ok(QuotaSpec::Ramp(num(rest)?));
        }
        Ok(QuotaSpec::Explicit(s.parse()?))
    }
}

impl fmt::Display for QuotaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotaSpec::Explicit(q) => write!(f, "{q}"),
            QuotaSpec::Uniform(c) => write!(f, "uniform:{c}"),
            QuotaSpec::Ramp(s) => write!(f, "ramp:{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Input file; `None` means synthetic data from `synthetic`.
    pub dataset: Option<PathBuf>,
    pub format: Option<Format>,
    /// Number of colors. Required for timestamped input; inferred from explicit colors otherwise.
    pub colors: Option<usize>,
    pub metric: Metric,
    pub quota: QuotaSpec,
    pub measures: Vec<Measure>,
    pub approach: BallApproach,
    pub use_coresets: bool,
    /// Split the data round-robin into this many partitions before building core-sets.
    pub partitions: usize,
    /// Also solve the unconstrained problem and compare.
    pub compare_dm: bool,
    pub eps: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Write wall-clock columns to the CSV (they differ between runs).
    pub timings: bool,
    pub synthetic: SyntheticSpec,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dataset: None,
            format: None,
            colors: None,
            metric: Metric::Euclidean,
            quota: QuotaSpec::Uniform(2),
            measures: Measure::ALL.to_vec(),
            approach: BallApproach::Exhaustive,
            use_coresets: false,
            partitions: 1,
            compare_dm: false,
            eps: DEFAULT_EPS,
            seed: 0,
            out: None,
            timings: false,
            synthetic: SyntheticSpec::default(),
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum QuotaValue {
    Text(String),
    List(Vec<usize>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Names {
    One(String),
    Many(Vec<String>),
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    dataset: Option<PathBuf>,
    format: Option<String>,
    colors: Option<usize>,
    metric: Option<String>,
    quota: Option<QuotaValue>,
    measures: Option<Names>,
    approach: Option<String>,
    use_coresets: Option<bool>,
    partitions: Option<usize>,
    compare_dm: Option<bool>,
    eps: Option<f64>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    timings: Option<bool>,
    n: Option<usize>,
    dim: Option<usize>,
    clusters: Option<usize>,
    spread: Option<f64>,
    extent: Option<f64>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::input(format!("config: {e}")))?;
        let mut cfg = ExperimentConfig {
            dataset: raw.dataset,
            format: raw.format.as_deref().map(str::parse).transpose()?,
            colors: raw.colors,
            out: raw.out,
            ..ExperimentConfig::default()
        };
        if let Some(m) = raw.metric {
            cfg.metric = m.parse()?;
        }
        match raw.quota {
            Some(QuotaValue::Text(s)) => cfg.quota = s.parse()?,
            Some(QuotaValue::List(v)) => cfg.quota = QuotaSpec::Explicit(Quota::new(v)),
            None => {}
        }
        match raw.measures {
            Some(Names::One(s)) => cfg.measures = parse_measures(&s)?,
            Some(Names::Many(v)) => {
                cfg.measures = v.iter().map(|s| s.parse()).collect::<Result<_>>()?;
            }
            None => {}
        }
        if let Some(a) = raw.approach {
            cfg.approach = a.parse()?;
        }
        cfg.use_coresets = raw.use_coresets.unwrap_or(cfg.use_coresets);
        cfg.partitions = raw.partitions.unwrap_or(cfg.partitions);
        cfg.compare_dm = raw.compare_dm.unwrap_or(cfg.compare_dm);
        cfg.eps = raw.eps.unwrap_or(cfg.eps);
        cfg.seed = raw.seed.unwrap_or(cfg.seed);
        cfg.timings = raw.timings.unwrap_or(cfg.timings);

        let s = &mut cfg.synthetic;
        s.n = raw.n.unwrap_or(s.n);
        s.dim = raw.dim.unwrap_or(s.dim);
        s.clusters = raw.clusters.unwrap_or(s.clusters);
        s.spread = raw.spread.unwrap_or(s.spread);
        s.extent = raw.extent.unwrap_or(s.extent);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.measures.is_empty() {
            return Err(Error::input("no measures requested"));
        }
        if self.partitions == 0 {
            return Err(Error::input("partitions must be at least 1"));
        }
        if self.eps.is_nan() || self.eps <= 0.0 {
            return Err(Error::input("eps must be positive"));
        }
        Ok(())
    }
}

/// Comma-separated measure names; `all` selects every measure.
pub fn parse_measures(s: &str) -> Result<Vec<Measure>> {
    if s.trim().eq_ignore_ascii_case("all") {
        return Ok(Measure::ALL.to_vec());
    }
    s.split(',').map(|t| t.trim().parse()).collect()
}
