//! Full-data vs core-set runs and the fair vs unconstrained comparison.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::dataset::{ColoredDataset, Quota, Selection};
use crate::error::{Error, Result};
use crate::fdm_nn::SumNnConfig;
use crate::metric::Measure;
use crate::pipeline::composable::{color_abiding_coreset, composable_coreset, split_round_robin};
use crate::pipeline::config::ExperimentConfig;
use crate::pipeline::ingest::{load_dataset, Format};
use crate::pipeline::synth::gaussian_mixture;
use crate::solvers::{solve_dm, solve_fdm, SolverConfig};

/// What to run on an already loaded dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub measures: Vec<Measure>,
    pub solver: SolverConfig,
    pub use_coresets: bool,
    pub partitions: usize,
    pub compare_dm: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            measures: Measure::ALL.to_vec(),
            solver: SolverConfig::default(),
            use_coresets: true,
            partitions: 1,
            compare_dm: false,
        }
    }
}

/// One line of the main report. Timing fields are wall-clock milliseconds
/// around the solver calls only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub measure: String,
    pub quota: String,
    pub n: usize,
    pub m: usize,
    pub full_value: f64,
    pub coreset_value: Option<f64>,
    /// `(full − coreset)/full · 100`; negative when the core-set run did better.
    pub loss_pct: Option<f64>,
    pub full_ms: Option<f64>,
    pub coreset_ms: Option<f64>,
    pub speedup: Option<f64>,
    pub coreset_size: Option<usize>,
    #[serde(skip)]
    pub coreset_build_ms: Option<f64>,
    #[serde(skip)]
    pub full_histogram: Vec<usize>,
}

/// Unconstrained vs fair selection of the same total size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmRow {
    pub measure: String,
    pub k: usize,
    pub dm_value: f64,
    pub fdm_value: f64,
    /// `(dm − fdm)/dm · 100`.
    pub loss_pct: Option<f64>,
    /// Points per color in the unconstrained selection.
    pub dm_histogram: String,
    pub quota: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    pub dm: Vec<DmRow>,
}

fn ms(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn relative_loss(base: f64, other: f64) -> Option<f64> {
    (base != 0.0).then(|| (base - other) / base * 100.0)
}

fn histogram(counts: &[usize]) -> String {
    Quota::new(counts.to_vec()).to_string()
}

/// Runs every requested measure on `dataset`. The quota is checked before any solve.
pub fn run_on_dataset(dataset: &ColoredDataset, quota: &Quota, opts: &RunOptions) -> Result<Report> {
    dataset.check_quota(quota)?;
    if opts.partitions == 0 {
        return Err(Error::input("partitions must be at least 1"));
    }
    let mut report = Report::default();
    for &measure in &opts.measures {
        let start = Instant::now();
        let full = solve_fdm(dataset, quota, measure, &opts.solver)?;
        let full_ms = ms(start);
        let full_value = dataset.diversity(&full, measure)?;

        let mut row = ReportRow {
            measure: measure.to_string(),
            quota: quota.to_string(),
            n: dataset.len(),
            m: dataset.num_colors(),
            full_value,
            coreset_value: None,
            loss_pct: None,
            full_ms: Some(full_ms),
            coreset_ms: None,
            speedup: None,
            coreset_size: None,
            coreset_build_ms: None,
            full_histogram: full.per_color_counts().to_vec(),
        };

        if opts.use_coresets {
            let start = Instant::now();
            let union = if opts.partitions > 1 {
                composable_coreset(&split_round_robin(dataset, opts.partitions), quota, measure)?
            } else {
                color_abiding_coreset(dataset, quota, measure)?
            };
            row.coreset_build_ms = Some(ms(start));

            let start = Instant::now();
            let sel = solve_fdm(&union, quota, measure, &opts.solver)?;
            let core_ms = ms(start);
            let value = union.diversity(&sel, measure)?;
            row.coreset_value = Some(value);
            row.loss_pct = relative_loss(full_value, value);
            row.coreset_ms = Some(core_ms);
            row.speedup = (core_ms > 0.0).then(|| full_ms / core_ms);
            row.coreset_size = Some(union.len());
        }
        report.rows.push(row);

        if opts.compare_dm {
            report.dm.push(compare_dm(dataset, quota, measure, &full, full_value, &opts.solver)?);
        }
    }
    Ok(report)
}

fn compare_dm(
    dataset: &ColoredDataset,
    quota: &Quota,
    measure: Measure,
    fair: &Selection,
    fair_value: f64,
    solver: &SolverConfig,
) -> Result<DmRow> {
    let k = fair.len();
    let dm = solve_dm(dataset, k, measure, solver)?;
    let dm_value = dataset.diversity(&dm, measure)?;
    Ok(DmRow {
        measure: measure.to_string(),
        k,
        dm_value,
        fdm_value: fair_value,
        loss_pct: relative_loss(dm_value, fair_value),
        dm_histogram: histogram(dm.per_color_counts()),
        quota: quota.to_string(),
    })
}

/// Loads or generates the data named by `cfg` and runs it.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    cfg.validate()?;
    let dataset = match &cfg.dataset {
        Some(path) => {
            let format = cfg.format.unwrap_or_else(|| Format::from_path(path));
            load_dataset(path, format, cfg.colors, cfg.metric)?
        }
        None => {
            let mut spec = cfg.synthetic.clone();
            spec.seed = cfg.seed;
            if let Some(m) = cfg.colors {
                spec.colors = m;
            }
            gaussian_mixture(&spec, cfg.metric)?
        }
    };
    let quota = cfg.quota.resolve(dataset.num_colors())?;
    let opts = RunOptions {
        measures: cfg.measures.clone(),
        solver: SolverConfig {
            eps: cfg.eps,
            sum_nn: SumNnConfig::with_approach(cfg.approach),
        },
        use_coresets: cfg.use_coresets,
        partitions: cfg.partitions,
        compare_dm: cfg.compare_dm,
    };
    run_on_dataset(&dataset, &quota, &opts)
}

fn csv_err(e: csv::Error) -> Error {
    Error::input(format!("csv: {e}"))
}

impl Report {
    /// Main CSV. Without `timings` the wall-clock columns (and the speed-up
    /// derived from them) are left empty so identical runs give identical bytes.
    pub fn write_csv<W: Write>(&self, out: W, timings: bool) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        if self.rows.is_empty() {
            w.write_record(HEADER).map_err(csv_err)?;
        }
        for row in &self.rows {
            let mut row = row.clone();
            if !timings {
                row.full_ms = None;
                row.coreset_ms = None;
                row.speedup = None;
            }
            w.serialize(row).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::input(e.to_string()))
    }

    pub fn write_dm_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.dm {
            w.serialize(row).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::input(e.to_string()))
    }

    /// Reads a main CSV written by [`Report::write_csv`].
    pub fn read_csv<R: Read>(input: R) -> Result<Report> {
        let mut r = csv::Reader::from_reader(input);
        let rows = r.deserialize().collect::<std::result::Result<Vec<ReportRow>, _>>().map_err(csv_err)?;
        Ok(Report { rows, dm: Vec::new() })
    }

    /// Fixed-width table for terminals.
    pub fn render_table(&self) -> String {
        let opt = |v: Option<f64>, prec: usize| v.map_or_else(|| "-".to_string(), |x| format!("{x:.prec$}"));
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<13} {:<14} {:>7} {:>3} {:>14} {:>14} {:>9} {:>10} {:>10} {:>9} {:>8}",
            "measure", "quota", "n", "m", "full", "coreset", "loss %", "full ms", "core ms", "speedup", "size"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:<13} {:<14} {:>7} {:>3} {:>14.4} {:>14} {:>9} {:>10} {:>10} {:>9} {:>8}",
                r.measure,
                r.quota,
                r.n,
                r.m,
                r.full_value,
                opt(r.coreset_value, 4),
                opt(r.loss_pct, 3),
                opt(r.full_ms, 1),
                opt(r.coreset_ms, 1),
                opt(r.speedup, 1),
                r.coreset_size.map_or_else(|| "-".to_string(), |x| x.to_string()),
            );
        }
        if !self.dm.is_empty() {
            let _ = writeln!(s);
            let _ = writeln!(
                s,
                "{:<13} {:>4} {:>14} {:>14} {:>9}  {:<14} {:<14}",
                "measure", "k", "dm", "fdm", "loss %", "dm per color", "quota"
            );
            for r in &self.dm {
                let _ = writeln!(
                    s,
                    "{:<13} {:>4} {:>14.4} {:>14.4} {:>9}  {:<14} {:<14}",
                    r.measure,
                    r.k,
                    r.dm_value,
                    r.fdm_value,
                    opt(r.loss_pct, 3),
                    r.dm_histogram,
                    r.quota
                );
            }
        }
        s
    }
}

const HEADER: [&str; 11] = [
    "measure",
    "quota",
    "n",
    "m",
    "full_value",
    "coreset_value",
    "loss_pct",
    "full_ms",
    "coreset_ms",
    "speedup",
    "coreset_size",
];
