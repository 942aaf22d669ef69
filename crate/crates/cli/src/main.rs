use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fairdiv::pipeline::composable::{composable_coreset, size_bound, split_round_robin};
use fairdiv::pipeline::config::{parse_measures, ExperimentConfig, QuotaSpec};
use fairdiv::pipeline::experiment::{run_experiment, Report};
use fairdiv::pipeline::ingest::{load_dataset, write_dataset, Format};
use fairdiv::pipeline::synth::{gaussian_mixture, SyntheticSpec};
use fairdiv::solvers::{brute_force_fdm, solve_dm, solve_fdm, SolverConfig};
use fairdiv::{BallApproach, ColoredDataset, Error, Measure, Metric, SumNnConfig};

#[derive(Parser)]
#[command(name = "fairdiv", version, about = "Fair diversity maximization over colored point sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded Gaussian-mixture dataset.
    Gen(GenArgs),
    /// Build the per-color core-set of a dataset.
    Coreset(CoresetArgs),
    /// Solve one fair (or unconstrained) instance and print the selection as JSON.
    Solve(SolveArgs),
    /// Run an experiment and write the CSV report.
    Experiment(ExperimentArgs),
    /// Render a report CSV as a table.
    Report(ReportArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Dataset file (JSONL or CSV).
    #[arg(long, short)]
    input: PathBuf,
    /// Input format; guessed from the extension when omitted.
    #[arg(long)]
    format: Option<Format>,
    /// Number of colors; required for timestamped input.
    #[arg(long)]
    colors: Option<usize>,
    #[arg(long, default_value = "euclidean")]
    metric: Metric,
}

impl InputArgs {
    fn load(&self) -> fairdiv::Result<ColoredDataset> {
        let format = self.format.unwrap_or_else(|| Format::from_path(&self.input));
        load_dataset(&self.input, format, self.colors, self.metric)
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 8)]
    dim: usize,
    #[arg(long, default_value_t = 4)]
    colors: usize,
    /// Mixture components per color.
    #[arg(long, default_value_t = 3)]
    clusters: usize,
    #[arg(long, default_value_t = 1.0)]
    spread: f64,
    #[arg(long, default_value_t = 10.0)]
    extent: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; `.csv` selects CSV, anything else JSONL.
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Args)]
struct CoresetArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Per-color quota: `2,2,2,2`, `uniform:2` or `ramp:2`.
    #[arg(long)]
    quota: QuotaSpec,
    #[arg(long)]
    measure: Measure,
    /// Build core-sets on this many round-robin partitions and take the union.
    #[arg(long, default_value_t = 1)]
    partitions: usize,
    #[arg(long, short)]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    quota: QuotaSpec,
    #[arg(long)]
    measure: Measure,
    #[arg(long, default_value = "exhaustive")]
    approach: BallApproach,
    /// Solve on the union of per-color core-sets instead of the full data.
    #[arg(long)]
    use_coresets: bool,
    /// Exact enumeration; refuses instances over the budget.
    #[arg(long, conflicts_with = "dm")]
    brute_force: bool,
    /// Ignore colors and pick `sum(quota)` points.
    #[arg(long)]
    dm: bool,
    #[arg(long, default_value_t = fairdiv::solvers::DEFAULT_EPS)]
    eps: f64,
    /// Write the JSON here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// TOML config; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    colors: Option<usize>,
    #[arg(long)]
    metric: Option<Metric>,
    /// Comma-separated measures or `all`.
    #[arg(long)]
    measure: Option<String>,
    #[arg(long)]
    quota: Option<QuotaSpec>,
    #[arg(long)]
    approach: Option<BallApproach>,
    #[arg(long)]
    use_coresets: bool,
    #[arg(long)]
    partitions: Option<usize>,
    /// Also compare against the unconstrained problem.
    #[arg(long)]
    compare_dm: bool,
    #[arg(long)]
    seed: Option<u64>,
    /// Synthetic data size when no input is given.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    dim: Option<usize>,
    /// Report CSV; the comparison goes next to it with a `.dm.csv` extension.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Include wall-clock columns in the CSV.
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct ReportArgs {
    /// Report CSV written by `experiment`.
    input: PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Coreset(a) => coreset(a),
        Command::Solve(a) => solve(a),
        Command::Experiment(a) => experiment(a),
        Command::Report(a) => report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_budget() { 3 } else { 2 })
        }
    }
}

fn create(path: &Path) -> fairdiv::Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io { path: path.to_path_buf(), source: e })
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> Error + '_ {
    move |e| Error::Io { path: path.to_path_buf(), source: e }
}

fn gen(a: GenArgs) -> fairdiv::Result<()> {
    let spec = SyntheticSpec {
        n: a.n,
        dim: a.dim,
        colors: a.colors,
        clusters: a.clusters,
        spread: a.spread,
        extent: a.extent,
        seed: a.seed,
    };
    let ds = gaussian_mixture(&spec, Metric::Euclidean)?;
    write_dataset(&ds, &a.out, Format::from_path(&a.out))?;
    log::info!("wrote {} points to {}", ds.len(), a.out.display());
    Ok(())
}

fn coreset(a: CoresetArgs) -> fairdiv::Result<()> {
    let ds = a.input.load()?;
    let quota = a.quota.resolve(ds.num_colors())?;
    let parts = split_round_robin(&ds, a.partitions);
    let union = composable_coreset(&parts, &quota, a.measure)?;
    write_dataset(&union, &a.out, Format::from_path(&a.out))?;
    eprintln!(
        "{} of {} points kept (bound {} per partition), per color {:?}",
        union.len(),
        ds.len(),
        size_bound(&quota, a.measure),
        union.color_counts()
    );
    Ok(())
}

fn solve(a: SolveArgs) -> fairdiv::Result<()> {
    let full = a.input.load()?;
    let quota = a.quota.resolve(full.num_colors())?;
    full.check_quota(&quota)?;
    let ds = if a.use_coresets {
        composable_coreset(std::slice::from_ref(&full), &quota, a.measure)?
    } else {
        full
    };
    let cfg = SolverConfig {
        eps: a.eps,
        sum_nn: SumNnConfig::with_approach(a.approach),
    };
    let sel = if a.brute_force {
        brute_force_fdm(&ds, &quota, a.measure)?.0
    } else if a.dm {
        solve_dm(&ds, quota.total(), a.measure, &cfg)?
    } else {
        solve_fdm(&ds, &quota, a.measure, &cfg)?
    };
    let value = if sel.len() >= 2 { Some(ds.diversity(&sel, a.measure)?) } else { None };
    let doc = serde_json::json!({
        "measure": a.measure.name(),
        "quota": quota.per_color(),
        "value": value,
        "ids": sel.ids(&ds),
        "per_color": sel.per_color_counts(),
        "searched": ds.len(),
    });
    let text = serde_json::to_string_pretty(&doc).expect("plain json");
    match &a.out {
        Some(path) => {
            let mut w = create(path)?;
            writeln!(w, "{text}").and_then(|_| w.flush()).map_err(io_err(path))
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn experiment(a: ExperimentArgs) -> fairdiv::Result<()> {
    let mut cfg = match &a.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(p) = a.input {
        cfg.dataset = Some(p);
    }
    if a.colors.is_some() {
        cfg.colors = a.colors;
    }
    if let Some(m) = a.metric {
        cfg.metric = m;
    }
    if let Some(s) = &a.measure {
        cfg.measures = parse_measures(s)?;
    }
    if let Some(q) = a.quota {
        cfg.quota = q;
    }
    if let Some(ap) = a.approach {
        cfg.approach = ap;
    }
    cfg.use_coresets |= a.use_coresets;
    cfg.compare_dm |= a.compare_dm;
    cfg.timings |= a.timings;
    if let Some(p) = a.partitions {
        cfg.partitions = p;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(n) = a.n {
        cfg.synthetic.n = n;
    }
    if let Some(d) = a.dim {
        cfg.synthetic.dim = d;
    }
    if a.out.is_some() {
        cfg.out = a.out;
    }

    let report = run_experiment(&cfg)?;
    print!("{}", report.render_table());
    if let Some(path) = &cfg.out {
        report.write_csv(create(path)?, cfg.timings)?;
        if !report.dm.is_empty() {
            let dm_path = path.with_extension("dm.csv");
            report.write_dm_csv(create(&dm_path)?)?;
        }
    }
    Ok(())
}

fn report(a: ReportArgs) -> fairdiv::Result<()> {
    let file = File::open(&a.input).map_err(io_err(&a.input))?;
    let report = Report::read_csv(file)?;
    print!("{}", report.render_table());
    Ok(())
}
