//! Command-line front end: model files in, deterministic CSV/JSON reports out.
//!
//! Every float is printed with 17 significant digits, so reports read back
//! bit-exactly. Exit status is 0 on success, 2 on I/O failure and 1 for any
//! other error, including bad arguments.

mod input;
mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dynamics::{amplification_series, TimeGrid, DEFAULT_GRID_POINTS};
use crate::error::{Error, Result};
use crate::metrics::{analyze, structured_dissipator_report, RegimeThresholds, StructuralMetrics};
use crate::models::{build, random, ModelSpec};
use crate::superop::{liouvillian, LindbladModel};

pub use input::{model_to_json, parse_model_file, parse_model_source, parse_model_str, read_model_source, ModelSource};
pub use output::{emit, format_f64, to_json, write_atomically, Cell, Sig17, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "lindscope", version, about = "Structural metrics and transient amplification of Lindblad generators")]
pub struct Cli {
    /// Lower κ threshold between weakly nonnormal and crossover.
    #[arg(long, global = true, value_name = "X", display_order = 100)]
    pub kappa_lo: Option<f64>,

    /// Upper κ threshold between crossover and strongly nonnormal.
    #[arg(long, global = true, value_name = "X", display_order = 101)]
    pub kappa_hi: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when omitted or `-`.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Defaults to json for `analyze`, csv otherwise.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub model: PathBuf,

    /// Parameter of the named model to vary.
    #[arg(long)]
    pub param: String,

    #[arg(long, allow_hyphen_values = true)]
    pub from: f64,

    #[arg(long, allow_hyphen_values = true)]
    pub to: f64,

    #[arg(long)]
    pub points: usize,

    /// Space the points logarithmically.
    #[arg(long)]
    pub log: bool,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structural metrics and regime of one model.
    Analyze {
        model: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Propagator norm and amplification factors on a time grid.
    Series {
        model: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        t_start: f64,
        /// End of the grid; 5/δ (or 10/‖L‖ without dissipation) by default.
        #[arg(long)]
        t_end: Option<f64>,
        /// Number of grid intervals; the grid has steps + 1 points.
        #[arg(long)]
        steps: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Metrics over a range of one named-model parameter.
    Sweep(SweepArgs),
    /// Sweep with regime labels and the κ threshold curves.
    Regimes(SweepArgs),
    /// Metrics of seeded random Lindblad models.
    Properties {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Rewrite a model file in explicit-matrix form.
    Export {
        model: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRange {
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub points: usize,
    pub log: bool,
}

impl SweepRange {
    pub fn new(param: impl Into<String>, from: f64, to: f64, points: usize, log: bool) -> Result<Self> {
        if !(from.is_finite() && to.is_finite()) {
            return Err(Error::Config(format!("sweep bounds must be finite, got {from} and {to}")));
        }
        if points == 0 {
            return Err(Error::Config("sweep needs at least one point".into()));
        }
        if log && (from <= 0.0 || to <= 0.0) {
            return Err(Error::Config(format!("logarithmic sweep needs positive bounds, got {from} and {to}")));
        }
        Ok(SweepRange { param: param.into(), from, to, points, log })
    }

    /// Endpoints are hit exactly; log spacing is in decades so decade
    /// sweeps land on exact powers of ten.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        if n == 1 {
            return vec![self.from];
        }
        (0..n)
            .map(|k| {
                if k == 0 {
                    self.from
                } else if k == n - 1 {
                    self.to
                } else {
                    let s = k as f64 / (n - 1) as f64;
                    if self.log {
                        let (a, b) = (self.from.log10(), self.to.log10());
                        10f64.powf(a + s * (b - a))
                    } else {
                        self.from + s * (self.to - self.from)
                    }
                }
            })
            .collect()
    }
}

/// Requested grid; a missing end or step count falls back to the model's
/// default grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridRequest {
    pub t_start: f64,
    pub t_end: Option<f64>,
    pub steps: Option<usize>,
}

impl GridRequest {
    pub fn resolve(&self, metrics: &StructuralMetrics) -> Result<TimeGrid> {
        let default = TimeGrid::default_for(metrics);
        TimeGrid::new(
            self.t_start,
            self.t_end.unwrap_or(default.t_end()),
            self.steps.unwrap_or(DEFAULT_GRID_POINTS - 1),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Task {
    Analyze,
    Series(GridRequest),
    Sweep(SweepRange),
    Regimes(SweepRange),
    Properties { seed: u64, count: usize },
    Export,
}

/// A validated command ready to run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub task: Task,
    pub model_path: Option<PathBuf>,
    pub thresholds: RegimeThresholds,
    /// `None` means standard output.
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

fn nonempty(p: PathBuf, what: &str) -> Result<PathBuf> {
    if p.as_os_str().is_empty() {
        Err(Error::Config(format!("{what} path is empty")))
    } else {
        Ok(p)
    }
}

fn out_path(p: Option<PathBuf>) -> Result<Option<PathBuf>> {
    match p {
        Some(p) if p.as_os_str() == "-" => Ok(None),
        Some(p) => nonempty(p, "output").map(Some),
        None => Ok(None),
    }
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let defaults = RegimeThresholds::default();
        let thresholds = RegimeThresholds::new(
            cli.kappa_lo.unwrap_or(defaults.kappa_lo),
            cli.kappa_hi.unwrap_or(defaults.kappa_hi),
        )?;
        let sweep = |a: SweepArgs| -> Result<(SweepRange, PathBuf, OutputArgs)> {
            Ok((SweepRange::new(a.param, a.from, a.to, a.points, a.log)?, a.model, a.output))
        };
        let (task, model, output, default_format) = match cli.command {
            Command::Analyze { model, output } => (Task::Analyze, Some(model), output, Format::Json),
            Command::Series { model, t_start, t_end, steps, output } => {
                (Task::Series(GridRequest { t_start, t_end, steps }), Some(model), output, Format::Csv)
            }
            Command::Sweep(a) => {
                let (r, m, o) = sweep(a)?;
                (Task::Sweep(r), Some(m), o, Format::Csv)
            }
            Command::Regimes(a) => {
                let (r, m, o) = sweep(a)?;
                (Task::Regimes(r), Some(m), o, Format::Csv)
            }
            Command::Properties { seed, count, output } => {
                (Task::Properties { seed, count }, None, output, Format::Csv)
            }
            Command::Export { model, out } => {
                (Task::Export, Some(model), OutputArgs { out, format: Some(Format::Json) }, Format::Json)
            }
        };
        Ok(RunConfig {
            task,
            model_path: model.map(|p| nonempty(p, "model")).transpose()?,
            thresholds,
            output_path: out_path(output.out)?,
            format: output.format.unwrap_or(default_format),
        })
    }

    fn model_source(&self) -> Result<ModelSource> {
        let path = self.model_path.as_deref().ok_or_else(|| Error::Config("no model file given".into()))?;
        read_model_source(path)
    }
}

fn kappa_cell(m: &StructuralMetrics) -> Cell {
    m.kappa.map_or_else(|| Cell::from("undefined"), Cell::Num)
}

/// One-row structural report for `model`.
pub fn analyze_table(model: &LindbladModel, thresholds: &RegimeThresholds) -> Result<Table> {
    let m = analyze(&liouvillian(model), thresholds);
    let s = structured_dissipator_report(model)?;
    let mut t = Table::new([
        "model",
        "dim",
        "delta",
        "eta",
        "nd_norm",
        "kappa",
        "bound_margin",
        "regime",
        "generator_norm",
        "kappa_lo",
        "kappa_hi",
        "structured",
        "structured_gamma",
        "shift_verified",
        "max_shift_deviation",
        "jump_spectrum",
    ]);
    t.push(vec![
        model.label().into(),
        model.dim().into(),
        m.delta.into(),
        m.eta.into(),
        m.nd_norm.into(),
        kappa_cell(&m),
        m.bound_margin.into(),
        m.regime.name().into(),
        m.generator_norm.into(),
        thresholds.kappa_lo.into(),
        thresholds.kappa_hi.into(),
        s.is_structured.into(),
        s.gamma.into(),
        s.shift_verified.into(),
        s.max_shift_deviation.into(),
        if s.is_structured { Cell::Pairs(s.jump_spectrum) } else { Cell::Null },
    ]);
    Ok(t)
}

pub fn series_table(model: &LindbladModel, grid: &GridRequest) -> Result<Table> {
    let l = liouvillian(model);
    let grid = grid.resolve(&analyze(&l, &RegimeThresholds::default()))?;
    let s = amplification_series(&l, &grid)?;
    let mut t = Table::new(["t", "prop_norm", "a_paper", "a_spectral", "gronwall_env", "appg_env", "appg_satisfied"]);
    for k in 0..s.len() {
        t.push(vec![
            s.times[k].into(),
            s.prop_norm[k].into(),
            s.a_paper[k].into(),
            s.a_spectral[k].into(),
            s.gronwall_env[k].into(),
            s.appg_env[k].into(),
            s.appg_satisfied[k].into(),
        ]);
    }
    Ok(t)
}

/// Metrics at every sweep value, computed in parallel and reported in order.
fn sweep_metrics(
    spec: &ModelSpec,
    range: &SweepRange,
    thresholds: &RegimeThresholds,
) -> Result<Vec<(f64, StructuralMetrics)>> {
    let results: Vec<Result<(f64, StructuralMetrics)>> = range
        .values()
        .into_par_iter()
        .map(|v| {
            let model = build(&spec.clone().with(&range.param, v))?;
            Ok((v, analyze(&liouvillian(&model), thresholds)))
        })
        .collect();
    results.into_iter().collect()
}

fn named_spec<'a>(source: &'a ModelSource, range: &SweepRange) -> Result<&'a ModelSpec> {
    let spec =
        source.spec().ok_or_else(|| Error::Config("sweeps need a named model file ({\"model\": {...}})".into()))?;
    // An unknown parameter is reported before any point is computed.
    spec.clone().with(&range.param, range.from).validate()?;
    Ok(spec)
}

pub fn sweep_table(source: &ModelSource, range: &SweepRange, thresholds: &RegimeThresholds) -> Result<Table> {
    let spec = named_spec(source, range)?;
    let mut t = Table::new([range.param.as_str(), "delta", "eta", "nd_norm", "kappa", "bound_margin", "regime"]);
    for (v, m) in sweep_metrics(spec, range, thresholds)? {
        t.push(vec![
            v.into(),
            m.delta.into(),
            m.eta.into(),
            m.nd_norm.into(),
            kappa_cell(&m),
            m.bound_margin.into(),
            m.regime.name().into(),
        ]);
    }
    Ok(t)
}

/// Sweep rows with the regime label and the threshold curves
/// `η = κ_lo δ²` and `η = κ_hi δ²` at the same `δ`.
pub fn regimes_table(source: &ModelSource, range: &SweepRange, thresholds: &RegimeThresholds) -> Result<Table> {
    let spec = named_spec(source, range)?;
    let mut t =
        Table::new([range.param.as_str(), "delta", "eta", "kappa", "regime", "eta_at_kappa_lo", "eta_at_kappa_hi"]);
    for (v, m) in sweep_metrics(spec, range, thresholds)? {
        let d2 = m.delta * m.delta;
        t.push(vec![
            v.into(),
            m.delta.into(),
            m.eta.into(),
            kappa_cell(&m),
            m.regime.name().into(),
            (thresholds.kappa_lo * d2).into(),
            (thresholds.kappa_hi * d2).into(),
        ]);
    }
    Ok(t)
}

/// Metrics of `count` random models drawn from a ChaCha8 stream seeded with
/// `seed`. `relative_margin` is `bound_margin / (1 + 2δ‖L_nd‖)`.
pub fn properties_table(seed: u64, count: usize, thresholds: &RegimeThresholds) -> Result<Table> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let models = (0..count).map(|_| random::sweep_model(&mut rng)).collect::<Result<Vec<_>>>()?;
    let rows: Vec<(usize, usize, StructuralMetrics)> =
        models.par_iter().map(|m| (m.dim(), m.jumps().len(), analyze(&liouvillian(m), thresholds))).collect();
    let mut t = Table::new([
        "index",
        "dim",
        "jumps",
        "delta",
        "eta",
        "nd_norm",
        "kappa",
        "bound_margin",
        "relative_margin",
        "regime",
    ]);
    for (k, (dim, jumps, m)) in rows.into_iter().enumerate() {
        let rel = m.bound_margin / (1.0 + 2.0 * m.delta * m.nd_norm);
        t.push(vec![
            k.into(),
            dim.into(),
            jumps.into(),
            m.delta.into(),
            m.eta.into(),
            m.nd_norm.into(),
            kappa_cell(&m),
            m.bound_margin.into(),
            rel.into(),
            m.regime.name().into(),
        ]);
    }
    Ok(t)
}

/// Produces the report text for `config` without writing it.
pub fn render(config: &RunConfig) -> Result<String> {
    let th = &config.thresholds;
    let table = match &config.task {
        Task::Analyze => {
            let t = analyze_table(&config.model_source()?.build()?, th)?;
            return match config.format {
                Format::Json => t.to_json_record(),
                Format::Csv => t.to_csv(),
            };
        }
        Task::Export => return model_to_json(&config.model_source()?.build()?),
        Task::Series(grid) => series_table(&config.model_source()?.build()?, grid)?,
        Task::Sweep(range) => sweep_table(&config.model_source()?, range, th)?,
        Task::Regimes(range) => regimes_table(&config.model_source()?, range, th)?,
        Task::Properties { seed, count } => properties_table(*seed, *count, th)?,
    };
    match config.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    }
}

pub fn run(config: &RunConfig) -> Result<()> {
    let text = render(config)?;
    emit(config.output_path.as_deref(), &text)
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit status. Diagnostics go to standard error.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match RunConfig::from_cli(cli).and_then(|c| run(&c)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("lindscope: {e}");
            e.exit_code()
        }
    }
}

/// Convenience for tests and bindings: analyze report of a file as text.
pub fn analyze_file(path: &Path, thresholds: &RegimeThresholds, format: Format) -> Result<String> {
    render(&RunConfig {
        task: Task::Analyze,
        model_path: Some(path.to_path_buf()),
        thresholds: *thresholds,
        output_path: None,
        format,
    })
}
