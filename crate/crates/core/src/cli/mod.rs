//! Command-line frontend: single-case analysis, curve tables, calibration
//! sweeps and PIT diagnostics.
//!
//! Exit codes: 0 on success, 2 on usage or validation errors, 1 when a
//! numerical routine fails.

mod config;
pub mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::calibration::{
    pit_sample, run_sweep, Scenario, SweepConfig, DEFAULT_REPS, DEFAULT_SIGMA_GRID, MIN_PIT_SAMPLES,
};
use crate::inference::{
    bayes_cdf, collision_confidence, level_interval, linear_grid, median, noncollision_pvalue,
    tabulate_curves, CollisionRadius, Distance, Method, Observation,
};
use output::{
    histogram_records, sig10, write_csv, write_json, AnalyzeRecord, CurveRecord, PitRecord,
    SweepRecord,
};

pub use config::parse_config;

#[derive(Debug, Parser)]
#[command(
    name = "collision-cd",
    version,
    about = "Bayesian versus confidence-distribution inference for the distance between two noisily observed objects",
    args_override_self = true
)]
pub struct Cli {
    /// Flat `key = value` file supplying defaults for the subcommand's flags.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Collision confidence, p-value, medians and intervals for one observation.
    Analyze(AnalyzeArgs),
    /// Tabulate B, C and both curves over a grid of distances.
    Curve(CurveArgs),
    /// Monte Carlo and exact non-collision summaries over a grid of σ.
    Sweep(SweepArgs),
    /// PIT uniformity diagnostic for the non-collision p-value.
    Pit(PitArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct ObservationArgs {
    /// Observed distance ‖y‖.
    #[arg(long, value_parser = nonneg, conflicts_with_all = ["y1", "y2"])]
    pub norm: Option<f64>,
    /// First displacement component.
    #[arg(long, value_parser = finite, requires = "y2", allow_hyphen_values = true)]
    pub y1: Option<f64>,
    /// Second displacement component.
    #[arg(long, value_parser = finite, requires = "y1", allow_hyphen_values = true)]
    pub y2: Option<f64>,
    /// Noise standard deviation per axis.
    #[arg(long, value_parser = positive)]
    pub sigma: f64,
}

impl ObservationArgs {
    fn observation(&self) -> Result<Observation, CliError> {
        let obs = match (self.norm, self.y1, self.y2) {
            (Some(n), _, _) => Observation::from_norm(n, self.sigma),
            (None, Some(a), Some(b)) => Observation::from_pair(a, b, self.sigma),
            _ => return Err(CliError::Usage("either --norm or both --y1 and --y2 are required".into())),
        };
        obs.map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub obs: ObservationArgs,
    /// Combined collision radius R.
    #[arg(long, value_parser = positive)]
    pub radius: f64,
    /// Interval level.
    #[arg(long, default_value_t = 0.9, value_parser = open_unit)]
    pub level: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub obs: ObservationArgs,
    /// Distance grid as lo:hi:n.
    #[arg(long, default_value = "0:12:481", value_parser = grid_spec)]
    pub grid: GridSpec,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// True distance δ.
    #[arg(long, default_value_t = 1.99, value_parser = nonneg)]
    pub delta_true: f64,
    /// Combined collision radius R.
    #[arg(long, default_value_t = 2.0, value_parser = positive)]
    pub radius: f64,
    /// Comma-separated, strictly increasing σ values.
    #[arg(long, value_parser = sigma_list)]
    pub sigma_grid: Option<SigmaGrid>,
    /// Replicates per σ.
    #[arg(long, default_value_t = DEFAULT_REPS, value_parser = at_least_one)]
    pub n_reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Non-collision probabilities above this count as "high".
    #[arg(long, default_value_t = 0.95, value_parser = open_unit)]
    pub threshold: f64,
    /// Worker threads (0 = all cores). Output does not depend on this.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PitArgs {
    #[arg(long, value_parser = nonneg)]
    pub delta_true: f64,
    #[arg(long, value_parser = positive)]
    pub sigma: f64,
    #[arg(long, value_parser = positive)]
    pub radius: f64,
    /// Number of simulated observations (at least 100).
    #[arg(long, default_value_t = 100_000, value_parser = pit_count)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SigmaGrid(pub Vec<f64>);

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(crate::Error),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Numerical(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code. Reports go to `stdout` unless `--output`
/// is given; diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match config::expand_args(args) {
        Ok(a) => a,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{rendered}");
            } else {
                let _ = write!(stderr, "{rendered}");
            }
            return code;
        }
    };
    match execute(&cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Analyze(a) => cmd_analyze(a, stdout),
        Command::Curve(a) => cmd_curve(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::Pit(a) => cmd_pit(a, stdout),
    }
}

fn with_sink<F>(path: &Option<PathBuf>, stdout: &mut dyn Write, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), CliError>,
{
    match path {
        Some(p) => {
            let file = File::create(p)
                .map_err(|e| CliError::Usage(format!("--output {}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => body(stdout),
    }
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    Ok(pool.install(f))
}

pub fn cmd_analyze(args: &AnalyzeArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let obs = args.obs.observation()?;
    let radius = CollisionRadius::new(args.radius).map_err(|e| CliError::Usage(format!("--radius: {e}")))?;
    let r_dist = Distance::new(args.radius)?;

    let conf = collision_confidence(&obs, radius)?.get();
    let pvalue = noncollision_pvalue(&obs, radius)?.get();
    let bayes = bayes_cdf(&obs, r_dist)?.get();
    let med_cd = median(&obs, Method::Cd)?;
    let med_b = median(&obs, Method::Bayes)?;
    let int_cd = level_interval(&obs, Method::Cd, args.level)?;
    let int_b = level_interval(&obs, Method::Bayes, args.level)?;

    let record = AnalyzeRecord {
        norm: sig10(obs.norm()),
        sigma: sig10(obs.sigma()),
        radius: sig10(args.radius),
        level: sig10(args.level),
        bayes_at_radius: sig10(bayes),
        cd_at_radius: sig10(conf),
        noncollision_pvalue: sig10(pvalue),
        median_cd: sig10(med_cd.delta.get()),
        median_cd_at_boundary: med_cd.at_boundary,
        median_bayes: sig10(med_b.delta.get()),
        interval_cd_lo: sig10(int_cd.lo.get()),
        interval_cd_hi: sig10(int_cd.hi.get()),
        interval_cd_lo_clipped: int_cd.lo_clipped,
        interval_bayes_lo: sig10(int_b.lo.get()),
        interval_bayes_hi: sig10(int_b.hi.get()),
        interval_bayes_lo_clipped: int_b.lo_clipped,
    };

    with_sink(&args.out.output, stdout, |w| {
        match args.out.format.unwrap_or(Format::Text) {
            Format::Csv => write_csv(&[record], w)?,
            Format::Json => write_json(&record, w)?,
            Format::Text => {
                let flag = |b: bool| if b { "  (lower end clipped at 0)" } else { "" };
                writeln!(w, "observation        |y| = {:.3}, sigma = {:.3}, R = {:.3}", obs.norm(), obs.sigma(), args.radius)?;
                writeln!(w, "B(R|y)             {:.3}", bayes)?;
                writeln!(w, "C(R|y)             {:.3}   confidence in collision", conf)?;
                writeln!(w, "1 - C(R|y)         {:.3}   p-value for no collision", pvalue)?;
                writeln!(
                    w,
                    "median (CD)        {:.3}{}",
                    med_cd.delta.get(),
                    if med_cd.at_boundary { "  (at boundary)" } else { "" }
                )?;
                writeln!(w, "median (Bayes)     {:.3}", med_b.delta.get())?;
                let pct = 100.0 * args.level;
                writeln!(w, "{pct:.0}% CD interval    [{:.3}, {:.3}]{}", int_cd.lo.get(), int_cd.hi.get(), flag(int_cd.lo_clipped))?;
                writeln!(w, "{pct:.0}% Bayes interval [{:.3}, {:.3}]{}", int_b.lo.get(), int_b.hi.get(), flag(int_b.lo_clipped))?;
            }
        }
        Ok(())
    })
}

pub fn cmd_curve(args: &CurveArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let obs = args.obs.observation()?;
    let grid = linear_grid(args.grid.lo, args.grid.hi, args.grid.n)
        .map_err(|e| CliError::Usage(format!("--grid: {e}")))?;
    let table = tabulate_curves(&obs, &grid)?;
    let records: Vec<CurveRecord> = table.rows().map(CurveRecord::from).collect();
    with_sink(&args.out.output, stdout, |w| {
        match args.out.format.unwrap_or(Format::Csv) {
            Format::Json => write_json(&records, w)?,
            _ => write_csv(&records, w)?,
        }
        Ok(())
    })
}

pub fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let config = SweepConfig {
        sigma_grid: args
            .sigma_grid
            .clone()
            .map(|g| g.0)
            .unwrap_or_else(|| DEFAULT_SIGMA_GRID.to_vec()),
        n_reps: args.n_reps,
        seed: args.seed,
        threshold: args.threshold,
    };
    config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let delta = Distance::new(args.delta_true).map_err(|e| CliError::Usage(format!("--delta-true: {e}")))?;
    let radius = CollisionRadius::new(args.radius).map_err(|e| CliError::Usage(format!("--radius: {e}")))?;

    let rows = in_pool(args.threads, || run_sweep(delta, radius, &config))??;
    let records: Vec<SweepRecord> = rows.iter().map(SweepRecord::from).collect();
    with_sink(&args.out.output, stdout, |w| {
        match args.out.format.unwrap_or(Format::Csv) {
            Format::Json => write_json(&records, w)?,
            _ => write_csv(&records, w)?,
        }
        Ok(())
    })
}

pub fn cmd_pit(args: &PitArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let scenario = Scenario::new(args.delta_true, args.sigma, args.radius)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let summary = in_pool(args.threads, || pit_sample(&scenario, args.n, args.seed))??;
    let record = PitRecord::new(args.delta_true, args.sigma, args.radius, args.seed, &summary);

    match args.out.format.unwrap_or(Format::Text) {
        Format::Json => with_sink(&args.out.output, stdout, |w| Ok(write_json(&record, w)?)),
        Format::Csv => with_sink(&args.out.output, stdout, |w| {
            Ok(write_csv(&histogram_records(&summary.histogram), w)?)
        }),
        Format::Text => {
            writeln!(stdout, "delta_true         {:.3}", args.delta_true)?;
            writeln!(stdout, "sigma              {:.3}", args.sigma)?;
            writeln!(stdout, "radius             {:.3}", args.radius)?;
            writeln!(stdout, "n                  {}", summary.n)?;
            writeln!(stdout, "mean of 1-C(R|Y)   {:.3}", summary.mean)?;
            writeln!(stdout, "ks_stat            {:.5}", summary.ks_stat)?;
            writeln!(stdout, "1% critical value  {:.5}", summary.critical_value())?;
            writeln!(
                stdout,
                "uniformity         {}",
                if summary.passes() { "pass" } else { "fail" }
            )?;
            let hist = histogram_records(&summary.histogram);
            match &args.out.output {
                Some(_) => with_sink(&args.out.output, stdout, |w| Ok(write_csv(&hist, w)?))?,
                None => {
                    writeln!(stdout)?;
                    write_csv(&hist, &mut *stdout)?;
                }
            }
            Ok(())
        }
    }
}

fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn nonneg(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("must be >= 0, got {v}"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be > 0, got {v}"))
    }
}

fn open_unit(s: &str) -> Result<f64, String> {
    let v = finite(s)?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("must be strictly between 0 and 1, got {v}"))
    }
}

fn at_least_one(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("must be an integer >= 1, got `{s}`")),
    }
}

fn pit_count(s: &str) -> Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(n) if n >= MIN_PIT_SAMPLES => Ok(n),
        _ => Err(format!("must be an integer >= {MIN_PIT_SAMPLES}, got `{s}`")),
    }
}

fn grid_spec(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected lo:hi:n, got `{s}`"));
    }
    let lo = nonneg(parts[0])?;
    let hi = nonneg(parts[1])?;
    let n = at_least_one(parts[2])?;
    if hi < lo || (n > 1 && hi == lo) {
        return Err(format!("need lo < hi in `{s}`"));
    }
    Ok(GridSpec { lo, hi, n })
}

fn sigma_list(s: &str) -> Result<SigmaGrid, String> {
    let values = s
        .split(',')
        .map(positive)
        .collect::<Result<Vec<f64>, String>>()?;
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err("values must be strictly increasing".into());
    }
    Ok(SigmaGrid(values))
}
