use crate::distances::DistanceKind;
use crate::error::{Error, Result};
use crate::sampling::Dims;
use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const DEFAULT_REPLICATES: usize = 10_000;
pub const DEFAULT_SEED: u64 = 20_240_601;
pub const THREADS_ENV: &str = "HAARGAUSS_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Draw coupled (Y, Γ) pairs and dump them as matrices.
    Sample,
    /// Exact moment formulas at each grid point.
    Moments,
    /// Monte Carlo TV / KL / Hellinger estimates.
    Distance,
    /// Hilbert–Schmidt coupling experiments.
    Coupling,
    /// W-statistic histograms and KS distances.
    Clt,
    /// Exact identity suite.
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sample => "sample",
            Command::Moments => "moments",
            Command::Distance => "distance",
            Command::Coupling => "coupling",
            Command::Clt => "clt",
            Command::Verify => "verify",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub grid: Vec<Dims>,
    pub replicates: usize,
    pub master_seed: u64,
    pub threads: usize,
    pub output_dir: PathBuf,
    pub format: OutputFormat,
    /// Distance kinds for `distance`.
    pub kinds: Vec<DistanceKind>,
    /// `clt`: use the fixed six-point grid.
    pub figure_grid: bool,
    /// `distance`: the n ∈ {10³, 10⁴} diagonal with p = q = ⌊√n⌋ and ⌊∛n⌋.
    pub table1: bool,
    /// Whether `elapsed_ms` records wall-clock time (otherwise 0).
    pub record_timing: bool,
}

#[derive(Parser, Debug)]
#[command(
    name = "haargauss",
    version,
    about = "Haar orthogonal submatrices versus i.i.d. Gaussian matrices"
)]
struct Cli {
    /// Command to run; may instead come from the config file.
    #[arg(value_enum)]
    command: Option<Command>,
    /// JSON configuration file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    /// Distance kind(s): tv, kl, hellinger.
    #[arg(long, value_delimiter = ',')]
    kind: Vec<String>,
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    #[arg(long)]
    figure_grid: bool,
    #[arg(long)]
    table1: bool,
    /// Write elapsed_ms = 0 so repeated runs are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    command: Option<Command>,
    grid: Option<Vec<GridEntry>>,
    replicates: Option<usize>,
    master_seed: Option<u64>,
    threads: Option<usize>,
    output_dir: Option<PathBuf>,
    format: Option<OutputFormat>,
    kinds: Option<Vec<String>>,
    figure_grid: Option<bool>,
    table1: Option<bool>,
    no_timing: Option<bool>,
}

/// Grid entry as written in a config file; `n` may be omitted for `clt`,
/// where only `(p, q)` matters.
#[derive(Deserialize, Debug, Clone, Copy)]
#[serde(deny_unknown_fields)]
struct GridEntry {
    n: Option<usize>,
    p: usize,
    q: usize,
}

#[derive(Debug)]
pub enum ParseOutcome {
    /// `--help` or `--version` text.
    Help(String),
    Invalid(String),
}

/// Parses flags (and the optional JSON file they point to) into a validated
/// configuration.
pub fn parse_config<I, T>(args: I) -> std::result::Result<ExperimentConfig, ParseOutcome>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Err(ParseOutcome::Help(e.to_string())),
                _ => Err(ParseOutcome::Invalid(e.to_string())),
            };
        }
    };
    build(cli).map_err(|e| ParseOutcome::Invalid(e.to_string()))
}

fn read_file_config(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config file {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("invalid config file {}: {e}", path.display())))
}

fn default_threads() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t >= 1)
            .ok_or_else(|| Error::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

fn grid_dims(entry: GridEntry, command: Command) -> Result<Dims> {
    let n = match (entry.n, command) {
        (Some(n), _) => n,
        (None, Command::Clt) => entry.p.max(entry.q),
        (None, _) => {
            return Err(Error::Config(format!(
                "grid entry (p={}, q={}) is missing n",
                entry.p, entry.q
            )))
        }
    };
    Dims::new(n, entry.p, entry.q).map_err(|e| Error::Config(e.to_string()))
}

/// The distance diagonal: n ∈ {10³, 10⁴}, p = q = ⌊n^{1/2}⌋ and ⌊n^{1/3}⌋.
pub fn table1_grid() -> Vec<Dims> {
    let mut out = Vec::new();
    for n in [1_000usize, 10_000] {
        let sqrt = integer_root(n, 2);
        let cbrt = integer_root(n, 3);
        out.push(Dims::new(n, sqrt, sqrt).expect("valid diagonal point"));
        out.push(Dims::new(n, cbrt, cbrt).expect("valid diagonal point"));
    }
    out
}

/// `⌊n^{1/k}⌋` computed exactly.
fn integer_root(n: usize, k: u32) -> usize {
    let mut r = (n as f64).powf(1.0 / k as f64).round() as usize;
    while r.pow(k) > n {
        r -= 1;
    }
    while (r + 1).pow(k) <= n {
        r += 1;
    }
    r
}

fn build(cli: Cli) -> Result<ExperimentConfig> {
    let file = match &cli.config {
        Some(path) => read_file_config(path)?,
        None => FileConfig::default(),
    };
    let command = cli
        .command
        .or(file.command)
        .ok_or_else(|| Error::Config("no command given (sample, moments, distance, coupling, clt, verify)".into()))?;

    let figure_grid = cli.figure_grid || file.figure_grid.unwrap_or(false);
    let table1 = cli.table1 || file.table1.unwrap_or(false);

    let flag_point = match (cli.n, cli.p, cli.q) {
        (None, None, None) => None,
        (n, Some(p), Some(q)) => Some(GridEntry { n, p, q }),
        _ => return Err(Error::Config("--p and --q must be given together (with --n except for clt)".into())),
    };
    let grid: Vec<Dims> = if let Some(entry) = flag_point {
        vec![grid_dims(entry, command)?]
    } else if figure_grid && command == Command::Clt {
        crate::limits::FIGURE_GRID
            .iter()
            .map(|&(p, q)| Dims::new(p, p, q).expect("figure grid is valid"))
            .collect()
    } else if table1 && command == Command::Distance {
        table1_grid()
    } else if let Some(entries) = file.grid {
        entries
            .into_iter()
            .map(|e| grid_dims(e, command))
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    if grid.is_empty() && command != Command::Verify {
        return Err(Error::Config(format!(
            "{} needs at least one grid point (--n/--p/--q or a config grid)",
            command.name()
        )));
    }

    let default_reps = if command == Command::Sample { 1 } else { DEFAULT_REPLICATES };
    let replicates = cli.replicates.or(file.replicates).unwrap_or(default_reps);
    if replicates == 0 {
        return Err(Error::Config("replicates must be at least 1".into()));
    }
    if replicates < 2 && matches!(command, Command::Distance | Command::Coupling | Command::Clt) {
        return Err(Error::Config(format!(
            "{} needs at least 2 replicates for a standard error",
            command.name()
        )));
    }

    let threads = match cli.threads.or(file.threads) {
        Some(0) => return Err(Error::Config("threads must be at least 1".into())),
        Some(t) => t,
        None => default_threads()?,
    };

    let kind_names: Vec<String> = if !cli.kind.is_empty() {
        cli.kind
    } else {
        file.kinds.unwrap_or_default()
    };
    let mut kinds = kind_names
        .iter()
        .map(|k| DistanceKind::parse(k))
        .collect::<Result<Vec<_>>>()?;
    if kinds.is_empty() {
        kinds = vec![DistanceKind::Tv, DistanceKind::Kl, DistanceKind::Hellinger];
    }

    Ok(ExperimentConfig {
        command,
        grid,
        replicates,
        master_seed: cli.seed.or(file.master_seed).unwrap_or(DEFAULT_SEED),
        threads,
        output_dir: cli.output_dir.or(file.output_dir).unwrap_or_else(|| PathBuf::from("results")),
        format: cli.format.or(file.format).unwrap_or(OutputFormat::Csv),
        kinds,
        figure_grid,
        table1,
        record_timing: !(cli.no_timing || file.no_timing.unwrap_or(false)),
    })
}
