use super::config::{Command, ExperimentConfig, OutputFormat};
use super::output::{format_float, to_csv, to_json, Field, ResultRecord};
use super::svg::{emit_svg_histogram, Overlay};
use crate::distances::{
    estimate_kl, estimate_tv_and_hellinger, pinsker_check, sandwich_checks, DistanceKind,
    EstimateWithError,
};
use crate::error::Error;
use crate::limits::{run_clt_point, run_clt_rank_one_point, run_hs_experiment, CltGridPoint};
use crate::moments::{
    entry_monomial_moment, exact_identity_suite, sigma_trace_sums, trace_power_moment,
    wishart_trace_stats, ExactRational, IdentitySuiteLimits, MonomialPattern,
};
use crate::numerics::{par_replicates, Histogram, RngStream};
use crate::sampling::{sample_coupled_pair, Dims};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Debug)]
pub enum RunError {
    /// Bad configuration or unusable output location.
    Config(String),
    /// The computation itself failed.
    Failed(Error),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Failed(e)
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(m) => write!(f, "configuration error: {m}"),
            RunError::Failed(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub run_dir: PathBuf,
    pub records: Vec<ResultRecord>,
    /// Artifact paths relative to `run_dir`.
    pub artifacts: Vec<String>,
    pub all_checks_pass: bool,
    pub summary: String,
}

const STATUS_OK: &str = "ok";
const STATUS_CHECK_FAILED: &str = "check_failed";
const STATUS_UNSUPPORTED: &str = "unsupported_regime";

/// Everything a command produced, before anything touches the disk.
struct Produced {
    records: Vec<ResultRecord>,
    artifacts: Vec<(String, String)>,
    all_pass: bool,
}

/// Executes `config` and writes its run directory.
pub fn run(config: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    let run_dir = create_run_dir(config)?;
    let config_json = serde_json::to_string_pretty(config).map_err(Error::from)?;
    std::fs::write(run_dir.join("config.json"), config_json + "\n").map_err(Error::from)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| RunError::Config(format!("cannot start {} worker threads: {e}", config.threads)))?;
    let produced = pool.install(|| dispatch(config))?;

    let mut artifacts = Vec::with_capacity(produced.artifacts.len());
    for (name, content) in &produced.artifacts {
        std::fs::write(run_dir.join(name), content).map_err(Error::from)?;
        artifacts.push(name.clone());
    }
    let (file, body) = match config.format {
        OutputFormat::Csv => ("results.csv", to_csv(&produced.records)),
        OutputFormat::Json => ("results.json", to_json(&produced.records)),
    };
    std::fs::write(run_dir.join(file), &body).map_err(Error::from)?;

    Ok(RunOutcome {
        run_dir,
        summary: to_csv(&produced.records),
        records: produced.records,
        artifacts,
        all_checks_pass: produced.all_pass,
    })
}

fn create_run_dir(config: &ExperimentConfig) -> Result<PathBuf, RunError> {
    let base = &config.output_dir;
    std::fs::create_dir_all(base)
        .map_err(|e| RunError::Config(format!("output directory {} is not usable: {e}", base.display())))?;
    let stamp = chrono::Utc::now().format("%Y%m%dT%H%M%S%.3fZ");
    let stem = format!("{}-{}-{}", config.command.name(), stamp, config.master_seed);
    for k in 0..1000 {
        let name = if k == 0 { stem.clone() } else { format!("{stem}-{k}") };
        let dir = base.join(name);
        match std::fs::create_dir(&dir) {
            Ok(()) => return Ok(dir),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => continue,
            Err(e) => {
                return Err(RunError::Config(format!(
                    "cannot create run directory in {}: {e}",
                    base.display()
                )))
            }
        }
    }
    Err(RunError::Config(format!("too many run directories named {stem} in {}", base.display())))
}

fn dispatch(config: &ExperimentConfig) -> Result<Produced, RunError> {
    match config.command {
        Command::Sample => run_sample(config),
        Command::Moments => run_moments(config),
        Command::Distance => run_distance(config),
        Command::Coupling => run_coupling(config),
        Command::Clt => run_clt(config),
        Command::Verify => run_verify(),
    }
}

fn elapsed_ms(config: &ExperimentConfig, start: Instant) -> u64 {
    if config.record_timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    }
}

fn dims_record(d: Dims) -> ResultRecord {
    ResultRecord::new().with("n", d.n()).with("p", d.p()).with("q", d.q())
}

fn run_sample(config: &ExperimentConfig) -> Result<Produced, RunError> {
    let mut records = Vec::new();
    let mut artifacts = Vec::new();
    let seed = config.master_seed;
    for (k, &d) in config.grid.iter().enumerate() {
        let start = Instant::now();
        let pairs = par_replicates(config.replicates, |r| {
            sample_coupled_pair(d, &mut RngStream::for_domain(seed, k as u64, r))
        })?;
        let ms = elapsed_ms(config, start);
        let scale = (d.n() as f64).sqrt();
        for (r, pair) in pairs.iter().enumerate() {
            let y_name = format!("sample-{k}-{r}-y.csv");
            let g_name = format!("sample-{k}-{r}-gamma.csv");
            let hs: f64 = pair
                .gamma_block
                .as_slice()
                .iter()
                .zip(pair.y_block.as_slice())
                .map(|(g, y)| (scale * g - y).powi(2))
                .sum::<f64>()
                .sqrt();
            records.push(
                dims_record(d)
                    .with("replicate", r)
                    .with("seed", seed)
                    .with("hs_norm", hs)
                    .with("y_file", y_name.clone())
                    .with("gamma_file", g_name.clone())
                    .with("elapsed_ms", ms)
                    .with("status", STATUS_OK),
            );
            artifacts.push((y_name, pair.y_block.to_csv_string()));
            artifacts.push((g_name, pair.gamma_block.to_csv_string()));
        }
    }
    Ok(Produced {
        records,
        artifacts,
        all_pass: true,
    })
}

fn exact_record(d: Dims, quantity: &str, v: &ExactRational) -> ResultRecord {
    dims_record(d)
        .with("quantity", quantity)
        .with("exact", v.to_string())
        .with("decimal", v.to_decimal17())
        .with("status", STATUS_OK)
}

fn run_moments(config: &ExperimentConfig) -> Result<Produced, RunError> {
    let mut records = Vec::new();
    for &d in &config.grid {
        for k in 1..=3 {
            let v = trace_power_moment(k, d)?;
            records.push(exact_record(d, &format!("E tr[(Z'Z)^{k}]"), &v));
        }
        let s = sigma_trace_sums(d);
        records.push(exact_record(d, "sum_j E tr[(Sigma_(j-1))_p]", &s.sum_e_tr));
        records.push(exact_record(d, "sum_j E tr[(Sigma_(j-1))_p^2]", &s.sum_e_tr2));
        let w = wishart_trace_stats(d.p(), d.q());
        records.push(exact_record(d, "E tr[(X'X)^2]", &w.e_tr2));
        records.push(exact_record(d, "Var tr[(X'X)^2]", &w.var_tr2));
        records.push(exact_record(d, "Cov(tr X'X, tr[(X'X)^2])", &w.cov_tr_tr2));
        for pat in MonomialPattern::ALL {
            if d.n() >= pat.min_n() {
                let v = entry_monomial_moment(pat, d.n())?;
                records.push(exact_record(d, &format!("E[{pat:?}]"), &v));
            }
        }
    }
    Ok(Produced {
        records,
        artifacts: Vec::new(),
        all_pass: true,
    })
}

fn distance_record(d: Dims, kind: DistanceKind, config: &ExperimentConfig) -> ResultRecord {
    dims_record(d)
        .with("kind", kind.to_string())
        .with("N", config.replicates)
        .with("seed", config.master_seed)
}

fn run_distance(config: &ExperimentConfig) -> Result<Produced, RunError> {
    let mut records = Vec::new();
    let mut all_pass = true;
    let n_rep = config.replicates;
    let seed = config.master_seed;
    for &d in &config.grid {
        if !d.has_density() {
            for &kind in &config.kinds {
                records.push(
                    distance_record(d, kind, config)
                        .with("mean", Field::Missing)
                        .with("std_error", Field::Missing)
                        .with("elapsed_ms", 0u64)
                        .with("status", STATUS_UNSUPPORTED),
                );
            }
            continue;
        }
        let wants = |k| config.kinds.contains(&k);
        let mut g_side: Option<(EstimateWithError, EstimateWithError, u64)> = None;
        if wants(DistanceKind::Tv) || wants(DistanceKind::Hellinger) {
            let start = Instant::now();
            let (tv, h) = estimate_tv_and_hellinger(d, n_rep, seed)?;
            g_side = Some((tv, h, elapsed_ms(config, start)));
        }
        let mut kl: Option<(EstimateWithError, u64)> = None;
        if wants(DistanceKind::Kl) {
            let start = Instant::now();
            let e = estimate_kl(d, n_rep, seed)?;
            kl = Some((e, elapsed_ms(config, start)));
        }

        let mut ok = true;
        if let Some((tv, h, _)) = &g_side {
            ok &= (0.0..=2.0).contains(&tv.mean) && h.mean <= 1.0;
            if wants(DistanceKind::Hellinger) && wants(DistanceKind::Tv) {
                ok &= sandwich_checks(tv, h).iter().all(|c| c.holds());
            }
            if let (Some((k, _)), true) = (&kl, wants(DistanceKind::Tv)) {
                ok &= pinsker_check(tv, k).holds();
            }
        }
        if let Some((k, _)) = &kl {
            ok &= k.mean >= -3.0 * k.std_error;
        }
        all_pass &= ok;
        let status = if ok { STATUS_OK } else { STATUS_CHECK_FAILED };

        for &kind in &config.kinds {
            let (est, ms) = match kind {
                DistanceKind::Tv => g_side.as_ref().map(|(tv, _, ms)| (tv, *ms)),
                DistanceKind::Hellinger => g_side.as_ref().map(|(_, h, ms)| (h, *ms)),
                DistanceKind::Kl => kl.as_ref().map(|(k, ms)| (k, *ms)),
            }
            .expect("requested estimates were computed");
            records.push(
                distance_record(d, kind, config)
                    .with("mean", est.mean)
                    .with("std_error", est.std_error)
                    .with("elapsed_ms", ms)
                    .with("status", status),
            );
        }
    }
    Ok(Produced {
        records,
        artifacts: Vec::new(),
        all_pass,
    })
}

fn histogram_csv(h: &Histogram) -> String {
    let mut s = String::from("bin_lo,bin_hi,count,density\n");
    let w = h.width();
    let _ = writeln!(s, "-inf,{},{},", format_float(h.lo), h.underflow);
    for (k, (&c, d)) in h.counts.iter().zip(h.densities()).enumerate() {
        let lo = h.lo + k as f64 * w;
        let _ = writeln!(
            s,
            "{},{},{c},{}",
            format_float(lo),
            format_float(lo + w),
            format_float(d)
        );
    }
    let _ = writeln!(s, "{},inf,{},", format_float(h.hi), h.overflow);
    s
}

fn run_coupling(config: &ExperimentConfig) -> Result<Produced, RunError> {
    let mut records = Vec::new();
    let mut artifacts = Vec::new();
    let mut all_pass = true;
    for (k, &d) in config.grid.iter().enumerate() {
        let start = Instant::now();
        let e = run_hs_experiment(d, config.replicates, config.master_seed)?;
        let ms = elapsed_ms(config, start);
        let ok = e.mean_sq <= e.bound;
        all_pass &= ok;

        let mut samples_csv = String::from("replicate,hs_norm,term_ab,term_c,cross\n");
        for (i, s) in e.samples.iter().enumerate() {
            let _ = writeln!(
                samples_csv,
                "{i},{},{},{},{}",
                format_float(s.hs_norm),
                format_float(s.term_ab),
                format_float(s.term_c),
                format_float(s.cross)
            );
        }
        let samples_name = format!("coupling-{k}-samples.csv");
        artifacts.push((samples_name.clone(), samples_csv));

        let mut svg_name = None;
        if d.q() == 1 {
            let scale = (d.p() as f64 / d.n() as f64 / 2.0).sqrt();
            let h = Histogram::from_samples(0.0, 5.0 * scale, crate::limits::HISTOGRAM_BINS, &e.norms())?;
            let title = format!("HS distance, n={} p={} q=1", d.n(), d.p());
            let name = format!("coupling-{k}-histogram.svg");
            artifacts.push((name.clone(), emit_svg_histogram(&h, Overlay::HalfNormal(scale), &title)?));
            artifacts.push((format!("coupling-{k}-histogram.csv"), histogram_csv(&h)));
            svg_name = Some(name);
        }

        records.push(
            dims_record(d)
                .with("N", config.replicates)
                .with("seed", config.master_seed)
                .with("mean_sq", e.mean_sq)
                .with("mean_sq_se", e.mean_sq_se)
                .with("bound", e.bound)
                .with("mean_hs", e.mean_hs)
                .with("mean_hs_se", e.mean_hs_se)
                .with("sigma", e.sigma)
                .with("sigma_limit", e.sigma_limit)
                .with("mean_term_c", e.mean_term_c)
                .with("mean_term_c_se", e.mean_term_c_se)
                .with("exact_term_c", sigma_trace_sums(d).sum_e_tr.to_f64())
                .with("ks_vs_limit", e.ks_vs_limit)
                .with("samples_file", samples_name)
                .with("histogram_svg", svg_name)
                .with("elapsed_ms", ms)
                .with("status", if ok { STATUS_OK } else { STATUS_CHECK_FAILED }),
        );
    }
    Ok(Produced {
        records,
        artifacts,
        all_pass,
    })
}

fn clt_point(d: Dims, config: &ExperimentConfig) -> Result<CltGridPoint, Error> {
    if d.p() == 1 {
        run_clt_rank_one_point(d.q(), config.replicates, config.master_seed, 0)
    } else {
        run_clt_point(d.p(), d.q(), config.replicates, config.master_seed, 0)
    }
}

fn run_clt(config: &ExperimentConfig) -> Result<Produced, RunError> {
    let mut records = Vec::new();
    let mut artifacts = Vec::new();
    let mut all_pass = true;
    for &d in &config.grid {
        let start = Instant::now();
        let pt = clt_point(d, config)?;
        let ms = elapsed_ms(config, start);
        let ok = pt.mean.abs() <= 4.0 * pt.mean_se;
        all_pass &= ok;
        let stem = format!("clt-p{}-q{}", pt.p, pt.q);
        let title = if pt.p == 1 {
            format!("W/sqrt(8), p=1, q={}", pt.q)
        } else {
            format!("W, p={}, q={}", pt.p, pt.q)
        };
        artifacts.push((format!("{stem}.svg"), emit_svg_histogram(&pt.histogram, Overlay::Normal, &title)?));
        artifacts.push((format!("{stem}.csv"), histogram_csv(&pt.histogram)));
        records.push(
            ResultRecord::new()
                .with("p", pt.p)
                .with("q", pt.q)
                .with("N", pt.replicates)
                .with("seed", pt.master_seed)
                .with("mean", pt.mean)
                .with("mean_se", pt.mean_se)
                .with("variance", pt.variance)
                .with("exact_variance", pt.exact_variance)
                .with("ks", pt.ks)
                .with("histogram_svg", format!("{stem}.svg"))
                .with("histogram_csv", format!("{stem}.csv"))
                .with("elapsed_ms", ms)
                .with("status", if ok { STATUS_OK } else { STATUS_CHECK_FAILED }),
        );
    }
    Ok(Produced {
        records,
        artifacts,
        all_pass,
    })
}

fn run_verify() -> Result<Produced, RunError> {
    let checks = exact_identity_suite(IdentitySuiteLimits::default());
    let all_pass = checks.iter().all(|c| c.passed);
    let records = checks
        .into_iter()
        .map(|c| {
            ResultRecord::new()
                .with("check", c.name)
                .with("cases", c.cases)
                .with("passed", c.passed)
                .with("detail", c.detail.unwrap_or_default())
                .with("status", if c.passed { STATUS_OK } else { STATUS_CHECK_FAILED })
        })
        .collect();
    Ok(Produced {
        records,
        artifacts: Vec::new(),
        all_pass,
    })
}

/// Files under `dir` (non-recursive) other than `config.json`, sorted.
pub fn result_files(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.file_name().map(|f| f != "config.json").unwrap_or(false))
        .collect();
    v.sort();
    Ok(v)
}
