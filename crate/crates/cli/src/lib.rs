//! Batch runner for the verification suites.
//!
//! `run` parses arguments, merges them over an optional TOML config, runs the
//! requested suites and writes one record per check. Exit codes: 0 when every
//! check passes, 1 when any fails, 2 on usage or configuration errors.

pub mod config;
pub mod report;
pub mod suites;

use clap::Parser;
use std::io::Write;
use std::path::PathBuf;

pub use config::{BackendName, FieldLiteral, Format, ModeName, ModelName, SuiteConfig, SuiteName};
pub use report::{Record, SummaryRow};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] sigma_forge_core::Error),
    #[error("io: {0}")]
    Io(String),
}

#[derive(Debug, Parser)]
#[command(name = "sigma-forge", about = "Run the weighted sigma_k verification suites")]
pub struct Args {
    /// suite to run; may also come from the config file
    #[arg(value_enum)]
    pub suite: Option<SuiteName>,
    /// TOML file with the same keys as the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub backend: Option<BackendName>,
    #[arg(long)]
    pub n: Option<usize>,
    /// largest k checked
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeName>,
    /// explicit λ, overriding --mode
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Gauss–Hermite order per axis (euclidean) or product order (sphere)
    #[arg(long)]
    pub quad_order: Option<usize>,
    /// points per axis on the torus
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// multiplies every default tolerance
    #[arg(long)]
    pub tol_scale: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// suites run in parallel with `all`
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, value_enum)]
    pub model: Option<ModelName>,
}

impl Args {
    fn overrides(&self) -> SuiteConfig {
        SuiteConfig {
            suite: self.suite,
            backend: self.backend,
            n: self.n,
            k: self.k,
            tau: self.tau,
            mode: self.mode,
            lambda: self.lambda,
            quad_order: self.quad_order,
            grid: self.grid,
            seed: self.seed,
            samples: self.samples,
            tol_scale: self.tol_scale,
            out: self.out.clone(),
            format: self.format,
            jobs: self.jobs,
            model: self.model,
            ..Default::default()
        }
    }
}

/// Runs the configured suites; with `jobs > 1` the suites of `all` run on
/// separate threads and their records are concatenated in suite order.
pub fn execute(cfg: &SuiteConfig) -> Result<Vec<Record>, CliError> {
    let suite = cfg.suite.ok_or_else(|| CliError::Config("no suite given".into()))?;
    let names = suite.expand();
    let jobs = cfg.jobs.unwrap_or(1).min(names.len());
    if jobs <= 1 {
        let mut out = Vec::new();
        for s in names {
            out.extend(suites::run_suite(s, cfg)?);
        }
        return Ok(out);
    }
    let chunks: Vec<Vec<SuiteName>> = names.chunks(names.len().div_ceil(jobs)).map(|c| c.to_vec()).collect();
    let results: Vec<Result<Vec<Record>, CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .iter()
            .map(|chunk| {
                scope.spawn(move || {
                    let mut out = Vec::new();
                    for s in chunk {
                        out.extend(suites::run_suite(*s, cfg)?);
                    }
                    Ok(out)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

fn emit(cfg: &SuiteConfig, records: &[Record]) -> Result<(), CliError> {
    let format = cfg.format.unwrap_or_default();
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match &cfg.out {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(io)?;
            let w = std::io::BufWriter::new(file);
            match format {
                Format::Jsonl => {
                    report::write_jsonl(w, records)?;
                    let summary = std::fs::File::create(path.with_extension("summary.csv")).map_err(io)?;
                    report::write_csv(summary, &report::summarize(records))?;
                }
                Format::Csv => report::write_csv(w, records)?,
            }
        }
        None => {
            let stdout = std::io::stdout().lock();
            match format {
                Format::Jsonl => report::write_jsonl(stdout, records)?,
                Format::Csv => report::write_csv(stdout, records)?,
            }
        }
    }
    let mut err = std::io::stderr().lock();
    for s in report::summarize(records) {
        writeln!(err, "{}: {} checks, {} failed", s.suite, s.checks, s.failed).map_err(io)?;
    }
    for r in records.iter().filter(|r| !r.pass) {
        writeln!(err, "FAIL {}/{}: residual {:e} > tol {:e}", r.suite, r.check_id, r.residual, r.tol).map_err(io)?;
    }
    Ok(())
}

/// Entry point behind the binary; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let outcome = (|| {
        let file = match &args.config {
            Some(p) => SuiteConfig::load(p)?,
            None => SuiteConfig::default(),
        };
        let cfg = file.overridden_by(&args.overrides());
        cfg.validate()?;
        let records = execute(&cfg)?;
        emit(&cfg, &records)?;
        Ok::<_, CliError>(records.iter().all(|r| r.pass))
    })();
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("sigma-forge: {e}");
            2
        }
    }
}
