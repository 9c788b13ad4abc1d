//! Argument handling and dispatch for the `grz` binary.

pub mod document;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grz_core::certify::{
    default_degree, run_desk_grz, run_lemma3_grid, run_roots, run_suite, ResourceCaps, RunManifest,
    Suite, SuiteOptions, DEFAULT_MAX_MONOMIALS, DEFAULT_MAX_PARTITIONS, DEFAULT_N_MAX,
};
use grz_core::exact::parse_rational;
use grz_core::grz::{BlockId, Status};
use grz_core::series::multi_inverse_grz;
use grz_core::GrzError;

pub use document::ReportDocument;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const MAX_MONOMIALS_ENV: &str = "GRZ_MAX_MONOMIALS";

#[derive(Debug, Parser)]
#[command(name = "grz", version, about = "Exact coefficient-positivity checks for 1/(1 - e1 + r! e_r)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for randomized parameter choices.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Ignore the resource caps.
    #[arg(long, global = true)]
    pub force: bool,
    /// Largest expansion allowed, in monomials [env: GRZ_MAX_MONOMIALS].
    #[arg(long, global = true)]
    pub max_monomials: Option<u64>,
    /// Largest partition scan allowed.
    #[arg(long, global = true)]
    pub max_partitions: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expand the series to a total degree and look for negative coefficients.
    Expand {
        #[arg(long)]
        r: u32,
        /// Defaults to min(16, 4r).
        #[arg(long)]
        degree: Option<u32>,
        /// Include every stored coefficient in the report.
        #[arg(long)]
        emit_series: bool,
    },
    /// Isolate the real roots of the block polynomial h.
    Roots {
        #[arg(long)]
        r: u32,
        #[arg(long, conflicts_with = "n_max")]
        n: Option<u32>,
        #[arg(long, requires = "n")]
        l: Option<u32>,
        /// Certify every block with 1 <= n <= N and 0 <= l < r instead.
        #[arg(long)]
        n_max: Option<u32>,
    },
    /// Run one or all certification suites.
    Certify {
        #[arg(long)]
        r: u32,
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Single scalar for the lemma2 suite, as p/q.
        #[arg(long, allow_hyphen_values = true)]
        b: Option<String>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        dmax: Option<u32>,
        #[arg(long)]
        n_max: Option<u32>,
        #[arg(long)]
        kl_max: Option<u32>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Lemma2,
    Lemma3,
    Lemma4,
    Lemma5,
    Theorem,
    Remark,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Lemma2 => Suite::Lemma2,
            SuiteArg::Lemma3 => Suite::Lemma3,
            SuiteArg::Lemma4 => Suite::Lemma4,
            SuiteArg::Lemma5 => Suite::Lemma5,
            SuiteArg::Theorem => Suite::Theorem,
            SuiteArg::Remark => Suite::Remark,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] GrzError),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot write csv: {0}")]
    Csv(#[from] csv::Error),
}

fn caps_from(common: &CommonArgs, env_monomials: Option<&str>) -> Result<ResourceCaps, CliError> {
    let env_value = match env_monomials {
        Some(v) => Some(v.trim().parse::<u64>().map_err(|_| {
            CliError::Usage(format!("{MAX_MONOMIALS_ENV} must be a non-negative integer, got {v:?}"))
        })?),
        None => None,
    };
    Ok(ResourceCaps {
        max_monomials: common.max_monomials.or(env_value).unwrap_or(DEFAULT_MAX_MONOMIALS),
        max_partitions: common.max_partitions.unwrap_or(DEFAULT_MAX_PARTITIONS),
        force: common.force,
    })
}

/// Runs a parsed command and builds its document.
pub fn execute(
    cli: &Cli,
    command_echo: Vec<String>,
    env_monomials: Option<&str>,
) -> Result<ReportDocument, CliError> {
    let caps = caps_from(&cli.common, env_monomials)?;
    let (manifest, series): (RunManifest, _) = match &cli.command {
        Command::Expand { r, degree, emit_series } => {
            let degree = degree.unwrap_or_else(|| default_degree(*r));
            let manifest = run_desk_grz(*r, degree, caps)?;
            let series = if *emit_series {
                Some(multi_inverse_grz(*r, degree, caps.monomials())?)
            } else {
                None
            };
            (manifest, series)
        }
        Command::Roots { r, n, l, n_max } => {
            let manifest = match n {
                Some(n) => run_roots(BlockId::new(*r, *n, l.unwrap_or(0))?)?,
                None => run_lemma3_grid(*r, n_max.unwrap_or(DEFAULT_N_MAX))?,
            };
            (manifest, None)
        }
        Command::Certify { r, suite, b, order, dmax, n_max, kl_max } => {
            let opts = SuiteOptions {
                r: *r,
                b: b.as_deref().map(parse_rational).transpose()?,
                order: *order,
                n_max: *n_max,
                d_max: *dmax,
                kl_max: *kl_max,
                seed: cli.common.seed,
                caps,
            };
            (run_suite((*suite).into(), &opts)?, None)
        }
    };
    Ok(ReportDocument::new(command_echo, manifest, series))
}

pub fn render(doc: &ReportDocument, format: Format) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => doc.to_json(),
        Format::Csv => doc.to_csv()?,
    })
}

pub fn exit_code(doc: &ReportDocument) -> i32 {
    if doc.manifest.status == Status::Pass {
        EXIT_PASS
    } else {
        EXIT_VIOLATION
    }
}

fn summary(doc: &ReportDocument) -> String {
    let m = &doc.manifest;
    let failed = m.reports.iter().filter(|r| r.status == Status::Fail).count();
    let flagged = m.reports.iter().filter(|r| r.status == Status::Flagged).count();
    let status = serde_json::to_value(m.status).ok().and_then(|v| v.as_str().map(String::from));
    format!(
        "{}: {} ({} checks, {} failed, {} flagged, {} unexpected)",
        m.suite,
        status.unwrap_or_default(),
        m.reports.len(),
        failed,
        flagged,
        m.unexpected_failures
    )
}

fn run_parsed(cli: &Cli, echo: Vec<String>) -> Result<i32, CliError> {
    let env = std::env::var(MAX_MONOMIALS_ENV).ok();
    let work = || -> Result<ReportDocument, CliError> { execute(cli, echo, env.as_deref()) };
    let doc = match cli.common.jobs {
        Some(0) => return Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    let text = render(&doc, cli.common.format)?;
    match &cli.common.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    eprintln!("{}", summary(&doc));
    Ok(exit_code(&doc))
}

/// Entry point shared by the binary and tests; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let echo = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match run_parsed(&cli, echo) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
