//! `sce` command-line front end: argument handling, dispatch and exit codes.
//!
//! Exit codes: 0 clean, 1 usage or configuration error, 2 coverage, resource or
//! I/O error, 3 an inequality or identity failed inside its stated domain,
//! 4 a Goldbach failure (`d_E = 0` for some `E != 4`, or any E with `--strict`).

pub mod report;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use sce_core::bounds::{self, BoundConstant, BoundFn, PRINTED_F35_ROOT, PRINTED_THRESHOLD_235, PRINTED_THRESHOLD_24};
use sce_core::prime_table::PrimeTable;
use sce_core::verify::{self, ScanConfig, ScanKind, ScanReport, DEFAULT_CHUNK_SIZE};
use sce_core::Error;

use report::{Format, ThresholdRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_INEQUALITY: i32 = 3;
pub const EXIT_GOLDBACH: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "sce", version, about = "Quadruple decomposition and bound scans for even numbers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Sieve limit; defaults to the largest number the command needs.
    #[arg(long, global = true)]
    pub limit: Option<u64>,

    /// Upper multiplier c in pi(x) <= c x / ln x.
    #[arg(long, global = true, default_value_t = bounds::DEFAULT_UPPER)]
    pub constant: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads for range scans; defaults to the available parallelism.
    #[arg(long, global = true, env = "SCE_WORKERS")]
    pub workers: Option<usize>,

    /// Resume from and save progress to this JSON file.
    #[arg(long, global = true, env = "SCE_CHECKPOINT")]
    pub checkpoint: Option<PathBuf>,

    /// Even numbers per scan chunk.
    #[arg(long, global = true, default_value_t = DEFAULT_CHUNK_SIZE)]
    pub chunk_size: u64,

    /// Treat E = 4 as a Goldbach failure too.
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct RangeArgs {
    #[arg(long)]
    pub from: u64,
    #[arg(long)]
    pub to: u64,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Quadruple (a, b, c, d) and wings of one even number.
    Decompose { e: u64 },
    /// Additive interactions of one even number and their classes.
    Interactions { e: u64 },
    /// The 75 structural types.
    Types,
    /// Structural type counts over a range of even numbers.
    Census(RangeArgs),
    /// d_E > 0 over a range of even numbers.
    Goldbach(RangeArgs),
    /// Inequality suite for one even number or a range.
    Bounds {
        e: Option<u64>,
        #[arg(long, requires = "to", conflicts_with = "e")]
        from: Option<u64>,
        #[arg(long, requires = "from")]
        to: Option<u64>,
    },
    /// Dusart bounds at every integer of a range.
    Dusart(RangeArgs),
    /// Roots of f_35 and the two threshold differences.
    Thresholds {
        #[arg(long, default_value_t = bounds::DEFAULT_TOL)]
        tol: f64,
    },
    /// Theorem, inequality and identity checks over a range of even numbers.
    Theorem(RangeArgs),
}

/// A validated invocation.
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub command: Command,
    pub limit: u64,
    pub constant: BoundConstant,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub workers: usize,
    pub checkpoint: Option<PathBuf>,
    pub chunk_size: u64,
    pub strict: bool,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(e) => match e {
                Error::InvalidArgument(_) | Error::Domain { .. } | Error::Bracket { .. } => EXIT_USAGE,
                Error::OutOfCoverage { .. }
                | Error::Resource(_)
                | Error::Checkpoint { .. }
                | Error::Io(_)
                | Error::Json(_) => EXIT_RESOURCE,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn check_even_range(r: RangeArgs) -> Result<(), CliError> {
    if r.from < 2 || r.from % 2 != 0 || r.to % 2 != 0 {
        return Err(usage(format!(
            "--from and --to must be even and at least 2 (got {} and {})",
            r.from, r.to
        )));
    }
    if r.from > r.to {
        return Err(usage(format!("--from {} is greater than --to {}", r.from, r.to)));
    }
    Ok(())
}

impl CliConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let needed = match &cli.command {
            Command::Decompose { e } | Command::Interactions { e } => {
                if *e < 2 || e % 2 != 0 {
                    return Err(usage(format!("E must be even and at least 2, got {e}")));
                }
                *e
            }
            Command::Types | Command::Thresholds { .. } => 2,
            Command::Census(r) | Command::Goldbach(r) | Command::Theorem(r) => {
                check_even_range(*r)?;
                r.to
            }
            Command::Bounds { e, from, to } => match (e, from, to) {
                (Some(e), None, None) => {
                    check_even_range(RangeArgs { from: *e, to: *e })?;
                    *e
                }
                (None, Some(from), Some(to)) => {
                    let r = RangeArgs { from: *from, to: *to };
                    check_even_range(r)?;
                    r.to
                }
                _ => return Err(usage("bounds takes either E or --from/--to")),
            },
            Command::Dusart(r) => {
                if r.from < 2 || r.from > r.to {
                    return Err(usage(format!(
                        "dusart needs 2 <= --from <= --to (got {} and {})",
                        r.from, r.to
                    )));
                }
                r.to
            }
        };
        let limit = cli.options.limit.unwrap_or(needed).max(2);
        if limit < needed {
            return Err(usage(format!(
                "--limit {limit} is below the largest number referenced ({needed})"
            )));
        }
        let constant = BoundConstant::new(cli.options.constant)
            .map_err(|e| usage(e.to_string()))?;
        if cli.options.chunk_size == 0 {
            return Err(usage("--chunk-size must be positive"));
        }
        let workers = match cli.options.workers {
            Some(0) => return Err(usage("--workers must be positive")),
            Some(n) => n,
            None => verify::default_workers(),
        };
        if let Command::Thresholds { tol } = cli.command {
            if !(tol > 0.0) {
                return Err(usage(format!("--tol must be positive, got {tol}")));
            }
        }
        Ok(CliConfig {
            command: cli.command,
            limit,
            constant,
            format: cli.options.format,
            output: cli.options.output,
            workers,
            checkpoint: cli.options.checkpoint,
            chunk_size: cli.options.chunk_size,
            strict: cli.options.strict,
        })
    }

    fn scan_config(&self) -> ScanConfig {
        ScanConfig {
            chunk_size: self.chunk_size,
            workers: self.workers,
            constant: self.constant,
            checkpoint: self.checkpoint.clone(),
        }
    }

    fn goldbach_code(&self, report: &ScanReport) -> i32 {
        let failed = if self.strict {
            !report.goldbach_failures.is_empty()
        } else {
            report.unexpected_goldbach_failures().next().is_some()
        };
        if failed {
            EXIT_GOLDBACH
        } else {
            EXIT_OK
        }
    }
}

/// A rendered report and the exit code its findings call for.
#[derive(Debug)]
pub struct Rendered {
    pub text: String,
    pub code: i32,
}

/// Runs a validated command and renders its report.
pub fn execute(config: &CliConfig) -> Result<Rendered, CliError> {
    let format = config.format;
    let c = config.constant;
    let table = || PrimeTable::build(config.limit);
    let done = |text: String| Ok(Rendered { text, code: EXIT_OK });

    match &config.command {
        Command::Decompose { e } => {
            let dec = sce_core::decompose(*e, &table()?)?;
            done(report::decomposition(&dec, format))
        }
        Command::Interactions { e } => done(report::interactions(*e, &table()?, format)?),
        Command::Types => done(report::types(format)),
        Command::Census(r) => {
            let rep = verify::run_scan(ScanKind::Census, r.from, r.to, &table()?, &config.scan_config())?;
            done(report::census(&rep, format))
        }
        Command::Goldbach(r) => {
            let rep = verify::run_scan(ScanKind::Goldbach, r.from, r.to, &table()?, &config.scan_config())?;
            Ok(Rendered {
                code: config.goldbach_code(&rep),
                text: report::scan(&rep, format),
            })
        }
        Command::Theorem(r) => {
            let rep = verify::run_scan(ScanKind::Theorem, r.from, r.to, &table()?, &config.scan_config())?;
            let violated = rep
                .theorem_violations
                .iter()
                .any(|&e| config.strict || e != 4);
            let code = if violated {
                EXIT_GOLDBACH
            } else {
                match config.goldbach_code(&rep) {
                    EXIT_OK if rep.has_bound_failures() || !rep.identity_failures.is_empty() => {
                        EXIT_INEQUALITY
                    }
                    code => code,
                }
            };
            Ok(Rendered {
                text: report::scan(&rep, format),
                code,
            })
        }
        Command::Bounds { e, from, to } => {
            let t = table()?;
            let (lo, hi) = match e {
                Some(e) => (*e, *e),
                None => (from.expect("validated"), to.expect("validated")),
            };
            let mut rows = Vec::with_capacity(((hi - lo) / 2 + 1) as usize);
            for e in (lo..=hi).step_by(2) {
                rows.push(bounds::check_bounds(&sce_core::decompose(e, &t)?, c));
            }
            let failed = rows
                .iter()
                .any(|r| r.entries().iter().any(|(_, o)| o.is_failure()));
            Ok(Rendered {
                text: report::bound_reports(&rows, format),
                code: if failed { EXIT_INEQUALITY } else { EXIT_OK },
            })
        }
        Command::Dusart(r) => {
            let scan = verify::dusart_scan(r.from, r.to, &table()?, c)?;
            Ok(Rendered {
                code: if scan.has_failures() { EXIT_INEQUALITY } else { EXIT_OK },
                text: report::dusart(&scan, format),
            })
        }
        Command::Thresholds { tol } => done(report::thresholds(&threshold_rows(*tol, c), format)),
    }
}

/// Root searches for `f_35` and the two threshold differences, with the printed values.
pub fn threshold_rows(tol: f64, c: BoundConstant) -> Vec<ThresholdRow> {
    [
        (BoundFn::F35, 100.0, 200.0, PRINTED_F35_ROOT),
        (BoundFn::Threshold235, 100.0, 1e6, PRINTED_THRESHOLD_235),
        (BoundFn::Threshold24, 100.0, 1e6, PRINTED_THRESHOLD_24),
    ]
    .into_iter()
    .map(|(f, lo, hi, printed)| {
        let found = bounds::find_root(f, lo, hi, tol, c);
        ThresholdRow {
            id: f.id(),
            lo,
            hi,
            printed,
            error: found.as_ref().err().map(ToString::to_string),
            root: found.ok(),
        }
    })
    .collect()
}

/// Parses `args`, runs the command and writes the report. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = CliConfig::from_cli(cli).and_then(|config| {
        let outcome = execute(&config)?;
        match &config.output {
            Some(path) => fs::write(path, &outcome.text).map_err(|e| CliError::Core(e.into()))?,
            None => stdout
                .write_all(outcome.text.as_bytes())
                .map_err(|e| CliError::Core(e.into()))?,
        }
        Ok(outcome.code)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
