//! Driver for the `lfam` binary: argument parsing, config layering, the
//! worker pool and report emission. Library code in `lfam-core` never
//! spawns threads; every parallel sweep goes through [`commands::Ctx`].

pub mod cache;
pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde::Serialize;

use crate::cache::Cache;
use crate::commands::{CliError, Command, Ctx};
use crate::config::{Format, RunConfig};
use crate::output::{Failure, Outcome};

#[derive(Debug, Parser)]
#[command(
    name = "lfam",
    version,
    about = "Level-one eigenform L-function experiments"
)]
pub struct Cli {
    /// Config file (`key = value` lines under `[section]` headers).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Directory for `<command>.json` and `<command>.csv`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Eigenvalue cache; overrides the environment and the config file.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Print the effective config and exit.
    #[arg(long, global = true)]
    pub print_config: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Effective config: defaults, then the file, then flags.
pub fn effective_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut c = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(t) = cli.threads {
        c.threads = t;
    }
    if let Some(f) = cli.format {
        c.format = f;
    }
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    cli.command.apply(&mut c);
    c.validate()?;
    Ok(c)
}

#[derive(Serialize)]
struct Document<'a> {
    command: &'a str,
    config: &'a RunConfig,
    report: &'a serde_json::Value,
    failures: &'a [Failure],
}

#[derive(Serialize)]
struct FailureList<'a> {
    command: &'a str,
    failures: &'a [Failure],
}

fn write_file(dir: &Path, name: &str, body: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .and_then(|_| std::fs::write(dir.join(name), body))
        .map_err(|e| CliError::Io(format!("{}: {e}", dir.join(name).display())))
}

fn emit(cli: &Cli, config: &RunConfig, outcome: &Outcome) -> Result<(), CliError> {
    let name = cli.command.name();
    let doc = Document {
        command: name,
        config,
        report: &outcome.report,
        failures: &outcome.failures,
    };
    let mut json = serde_json::to_string_pretty(&doc).expect("documents serialise");
    json.push('\n');
    let csv = outcome.csv.as_ref().map(|c| c.render());
    if let Some(dir) = &cli.out {
        write_file(dir, &format!("{name}.json"), &json)?;
        if let Some(csv) = &csv {
            write_file(dir, &format!("{name}.csv"), csv)?;
        }
    }
    let body = match (config.format, &csv) {
        (Format::Csv, Some(csv)) => csv.as_str(),
        _ => json.as_str(),
    };
    use std::io::Write;
    std::io::stdout()
        .lock()
        .write_all(body.as_bytes())
        .map_err(|e| CliError::Io(format!("stdout: {e}")))
}

fn report_failures(name: &str, failures: &[Failure]) {
    let list = FailureList {
        command: name,
        failures,
    };
    eprintln!(
        "{}",
        serde_json::to_string(&list).expect("failures serialise")
    );
}

/// Run the binary on `args` and return its exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let name = cli.command.name();
    let result = effective_config(&cli).and_then(|config| {
        if cli.print_config {
            print!("{}", config.emit());
            return Ok(0);
        }
        let dir = cache::resolve_dir(cli.cache_dir.as_deref(), config.cache_dir.as_deref());
        let cache = Cache::new(dir, config.length_budget);
        let ctx = Ctx::new(config, cache)?;
        let outcome = cli.command.run(&ctx)?;
        emit(&cli, &ctx.config, &outcome)?;
        if outcome.failures.is_empty() {
            Ok(0)
        } else {
            report_failures(name, &outcome.failures);
            Ok(1)
        }
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("lfam {name}: {e}");
            let code = e.exit_code();
            if code == 1 {
                report_failures(
                    name,
                    &[Failure::new(
                        "computation",
                        e.to_string(),
                        f64::NAN,
                        f64::NAN,
                    )],
                );
            }
            code
        }
    }
}
