//! `cartan`: run built-in or file-defined verification scenarios.
//!
//! Exit status is 0 when every check passes (discrepancy notes included),
//! 1 when any check fails and 2 when the input cannot be used.

mod spec;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use cartan_core::report::Report;
use cartan_core::scenarios::{builtin, RunOptions, Scenario, BUILTINS, CHECK_NAMES};
use cartan_core::symexpr::Sampling;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "cartan", version, about = "Symbolic Riemann-Cartan geometry checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a spec file, or a built-in scenario with --builtin
    Run {
        /// path to a cartan-spec/1 JSON file
        #[arg(required_unless_present = "builtin", conflicts_with = "builtin")]
        spec: Option<PathBuf>,
        /// run a built-in scenario instead (see `cartan list`)
        #[arg(long, value_name = "NAME")]
        builtin: Option<String>,
        #[command(flatten)]
        opts: Opts,
    },
    /// Run a built-in scenario
    Check {
        scenario: String,
        #[command(flatten)]
        opts: Opts,
    },
    /// List built-in scenarios and check names
    List,
}

#[derive(Args)]
struct Opts {
    /// run only this check (repeatable)
    #[arg(long = "check", value_name = "NAME")]
    checks: Vec<String>,
    /// sample points per numeric comparison
    #[arg(long, default_value_t = Sampling::default().samples, value_parser = clap::value_parser!(usize))]
    samples: usize,
    /// tolerance for residuals and value comparisons
    #[arg(long, default_value_t = Sampling::default().tol)]
    tol: f64,
    /// seed for randomly generated test forms
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// also write the JSON report to this path (`-` prints it instead of the text report)
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

impl Opts {
    fn sampling(&self) -> Result<Sampling, String> {
        if self.samples == 0 {
            return Err("--samples must be positive".into());
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err("--tol must be a positive number".into());
        }
        Ok(Sampling { samples: self.samples, tol: self.tol })
    }

    fn run_options(&self) -> Result<RunOptions, String> {
        Ok(RunOptions {
            sampling: self.sampling()?,
            seed: self.seed,
            only: (!self.checks.is_empty()).then(|| self.checks.clone()),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(report) => match report {
            Some(r) if r.failed() => ExitCode::from(1),
            _ => ExitCode::SUCCESS,
        },
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Command) -> Result<Option<Report>, String> {
    match cmd {
        Command::List => {
            println!("scenarios:");
            for b in BUILTINS {
                println!("  {b}");
            }
            println!("checks:");
            for c in CHECK_NAMES {
                println!("  {c}");
            }
            Ok(None)
        }
        Command::Check { scenario, opts } => {
            let sc = builtin(&scenario).map_err(|e| e.to_string())?;
            execute(&sc, &opts).map(Some)
        }
        Command::Run { spec, builtin: name, opts } => {
            let sc = match (spec, name) {
                (_, Some(name)) => builtin(&name).map_err(|e| e.to_string())?,
                (Some(path), None) => {
                    let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                    spec::load(&text, opts.sampling()?).map_err(|e| format!("{}: {e}", path.display()))?
                }
                (None, None) => unreachable!("clap requires one of them"),
            };
            execute(&sc, &opts).map(Some)
        }
    }
}

fn execute(sc: &Scenario, opts: &Opts) -> Result<Report, String> {
    let report = sc.run(&opts.run_options()?).map_err(|e| e.to_string())?;
    match opts.json.as_deref() {
        Some(p) if p.as_os_str() == "-" => print!("{}", report.to_json()),
        Some(p) => {
            fs::write(p, report.to_json()).map_err(|e| format!("{}: {e}", p.display()))?;
            print!("{}", report.to_text());
        }
        None => print!("{}", report.to_text()),
    }
    Ok(report)
}
