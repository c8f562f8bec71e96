use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fockbundle::{config::DEFAULT_THETA, Axis, Error, Format, Suite, SuiteConfig};

#[derive(Parser, Debug)]
#[command(name = "fockbundle", version, about = "Grid verification of the operator-valued Hopf bundle and its relatives")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run suites and write a report. Exit 0 if every check passes, 1 if
    /// any fails, 2 on a configuration error.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Record per-job wall time (makes the report non-reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Run suites over an axis and write one CSV row per value.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        axis: Axis,
        /// Axis values, comma separated.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        values: Vec<f64>,
    },
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    /// Detuning; repeat for several values. Defaults to 1, or to
    /// (delta - omega)/2g when both are given.
    #[arg(long, allow_negative_numbers = true)]
    theta: Vec<f64>,
    #[arg(long, default_value_t = fockbundle::config::DEFAULT_N_MAX)]
    nmax: u64,
    #[arg(long, default_value_t = fockbundle::config::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    g: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    t: f64,
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn config(&self) -> Result<SuiteConfig, Error> {
        let mut theta_list = self.theta.clone();
        if theta_list.is_empty() {
            let derived = match (self.omega, self.delta) {
                (Some(w), Some(d)) => (d - w) / (2.0 * self.g),
                _ => DEFAULT_THETA,
            };
            theta_list.push(derived);
        }
        let cfg = SuiteConfig {
            suite: self.suite,
            theta_list,
            n_max: self.nmax,
            tol: self.tol,
            g: self.g,
            t: self.t,
            omega: self.omega,
            delta: self.delta,
            seed: self.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => Ok(std::io::stdout().write_all(body.as_bytes())?),
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Verify { common, format, timings } => {
            let cfg = common.config()?;
            let report = fockbundle::run(&cfg, timings)?;
            emit(&common.out, &report.render(format)?)?;
            for f in report.failures() {
                eprintln!("FAIL {} {} {}", f.suite.name(), f.theta.map(|t| t.to_string()).unwrap_or_default(), f.outcome.name);
            }
            Ok(report.pass)
        }
        Command::Sweep { common, axis, values } => {
            let cfg = common.config()?;
            emit(&common.out, &fockbundle::sweep(&cfg, axis, &values)?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
