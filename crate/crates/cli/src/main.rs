use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use dbu_lab::oracle::oracle_suite;
use dbu_lab::runner::{run, sweep, RunConfig, RunFailure};
use dbu_lab::special::{airy_ai, bessel_k, pearcey};
use serde_json::{json, Value};

/// Exit code for configuration and validation errors.
const EXIT_VALIDATION: u8 = 2;
/// Exit code when a run blows up numerically.
const EXIT_DIVERGENCE: u8 = 3;

#[derive(Parser)]
#[command(name = "dbu-lab", version, about = "Dispersive blow-up simulations and diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration and print its report as JSON
    Simulate { config: PathBuf },
    /// Run a configuration once per value of a dotted parameter path
    Sweep {
        config: PathBuf,
        /// Dotted path into the configuration, e.g. `data.delta` or `grid.L`
        #[arg(long)]
        axis: String,
        /// Comma-separated values, each parsed as JSON
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
    },
    /// Cross-check the fast paths against the quadrature oracles
    OracleCheck,
    /// Tabulate a special function as CSV on stdout
    Specfun {
        name: SpecialName,
        /// start:stop:count
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        /// Second argument: `y` for pearcey, the order for bessel_k
        #[arg(long, allow_hyphen_values = true)]
        second: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum SpecialName {
    Airy,
    Pearcey,
    BesselK,
}

fn parse_range(s: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        bail!("range must be start:stop:count, got '{s}'");
    }
    let a: f64 = parts[0].parse().with_context(|| format!("bad start in '{s}'"))?;
    let b: f64 = parts[1].parse().with_context(|| format!("bad stop in '{s}'"))?;
    let n: usize = parts[2].parse().with_context(|| format!("bad count in '{s}'"))?;
    if n == 0 {
        bail!("range count must be positive");
    }
    Ok((0..n)
        .map(|k| if n == 1 { a } else { a + (b - a) * k as f64 / (n - 1) as f64 })
        .collect())
}

fn specfun(name: SpecialName, range: &str, second: Option<f64>) -> anyhow::Result<()> {
    let xs = parse_range(range)?;
    if matches!(name, SpecialName::BesselK) && second.is_none() {
        bail!("bessel_k needs --second <order>");
    }
    println!("arg1,arg2,re,im,est_error,method");
    for x in xs {
        let (arg2, v) = match name {
            SpecialName::Airy => (None, airy_ai(x)),
            SpecialName::Pearcey => {
                let y = second.unwrap_or(0.0);
                (Some(y), pearcey(x, y))
            }
            SpecialName::BesselK => {
                let nu = second.unwrap_or_default();
                (Some(nu), bessel_k(nu, x))
            }
        };
        let v = v.map_err(|e| anyhow!("{e}"))?;
        let a2 = arg2.map(|y| y.to_string()).unwrap_or_default();
        println!("{x},{a2},{:e},{:e},{:e},{}", v.value.re, v.value.im, v.est_error, v.method);
    }
    Ok(())
}

fn failure_code(f: &RunFailure) -> u8 {
    f.exit_code() as u8
}

fn simulate(path: &PathBuf) -> ExitCode {
    let outcome = RunConfig::from_path(path).and_then(|c| run(&c).map_err(|f| f.at(path)));
    match outcome {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("report serialises"));
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(failure_code(&f))
        }
    }
}

fn sweep_cmd(path: &PathBuf, axis: &str, values: &[String]) -> ExitCode {
    let base = match RunConfig::from_path(path) {
        Ok(c) => c,
        Err(f) => {
            eprintln!("error: {f}");
            return ExitCode::from(failure_code(&f));
        }
    };
    let values: Vec<Value> = values
        .iter()
        .map(|v| serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.clone())))
        .collect();
    let points = match sweep(&base, axis, &values) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: [cli_runner] {}: {e}", path.display());
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    let mut code = 0u8;
    for p in points {
        match p.outcome {
            Ok(r) => println!(
                "{}",
                json!({"axis": axis, "value": p.value, "status": "ok", "checksum": r.checksum,
                       "final_max_modulus": r.snapshots.last().map(|s| s.max_modulus), "report": r})
            ),
            Err(f) => {
                let f = f.at(path);
                eprintln!("error: {axis}={}: {f}", p.value);
                println!("{}", json!({"axis": axis, "value": p.value, "status": "failed", "exit_code": f.exit_code(), "error": f.to_string()}));
                let c = failure_code(&f);
                code = match (code, c) {
                    (EXIT_DIVERGENCE, _) | (_, EXIT_DIVERGENCE) => EXIT_DIVERGENCE,
                    (EXIT_VALIDATION, _) | (_, EXIT_VALIDATION) => EXIT_VALIDATION,
                    _ => 1,
                };
            }
        }
    }
    ExitCode::from(code)
}

fn oracle_check() -> ExitCode {
    match oracle_suite() {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("report serialises"));
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: [oracle] {e}");
            ExitCode::from(if e.is_validation() { EXIT_VALIDATION } else { 1 })
        }
    }
}

fn configure_workers() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("DBU_WORKERS") {
        let n: usize = v.parse().with_context(|| format!("DBU_WORKERS must be a positive integer, got '{v}'"))?;
        if n == 0 {
            bail!("DBU_WORKERS must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
        log::info!("using {n} worker threads");
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    if let Err(e) = configure_workers() {
        eprintln!("error: [cli_runner] {e}");
        return ExitCode::from(EXIT_VALIDATION);
    }
    match cli.command {
        Command::Simulate { config } => simulate(&config),
        Command::Sweep { config, axis, values } => sweep_cmd(&config, &axis, &values),
        Command::OracleCheck => oracle_check(),
        Command::Specfun { name, range, second } => match specfun(name, &range, second) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: [special_functions] {e:#}");
                ExitCode::from(EXIT_VALIDATION)
            }
        },
    }
}
