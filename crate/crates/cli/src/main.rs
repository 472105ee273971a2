use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fractoda::{Equilibrium, ParamSet};
use fractoda_cli::error::{EXIT_DIVERGED, EXIT_OK};
use fractoda_cli::sweep::Axis;
use fractoda_cli::{analyze, load_run_config, reproduce, simulate, sweep, CliError, Result};

/// Stability analysis and simulation of the controlled fractional Toda lattice.
#[derive(Parser)]
#[command(name = "fractoda", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a configuration and write the trajectory as CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Write five orbit plots, PATH_x1.svg .. PATH_x5.svg.
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        /// CSV destination, `-` for stdout; overrides `out` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Initial offset direction, five comma-separated values.
        #[arg(long, value_delimiter = ',', num_args = 5, allow_negative_numbers = true)]
        perturbation: Option<Vec<f64>>,
        /// Override a config value; repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Eigenvalues, critical order and verdicts at one equilibrium.
    #[command(allow_negative_numbers = true)]
    Analyze {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        /// Required for the controlled system.
        #[arg(long)]
        c1: Option<f64>,
        #[arg(long)]
        c2: Option<f64>,
        #[arg(long)]
        c3: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        k: f64,
        #[arg(long, default_value_t = 0.0)]
        m: f64,
        #[arg(long)]
        q: f64,
        /// Analyze the lattice without feedback gains.
        #[arg(long)]
        uncontrolled: bool,
    },
    /// Verdict codes over a grid in two parameters.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// field:lo:hi:n with field one of a, b, c1, c2, c3, k, m, q.
        #[arg(long, allow_hyphen_values = true)]
        axis1: String,
        #[arg(long, allow_hyphen_values = true)]
        axis2: String,
        /// CSV destination, `-` for stdout; overrides `out` in the config.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Rerun a bundled example and compare with its published verdict.
    Reproduce {
        /// Example id; see --list.
        #[arg(required_unless_present = "list")]
        id: Option<String>,
        /// Directory for CSV and SVG output of examples with a simulation.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Print the available ids.
        #[arg(long)]
        list: bool,
    },
}

/// Writes to stdout; a closed pipe (as with `| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::io("<stdout>", e)),
        _ => Ok(()),
    }
}

/// `--out -` forces stdout even when the config names a file.
fn apply_out(cfg: &mut fractoda::RunConfig, out: Option<PathBuf>) {
    match out {
        Some(p) if p.as_os_str() == "-" => cfg.out = None,
        Some(p) => cfg.out = Some(p),
        None => {}
    }
}

fn run(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Simulate {
            config,
            svg,
            out,
            perturbation,
            overrides,
        } => {
            let mut cfg = load_run_config(&config, &overrides)?;
            apply_out(&mut cfg, out);
            if let Some(v) = perturbation {
                let v: [f64; 5] = v
                    .try_into()
                    .map_err(|_| CliError::Usage("--perturbation needs five values".into()))?;
                cfg.integrator = cfg.integrator.with_perturbation(v)?;
            }
            let report = simulate::cmd_simulate(&cfg, svg.as_deref())?;
            if cfg.out.is_none() {
                emit(&report.csv)?;
            }
            if let Some(step) = report.diverged_at() {
                eprintln!("fractoda: trajectory diverged at step {step}");
                return Ok(EXIT_DIVERGED);
            }
            Ok(EXIT_OK)
        }
        Command::Analyze {
            a,
            b,
            c1,
            c2,
            c3,
            k,
            m,
            q,
            uncontrolled,
        } => {
            let gain = |name: &str, v: Option<f64>| match (v, uncontrolled) {
                (Some(v), _) => Ok(v),
                // gains do not enter the uncontrolled field
                (None, true) => Ok(1.0),
                (None, false) => Err(CliError::Usage(format!(
                    "--{name} is required for the controlled system"
                ))),
            };
            let p = ParamSet::new(a, b, gain("c1", c1)?, gain("c2", c2)?, gain("c3", c3)?, q)?;
            let report = analyze::cmd_analyze(&p, &Equilibrium::new(k, m), !uncontrolled)?;
            emit(&report.to_string())?;
            Ok(EXIT_OK)
        }
        Command::Sweep {
            config,
            axis1,
            axis2,
            out,
            overrides,
        } => {
            let mut cfg = load_run_config(&config, &overrides)?;
            apply_out(&mut cfg, out);
            let axis1: Axis = axis1.parse()?;
            let axis2: Axis = axis2.parse()?;
            let report = sweep::cmd_sweep(&cfg, &axis1, &axis2)?;
            if cfg.out.is_none() {
                emit(&report.csv)?;
            }
            Ok(EXIT_OK)
        }
        Command::Reproduce { id, out_dir, list } => {
            if list {
                for e in reproduce::examples() {
                    emit(&format!("{:<14}{}\n", e.id, e.summary))?;
                }
                return Ok(EXIT_OK);
            }
            let id = id.expect("clap enforces id without --list");
            let report = reproduce::cmd_reproduce(&id, out_dir.as_deref())?;
            emit(&report.to_string())?;
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("fractoda: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
