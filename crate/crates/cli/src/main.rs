//! `contactify` command-line front end.
//!
//! Exit status: 0 on success, 1 on malformed input or a domain error (with a
//! JSON error object on standard error), 2 when a verification suite fails.

mod io;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use contactify::contact::SpherePoint;
use contactify::dynamics::{self, Gauge, HamiltonianOnBase, HopfLift, LiftedHamiltonian, LinearZ, Polynomial};
use contactify::integrality::{blocks_from_hermitian, build_report, spectral_blocks, Rational};
use contactify::lie::{CVector, MatrixJson};
use contactify::{orbit, verify};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use io::CliError;

const SEED_ENV: &str = "CONTACTIFY_SEED";

#[derive(Debug, Parser)]
#[command(name = "contactify", version, about = "Coadjoint orbits, integrality and contact dynamics")]
struct Cli {
    /// Seed for sampled checks; the CONTACTIFY_SEED environment variable takes precedence.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Samples per verification suite.
    #[arg(long, global = true, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,

    /// Loosen a suite tolerance, as `suite=value`. Repeatable.
    #[arg(long = "tolerance", global = true, value_name = "SUITE=VALUE")]
    tolerances: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrality report for a rational spectrum or a Hermitian matrix (JSON file, `-` for stdin).
    Integrality { input: PathBuf },
    /// Spectrum and dimensions of the coadjoint orbit through a Hermitian matrix.
    OrbitInfo { input: PathBuf },
    /// Integrate the Euler-Lagrange flow on S^3 and write a trajectory CSV.
    Simulate {
        /// `linear-z` for H = (z+1)/4, or a JSON file with `constant`, `linear`, `quadratic`.
        #[arg(long, default_value = "linear-z")]
        hamiltonian: String,
        /// Initial point as re(z1) im(z1) re(z2) im(z2); renormalized onto S^3.
        #[arg(long, num_args = 4, allow_negative_numbers = true, default_values_t = [1.0, 0.0, 0.0, 0.0])]
        x0: Vec<f64>,
        #[arg(long, default_value_t = 2.0 * PI)]
        t1: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// `orthogonal` or `constant:<c>`.
        #[arg(long, default_value = "orthogonal")]
        gauge: String,
        /// Output CSV path; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Action functional of a trajectory CSV (`-` for stdin).
    Action {
        input: PathBuf,
        /// Recompute the Hamiltonian from the states instead of using the Hhat column.
        #[arg(long)]
        hamiltonian: Option<String>,
    },
    /// Run the seeded invariant suites.
    Verify,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumInput {
    eigenvalues: Vec<Rational>,
    multiplicities: Vec<i64>,
}

#[derive(Serialize)]
struct VerifySummary {
    seed: u64,
    samples: u64,
    passed: bool,
    suites: Vec<verify::SuiteReport>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string();
            let first = message.lines().next().unwrap_or("").trim_start_matches("error: ");
            return fail(CliError::new("usage", first, "arguments"));
        }
    };
    match run(cli) {
        Ok((output, code)) => {
            print!("{output}");
            ExitCode::from(code)
        }
        Err(e) => fail(e),
    }
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("{}", io::to_json(&e));
    ExitCode::from(e.exit as u8)
}

fn run(cli: Cli) -> Result<(String, u8), CliError> {
    match cli.command {
        Command::Integrality { input } => integrality(&input).map(|s| (s, 0)),
        Command::OrbitInfo { input } => orbit_info(&input).map(|s| (s, 0)),
        Command::Simulate { hamiltonian, x0, t1, dt, gauge, out } => {
            simulate(&hamiltonian, &x0, t1, dt, &gauge, out).map(|s| (s, 0))
        }
        Command::Action { input, hamiltonian } => action(&input, hamiltonian.as_deref()).map(|s| (s, 0)),
        Command::Verify => run_verify(cli.seed, cli.samples, &cli.tolerances),
    }
}

fn line(value: &impl Serialize) -> String {
    format!("{}\n", io::to_json(value))
}

fn integrality(path: &std::path::Path) -> Result<String, CliError> {
    let source = path.display().to_string();
    let text = io::read_input(path)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::json(e, &source))?;
    let blocks = if value.get("eigenvalues").is_some() {
        let parsed: SpectrumInput = serde_json::from_value(value).map_err(|e| CliError::new("invalid_input", e, source.clone()))?;
        if parsed.eigenvalues.len() != parsed.multiplicities.len() {
            return Err(CliError::new(
                "invalid_input",
                format!(
                    "{} eigenvalues but {} multiplicities",
                    parsed.eigenvalues.len(),
                    parsed.multiplicities.len()
                ),
                source,
            ));
        }
        spectral_blocks(parsed.eigenvalues.into_iter().zip(parsed.multiplicities).collect())
    } else {
        let matrix: MatrixJson = serde_json::from_value(value).map_err(|e| CliError::new("invalid_input", e, source.clone()))?;
        matrix.to_hermitian().and_then(|mu| blocks_from_hermitian(&mu))
    }
    .map_err(|e| CliError::domain(e, source.clone()))?;
    let report = build_report(&blocks).map_err(|e| CliError::domain(e, source))?;
    Ok(line(&report))
}

fn orbit_info(path: &std::path::Path) -> Result<String, CliError> {
    let source = path.display().to_string();
    let text = io::read_input(path)?;
    let matrix: MatrixJson = serde_json::from_str(&text).map_err(|e| CliError::json(e, &source))?;
    let info = matrix
        .to_hermitian()
        .and_then(|mu| orbit::orbit_info(&mu))
        .map_err(|e| CliError::domain(e, source))?;
    Ok(line(&info))
}

fn load_hamiltonian(choice: &str) -> Result<Box<dyn HamiltonianOnBase>, CliError> {
    if choice == "linear-z" {
        return Ok(Box::new(LinearZ));
    }
    let text = io::read_input(std::path::Path::new(choice))?;
    let poly: Polynomial = serde_json::from_str(&text).map_err(|e| CliError::json(e, choice))?;
    Ok(Box::new(poly))
}

fn simulate(
    hamiltonian: &str,
    x0: &[f64],
    t1: f64,
    dt: f64,
    gauge: &str,
    out: Option<PathBuf>,
) -> Result<String, CliError> {
    let h = load_hamiltonian(hamiltonian)?;
    let gauge: Gauge = gauge.parse().map_err(|e: String| CliError::new("invalid_gauge", e, "--gauge"))?;
    let x0 = CVector::from_vec(vec![Complex64::new(x0[0], x0[1]), Complex64::new(x0[2], x0[3])]);
    let x0 = SpherePoint::normalize(x0).map_err(|e| CliError::domain(e, "--x0"))?;
    let traj = dynamics::el_flow(h.as_ref(), &x0, t1, dt, gauge).map_err(|e| CliError::domain(e, "simulate"))?;
    let hhat = traj.lifted_values(h.as_ref());
    let mut buffer = Vec::new();
    io::write_trajectory(&mut buffer, traj.times(), traj.states(), traj.projected(), &hhat)
        .map_err(|e| CliError::new("io", e, "csv"))?;
    match out {
        Some(path) => {
            std::fs::write(&path, &buffer).map_err(|e| CliError::new("io", e, path.display().to_string()))?;
            Ok(String::new())
        }
        None => Ok(String::from_utf8(buffer).expect("CSV output is UTF-8")),
    }
}

fn action(path: &std::path::Path, hamiltonian: Option<&str>) -> Result<String, CliError> {
    let source = path.display().to_string();
    let text = io::read_input(path)?;
    let table = io::read_trajectory(&text, &source)?;
    let hhat = match hamiltonian {
        None => table.hhat.clone(),
        Some(choice) => {
            let h = load_hamiltonian(choice)?;
            let lift = HopfLift(h.as_ref());
            table
                .states
                .iter()
                .enumerate()
                .map(|(k, z)| {
                    SpherePoint::new(z.clone())
                        .and_then(|x| lift.value(&x))
                        .map_err(|e| CliError::domain(e, format!("{source}:{}", k + 2)))
                })
                .collect::<Result<Vec<_>, _>>()?
        }
    };
    let value = dynamics::action_from_samples(&table.times, &table.states, &hhat)
        .map_err(|e| CliError::domain(e, source))?;
    Ok(line(&value))
}

fn seed(flag: u64) -> Result<u64, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::new("invalid_seed", format!("'{v}' is not an unsigned integer"), SEED_ENV)),
        Err(std::env::VarError::NotPresent) => Ok(flag),
        Err(e) => Err(CliError::new("invalid_seed", e, SEED_ENV)),
    }
}

fn run_verify(seed_flag: u64, samples: u64, tolerances: &[String]) -> Result<(String, u8), CliError> {
    let seed = seed(seed_flag)?;
    let mut overrides = BTreeMap::new();
    for entry in tolerances {
        let (name, value) = entry
            .split_once('=')
            .ok_or_else(|| CliError::new("invalid_tolerance", format!("expected SUITE=VALUE, got '{entry}'"), "--tolerance"))?;
        let value: f64 = value
            .parse()
            .map_err(|_| CliError::new("invalid_tolerance", format!("'{value}' is not a number"), "--tolerance"))?;
        verify::check_override(name, value).map_err(|m| CliError::new("invalid_tolerance", m, "--tolerance"))?;
        overrides.insert(name.to_string(), value);
    }
    let suites = verify::run_all(seed, samples as usize, &overrides).map_err(|e| CliError::domain(e, "verify"))?;
    let passed = suites.iter().all(|s| s.passed);
    let summary = VerifySummary { seed, samples, passed, suites };
    Ok((line(&summary), if passed { 0 } else { 2 }))
}
