//! `bqp`: generate, solve, verify and enumerate planted boolean quadratic
//! programs.
//!
//! Exit status: 0 success, 1 negative verdict (not certified / verification
//! failed), 2 usage error, 3 write failure, 4 unreadable or malformed input,
//! 5 instance too large for the oracle.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bqp_core::bench::{run_sweep, SweepPlan};
use bqp_core::dual_solver::{solve_dual, SolveOptions};
use bqp_core::exec::{with_threads, Execution};
use bqp_core::generator::{generate_instance, GenConfig, GENERATOR_ID};
use bqp_core::io::{parse_instance, serialize_instance, write_bench_csv, InstanceFile};
use bqp_core::model::objective_value;
use bqp_core::oracle::{brute_force_minimize, DEFAULT_MAX_N, HARD_MAX_N};
use bqp_core::verify::{verify_certificate, DEFAULT_TOL};
use bqp_core::{BqpError, Certificate};
use clap::{Parser, Subcommand};

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_WRITE: u8 = 3;
const EXIT_INPUT: u8 = 4;
const EXIT_TOO_LARGE: u8 = 5;

#[derive(Parser)]
#[command(name = "bqp", version, about = "Planted-optimum boolean quadratic programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance with a planted global minimizer.
    Gen {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, default_value_t = 10.0)]
        base: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.0)]
        margin: f64,
        /// Include the planted x and lambda in the output file.
        #[arg(long)]
        with_certificate: bool,
        #[arg(short = 'o')]
        out: PathBuf,
    },
    /// Maximize the Lagrangian dual and recover the primal solution.
    Solve {
        path: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        grad_tol: f64,
        #[arg(long, default_value_t = 100)]
        max_iter: usize,
        /// Write the instance together with the solved certificate.
        #[arg(long)]
        emit_cert: Option<PathBuf>,
    },
    /// Check the certificate stored in an instance file.
    Verify {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Minimize by exhaustive enumeration.
    Oracle {
        path: PathBuf,
        /// Allow more than 25 variables.
        #[arg(long)]
        force: bool,
    },
    /// Generate and solve one instance per (size, seed), writing timings as CSV.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        seeds: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        csv: PathBuf,
    },
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn write_file(path: &Path, text: &str) -> Result<(), ExitCode> {
    std::fs::write(path, text).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        ExitCode::from(EXIT_WRITE)
    })
}

fn load(path: &Path) -> Result<InstanceFile, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_INPUT)
    })?;
    let file = parse_instance(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(EXIT_INPUT)
    })?;
    if file.instance.has_zero_linear_term() {
        println!("warning: linear term c is the zero vector");
    }
    Ok(file)
}

fn row(values: impl IntoIterator<Item = impl std::fmt::Display>) -> String {
    values
        .into_iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn run_gen(cfg: GenConfig, out: &Path, with_certificate: bool) -> ExitCode {
    if let Err(e) = cfg.validate() {
        return usage(e);
    }
    let (inst, cert) = match generate_instance(&cfg) {
        Ok(pair) => pair,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_NEGATIVE);
        }
    };
    let objective = objective_value(&inst, &cert.x).expect("certificate matches instance");
    let mut file = InstanceFile::new(inst)
        .with_meta("seed", cfg.seed)
        .with_meta("base", cfg.base)
        .with_meta("margin", cfg.margin)
        .with_meta("generator", GENERATOR_ID);
    if with_certificate {
        file = file.with_certificate(cert);
    }
    if let Err(code) = write_file(out, &serialize_instance(&file)) {
        return code;
    }
    println!("objective {objective}");
    ExitCode::SUCCESS
}

fn run_solve(path: &Path, opts: SolveOptions, emit_cert: Option<&Path>) -> ExitCode {
    if let Err(e) = opts.validate() {
        return usage(e);
    }
    let file = match load(path) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let report = match solve_dual(&file.instance, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_NEGATIVE);
        }
    };
    let opt = |v: Option<f64>| v.map_or("none".to_string(), |v| v.to_string());
    println!("status {}", report.status);
    println!("iterations {}", report.iterations);
    println!("lambda {}", row(report.lambda.as_slice()));
    match &report.x {
        Some(x) => println!("x {}", row(x.signs())),
        None => println!("x none"),
    }
    println!("x_raw {}", row(&report.x_raw));
    println!("primal {}", opt(report.primal_value));
    println!("dual {}", opt(report.dual_value));
    println!("gap {}", opt(report.gap));

    if let (Some(out), Some(x)) = (emit_cert, &report.x) {
        let cert = Certificate {
            x: x.clone(),
            lambda: report.lambda.clone(),
        };
        let mut out_file = InstanceFile::new(file.instance.clone()).with_certificate(cert);
        out_file.metadata = file.metadata.clone();
        if let Err(code) = write_file(out, &serialize_instance(&out_file)) {
            return code;
        }
    }
    if report.is_certified() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NEGATIVE)
    }
}

fn run_verify(path: &Path, tol: f64) -> ExitCode {
    if !(tol > 0.0) {
        return usage("--tol must be positive");
    }
    let file = match load(path) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let Some(cert) = &file.certificate else {
        println!("no certificate present");
        return ExitCode::from(EXIT_NEGATIVE);
    };
    let report = match verify_certificate(&file.instance, cert, tol) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    println!("pd_ok {}", report.pd_ok);
    println!("stationary_ok {}", report.stationary_ok);
    println!("boolean_ok {}", report.boolean_ok);
    println!("residual {}", report.residual);
    println!("gap {}", report.gap.map_or("none".to_string(), |g| g.to_string()));
    println!("gap_ok {}", report.gap_ok);
    println!("inertia_of_q {}", report.inertia);
    println!("overall {}", report.overall);
    if report.overall {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NEGATIVE)
    }
}

fn run_oracle(path: &Path, force: bool) -> ExitCode {
    let file = match load(path) {
        Ok(f) => f,
        Err(code) => return code,
    };
    let cap = if force { HARD_MAX_N } else { DEFAULT_MAX_N };
    match brute_force_minimize(&file.instance, cap) {
        Ok(r) => {
            println!("best_x {}", row(r.best_x.signs()));
            println!("best_value {}", r.best_value);
            println!("minimizer_count {}", r.minimizer_count);
            ExitCode::SUCCESS
        }
        Err(e @ BqpError::TooLarge { .. }) => {
            let hint = if force { "" } else { " (use --force to override)" };
            eprintln!("error: {e}{hint}");
            ExitCode::from(EXIT_TOO_LARGE)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_NEGATIVE)
        }
    }
}

fn run_bench(sizes: Vec<usize>, seeds: u64, jobs: usize, csv: &Path) -> ExitCode {
    if sizes.is_empty() || sizes.contains(&0) {
        return usage("--sizes must list positive integers");
    }
    if seeds == 0 {
        return usage("--seeds must be at least 1");
    }
    if jobs == 0 {
        return usage("--jobs must be at least 1");
    }
    let plan = SweepPlan::new(sizes, seeds);
    let exec = if jobs > 1 {
        Execution::Parallel
    } else {
        Execution::Sequential
    };
    let records = match with_threads(jobs, || run_sweep(&plan, exec)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_NEGATIVE);
        }
    };
    if let Err(code) = write_file(csv, &write_bench_csv(&records)) {
        return code;
    }
    let certified = records.iter().filter(|r| r.certified).count();
    println!(
        "wrote {} rows to {} ({certified} certified)",
        records.len(),
        csv.display()
    );
    if certified == records.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NEGATIVE)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Gen {
            n,
            base,
            seed,
            margin,
            with_certificate,
            out,
        } => run_gen(
            GenConfig {
                n,
                base,
                seed,
                margin,
            },
            &out,
            with_certificate,
        ),
        Command::Solve {
            path,
            grad_tol,
            max_iter,
            emit_cert,
        } => {
            let opts = SolveOptions {
                grad_tol,
                max_iter,
                exec: Execution::Sequential,
                ..SolveOptions::default()
            };
            run_solve(&path, opts, emit_cert.as_deref())
        }
        Command::Verify { path, tol } => run_verify(&path, tol),
        Command::Oracle { path, force } => run_oracle(&path, force),
        Command::Bench {
            sizes,
            seeds,
            jobs,
            csv,
        } => run_bench(sizes, seeds, jobs, &csv),
    }
}
